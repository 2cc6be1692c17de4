#pragma once

#include "ddfv/solver.hpp"

#include <string>
#include <vector>

namespace ddfv {

/// Nonnegative space-time test function.
struct EntropyTest {
  std::string name;
  SpaceTimeFn psi;
};

/// Three compactly supported tests psi(t, x) = zeta(t) b(x), each vanishing well before T.
std::vector<EntropyTest> default_entropy_tests(int dim, const std::array<double, 6>& box, double T);

enum class EntropyKind { Weak, Plus, Minus };

/// Signed slack of one discrete entropy (or weak) relation for a converged run.
///
/// lhs collects the time, entropy-flux, diffusion and source terms; rhs the penalization and
/// convection remainders. slack = lhs - rhs. For the weak form the slack equals minus the tested
/// solver residual; for the entropy forms it is bounded below by it.
struct EntropyResidual {
  std::string test;
  EntropyKind kind = EntropyKind::Weak;
  double c = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  double solver_term = 0.0;   ///< sum dt [[R^n, theta(u^n) psi^n]] with R^n the step residual
  double dissipation = 0.0;   ///< sum dt (I + I*), dropped from the inequality
  double penalization = 0.0;  ///< theta-weighted overlap sum
  double remainder = 0.0;     ///< sum dt (R + R*)
  double gaps = 0.0;          ///< time, diffusion and penalization inequality gaps, each >= 0
  double identity_defect = 0.0;  ///< slack - (dissipation + gaps - solver_term), roundoff only
  double scale = 0.0;
  bool pass = false;
};

struct EntropyResidualOptions {
  std::vector<double> levels{-0.5, 0.0, 0.5};
  double tolerance = 1e-8;
  int quad_degree = 3;
  int time_points = 3;
};

/// Evaluates the weak form and both semi-Kruzhkov inequalities for every test and level.
/// Throws std::invalid_argument when a test is negative somewhere or, for theta(0) != 0,
/// does not vanish on the boundary volumes.
std::vector<EntropyResidual> discrete_entropy_residuals(const DdfvMesh& m, const ProblemSpec& spec,
                                                        const SchemeConfig& cfg, const RunResult& result,
                                                        const std::vector<EntropyTest>& tests,
                                                        const EntropyResidualOptions& opt = {});

std::string to_string(EntropyKind k);

}  // namespace ddfv
