#pragma once

#include "ddfv/flux.hpp"
#include "ddfv/operators.hpp"

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace ddfv {

struct SchemeConfig {
  double dt = 0.01;
  double T = 1.0;
  FluxScheme flux = FluxScheme::Godunov;
  bool penalization = true;
  double rho = 0.0;  ///< fixed regularization A + rho z; the scheme itself uses 0
  double tol = 1e-9;  ///< on sqrt([[R, R]])
  int max_newton = 40;
  int max_halvings = 30;
  double armijo = 1e-4;
  bool continuation = true;
  std::vector<double> rho_sequence{1e-2, 1e-4, 1e-6, 0.0};
  bool picard = true;
  double picard_relaxation = 0.7;
  int max_picard = 400;
  double delta = 1e-10;  ///< floor on |xi| inside k while building Jacobians
  int quad_degree = 3;
  int time_points = 3;
  int threads = 1;
};

void validate(const SchemeConfig& cfg);

struct StepReport {
  int n = 0;
  double t = 0.0;
  double residual = 0.0;
  int iterations = 0;
  double rho = 0.0;  ///< smallest nonzero rho visited by the continuation, 0 if none
  std::string strategy = "newton";
  double linf = 0.0;
  double umin = 0.0;
  double umax = 0.0;
  double mass = 0.0;  ///< (1/d) sum m_K u_K + ((d-1)/d) sum m_K* u_K*
};

struct RunDiagnostics {
  double M = 0.0;               ///< ||u0||_inf + int ||S||_inf
  double max_linf = 0.0;        ///< over n >= 1
  double energy = 0.0;          ///< sum dt ||grad w||_p^p
  double penalization_sum = 0.0;  ///< sum dt [[P w, w]]
  double weak_bv = 0.0;         ///< sum dt (I_Id + I*_Id)
  double gap_l2 = 0.0;          ///< ||w^M - w^M*||_{L^2(Q)}
};

struct RunResult {
  SpaceTimeFunction u;
  SpaceTimeFunction w;
  std::vector<DiscreteFunction> source;  ///< S^n, index 0 unused
  std::vector<StepReport> steps;
  RunDiagnostics diag;
};

class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(const std::string& what, double best, DiscreteFunctionBar iterate, std::string state)
      : std::runtime_error(what), best_residual(best), iterate(std::move(iterate)), state(std::move(state)) {}
  double best_residual;
  DiscreteFunctionBar iterate;
  std::string state;
  std::shared_ptr<RunResult> partial;
};

DiscreteFunctionBar initial_condition(const ProblemSpec& spec, const DdfvMesh& m, int degree = 3);

/// Scheme residual per unit volume, with A replaced by A + rho z.
DiscreteFunction residual(const DdfvMesh& m, const ProblemSpec& spec, const NumericalFlux& g,
                          const DiscreteFunctionBar& u, const DiscreteFunction& u_prev, const DiscreteFunction& S,
                          double dt, bool penalize = true, double rho = 0.0);

/// The same residual assembled volume by volume from interface and subdiamond sums.
DiscreteFunction residual_explicit(const DdfvMesh& m, const ProblemSpec& spec, const NumericalFlux& g,
                                   const DiscreteFunctionBar& u, const DiscreteFunction& u_prev,
                                   const DiscreteFunction& S, double dt, bool penalize = true);

double residual_norm(const DdfvMesh& m, const DiscreteFunction& r);

/// One implicit step; throws NonConvergence.
DiscreteFunctionBar nonlinear_solve(const DdfvMesh& m, const ProblemSpec& spec, const NumericalFlux& g,
                                    const DiscreteFunction& u_prev, const DiscreteFunction& S,
                                    const SchemeConfig& cfg, StepReport& report);

using StepCallback = std::function<void(const StepReport&)>;

RunResult run(const ProblemSpec& spec, const DdfvMesh& m, const SchemeConfig& cfg, const StepCallback& cb = {});

}  // namespace ddfv
