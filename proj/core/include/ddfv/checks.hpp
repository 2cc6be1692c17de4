#pragma once

#include "ddfv/flux.hpp"
#include "ddfv/operators.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace ddfv {

/// Outcome of one structural check: `value` is the worst normalized defect, compared with `tolerance`.
struct CheckResult {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double tolerance = 0.0;
  int samples = 0;
  std::string detail;
};

using DivergenceFn = std::function<DiscreteFunction(const DdfvMesh&, const DiscreteField&)>;

/// |[[-div F, v]] - {{F, grad v}}| / (|F|_inf |v|_inf |Omega|) over random pairs with v in the zero space.
CheckResult check_duality(const DdfvMesh& m, int pairs, std::uint64_t seed, const DivergenceFn& div = divergence);

/// Gradient of affine data equals its slope on every diamond.
CheckResult check_affine_exactness(const DdfvMesh& m, std::uint64_t seed);

/// Per-diamond decomposition of random vectors on the primal normal and the weighted dual normals.
CheckResult check_reconstruction(const DdfvMesh& m, int vectors, std::uint64_t seed);

/// Weighted edge projections inside random triangles, with signed sub-areas around the circumcenter.
CheckResult check_triangle_reconstruction(int triangles, std::uint64_t seed);

/// [[div a(grad A(u)), theta(u) psi]] <= -{{k(grad A(u)) grad A_theta(u), grad psi}}.
CheckResult check_entropy_dissipation(const DdfvMesh& m, const ProblemSpec& spec, int samples, std::uint64_t seed);

/// [[P w, psi]] against the overlap double sum, for psi in the zero space.
CheckResult check_penalization_summation(const DdfvMesh& m, int samples, std::uint64_t seed);

/// Lower bound of [[P A(u), theta(u) psi]] by the theta-weighted overlap sum.
CheckResult check_penalization_theta(const DdfvMesh& m, const ProblemSpec& spec, int samples, std::uint64_t seed);

/// Abel-summation lower bound for the discrete time derivative tested against theta(u^n) psi^n.
CheckResult check_evolution_duality(const DdfvMesh& m, int samples, std::uint64_t seed);

/// Convection decomposition identity, sign of the interface dissipation and the remainder bound.
CheckResult check_convection_decomposition(const DdfvMesh& m, const ProblemSpec& spec, FluxScheme scheme, int samples,
                                           std::uint64_t seed);

struct VerifyOptions {
  std::uint64_t seed = 1;
  int duality_pairs = 50;
  int reconstruction_vectors = 100;
  int triangles = 1000;
  int dissipation_samples = 20;
  int convection_samples = 10;
  int evolution_samples = 10;
  std::vector<FluxScheme> schemes{FluxScheme::Godunov, FluxScheme::Rusanov};
  DivergenceFn divergence_override;  ///< replaces the divergence in the duality check when set
};

/// Full identity suite on one mesh; convection checks use the Burgers flux along the first axis.
std::vector<CheckResult> verify_suite(const DdfvMesh& m, const ProblemSpec& spec, const VerifyOptions& opt);

/// Nonnegative bump centred in the box, supported in a ball of radius 0.2 min side.
SpaceFn interior_bump(int dim, const std::array<double, 6>& box);

}  // namespace ddfv
