#pragma once

#include "ddfv/fields.hpp"
#include "ddfv/flux.hpp"
#include "ddfv/physics.hpp"

#include <vector>

namespace ddfv {

/// Discrete gradient, one vector per diamond.
DiscreteField gradient(const DdfvMesh& m, const DiscreteFunctionBar& w);

/// Discrete divergence on interior primal and dual volumes.
DiscreteFunction divergence(const DdfvMesh& m, const DiscreteField& F);

/// Double-mesh penalization of w, weighted by 1/size.
DiscreteFunction penalization(const DdfvMesh& m, const DiscreteFunctionBar& w);

/// Convection divergence with the numerical flux g on primal and dual interfaces.
DiscreteFunction convection_divergence(const DdfvMesh& m, const DiscreteFunctionBar& u, const NumericalFlux& g);

/// a(G_D) per diamond.
DiscreteField apply_diffusion(const ProblemSpec& spec, const DiscreteField& G);

/// Entropy dissipation terms of the convection operator against theta(u) psi.
struct EntropyDissipationReport {
  std::vector<double> I_primal;  ///< per primal interface, int_{u_K}^{u_L} (g(s,s) - g_KL) d theta
  std::vector<double> I_dual;    ///< per dual interface
  double I = 0.0;                ///< (1/d) sum m_KL I_KL psi_KL
  double I_star = 0.0;           ///< ((d-1)/d) sum m_K*L* I_K*L* psi_K*L*
  double R = 0.0;
  double R_star = 0.0;
  double R_bound = 0.0;
  double R_star_bound = 0.0;
  double lhs = 0.0;  ///< [[div_c f(u), theta(u) psi]]
  double rhs = 0.0;  ///< -[[q(u), grad psi]] + I + R + I* + R*
  double min_entry = 0.0;
  double scale = 1.0;

  double defect() const { return lhs - rhs; }
};

/// Requires theta(0) = 0 or psi vanishing near the boundary; throws std::invalid_argument otherwise.
EntropyDissipationReport entropy_dissipation_report(const DdfvMesh& m, const DiscreteFunctionBar& u,
                                                    const ScalarMap& theta, const ProjectedTest& psi,
                                                    const NumericalFlux& g, const VecFn1& f);

/// Weak-BV density I_Id[u, 1] + I*_Id[u, 1] of one time slice.
double weak_bv(const DdfvMesh& m, const DiscreteFunctionBar& u, const NumericalFlux& g);

/// ||F||_{L^p} ^ p = sum_D m_D |F_D|^p.
double field_norm_pow(const DdfvMesh& m, const DiscreteField& F, double p);

}  // namespace ddfv
