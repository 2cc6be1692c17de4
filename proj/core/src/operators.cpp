#include "ddfv/operators.hpp"

#include "ddfv/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ddfv {

DiscreteField gradient(const DdfvMesh& m, const DiscreteFunctionBar& w) {
  check_compatible(m, w);
  DiscreteField G;
  G.values.resize(m.diamonds.size());
  const double wd = m.dim - 1;
  for (int i = 0; i < m.n_diamonds(); ++i) {
    const Diamond& D = m.diamonds[i];
    const Interface& itf = m.interfaces[i];
    Vec3 g = (w.primal[D.L] - w.primal[D.K]) / itf.dist * itf.normal;
    for (int s : D.subdiamonds) {
      const Subdiamond& S = m.subdiamonds[s];
      if (S.sigma == 0.0) continue;
      const double weight = wd * S.sigma / itf.measure;
      g += weight * (w.dual[S.Ls] - w.dual[S.Ks]) / S.dist_star * S.nu_star;
    }
    G.values[i] = g;
  }
  return G;
}

DiscreteFunction divergence(const DdfvMesh& m, const DiscreteField& F) {
  if (F.values.size() != m.diamonds.size()) throw std::invalid_argument("divergence: field/mesh mismatch");
  DiscreteFunction v = zeros(m);
  for (int K = 0; K < m.n_primal_interior; ++K) {
    const PrimalVolume& P = m.primal[K];
    double s = 0.0;
    for (int i : P.interfaces) {
      const Interface& itf = m.interfaces[i];
      const double sign = itf.K == K ? 1.0 : -1.0;
      s += itf.measure * sign * F.values[i].dot(itf.normal);
    }
    v.primal[K] = s / P.measure;
  }
  for (int Ks = 0; Ks < m.n_dual_interior; ++Ks) {
    const DualVolume& V = m.dual[Ks];
    double s = 0.0;
    for (auto [si, sign] : V.subdiamonds) {
      const Subdiamond& S = m.subdiamonds[si];
      s += S.sigma_star * sign * F.values[S.diamond].dot(S.nu_star);
    }
    v.dual[Ks] = s / V.measure;
  }
  return v;
}

DiscreteFunction penalization(const DdfvMesh& m, const DiscreteFunctionBar& w) {
  check_compatible(m, w);
  DiscreteFunction v = zeros(m);
  for (const Overlap& o : m.overlaps) {
    const double diff = w.primal[o.K] - w.dual[o.Ks];
    if (o.K < m.n_primal_interior) v.primal[o.K] += o.measure * diff;
    if (o.Ks < m.n_dual_interior) v.dual[o.Ks] -= o.measure * diff;
  }
  const double kp = (m.dim - 1) / m.size, kd = 1.0 / m.size;
  for (int K = 0; K < m.n_primal_interior; ++K) v.primal[K] *= kp / m.primal[K].measure;
  for (int Ks = 0; Ks < m.n_dual_interior; ++Ks) v.dual[Ks] *= kd / m.dual[Ks].measure;
  return v;
}

DiscreteFunction convection_divergence(const DdfvMesh& m, const DiscreteFunctionBar& u, const NumericalFlux& g) {
  check_compatible(m, u);
  DiscreteFunction v = zeros(m);
  if (g.vanishes()) return v;
  for (const Interface& itf : m.interfaces) {
    const double q = itf.measure * g(u.primal[itf.K], u.primal[itf.L], itf.normal);
    if (itf.K < m.n_primal_interior) v.primal[itf.K] += q;
    if (itf.L < m.n_primal_interior) v.primal[itf.L] -= q;
  }
  for (const DualInterface& di : m.dual_interfaces) {
    const double q = di.measure * g(u.dual[di.Ks], u.dual[di.Ls], di.normal);
    if (di.Ks < m.n_dual_interior) v.dual[di.Ks] += q;
    if (di.Ls < m.n_dual_interior) v.dual[di.Ls] -= q;
  }
  for (int K = 0; K < m.n_primal_interior; ++K) v.primal[K] /= m.primal[K].measure;
  for (int Ks = 0; Ks < m.n_dual_interior; ++Ks) v.dual[Ks] /= m.dual[Ks].measure;
  return v;
}

DiscreteField apply_diffusion(const ProblemSpec& spec, const DiscreteField& G) {
  DiscreteField A;
  A.values.reserve(G.values.size());
  for (const Vec3& xi : G.values) A.values.push_back(diffusion_flux(spec, xi));
  return A;
}

namespace {

struct InterfaceTerms {
  double I = 0.0;
  double R = 0.0;
  double bound = 0.0;
};

// Terms of one oriented interface with states (a, b), test values (pa, pb) and average pm.
InterfaceTerms interface_terms(const NumericalFlux& g, const ScalarMap& theta, double a, double b, double pa,
                               double pb, double pm, const Vec3& nu) {
  InterfaceTerms t;
  const double gab = g(a, b, nu);
  const double ga = g.consistent(a, nu), gb = g.consistent(b, nu);
  // integrand cancels near equal states; the absolute floor is relative to the flux values
  const double floor = 1e-13 * std::max({1.0, std::abs(ga), std::abs(gb)}) * std::abs(b - a);
  t.I = a == b ? 0.0 : stieltjes([&](double s) { return g.consistent(s, nu) - gab; }, theta, a, b, 1e-12, floor);
  t.R = theta(b) * (gb - gab) * (pb - pm) - theta(a) * (ga - gab) * (pa - pm);
  t.bound = (std::abs(ga - gab) + std::abs(gb - gab)) * (std::abs(pa - pm) + std::abs(pb - pm));
  return t;
}

}  // namespace

EntropyDissipationReport entropy_dissipation_report(const DdfvMesh& m, const DiscreteFunctionBar& u,
                                                    const ScalarMap& theta, const ProjectedTest& psi,
                                                    const NumericalFlux& g, const VecFn1& f) {
  check_compatible(m, u);
  if (!u.in_zero_space(m)) throw std::invalid_argument("entropy_dissipation_report: u has nonzero boundary values");
  const DiscreteFunctionBar& p = psi.values;
  if (theta(0.0) != 0.0) {
    double b = 0.0, mx = 0.0;
    for (int K = m.n_primal_interior; K < m.n_primal(); ++K) b = std::max(b, std::abs(p.primal[K]));
    for (int Ks = m.n_dual_interior; Ks < m.n_dual(); ++Ks) b = std::max(b, std::abs(p.dual[Ks]));
    for (double v : p.primal) mx = std::max(mx, std::abs(v));
    for (double v : p.dual) mx = std::max(mx, std::abs(v));
    if (b > 1e-14 * std::max(mx, 1.0))
      throw std::invalid_argument("entropy_dissipation_report: theta(0) != 0 needs psi vanishing on the boundary");
  }
  const double d = m.dim;
  EntropyDissipationReport r;
  r.I_primal.resize(m.interfaces.size());
  r.I_dual.resize(m.dual_interfaces.size());
  double theta_max = 0.0, theta_max_star = 0.0;
  for (int K = 0; K < m.n_primal_interior; ++K) theta_max = std::max(theta_max, std::abs(theta(u.primal[K])));
  for (int Ks = 0; Ks < m.n_dual_interior; ++Ks)
    theta_max_star = std::max(theta_max_star, std::abs(theta(u.dual[Ks])));

  double min_entry = 0.0, bsum = 0.0;
  for (int i = 0; i < static_cast<int>(m.interfaces.size()); ++i) {
    const Interface& itf = m.interfaces[i];
    const InterfaceTerms t = interface_terms(g, theta, u.primal[itf.K], u.primal[itf.L], p.primal[itf.K],
                                             p.primal[itf.L], psi.interface_avg[i], itf.normal);
    r.I_primal[i] = t.I;
    min_entry = std::min(min_entry, t.I);
    r.I += itf.measure * t.I * psi.interface_avg[i];
    r.R += itf.measure * t.R;
    bsum += itf.measure * t.bound;
  }
  r.I /= d;
  r.R /= d;
  r.R_bound = theta_max * bsum;

  bsum = 0.0;
  for (int i = 0; i < static_cast<int>(m.dual_interfaces.size()); ++i) {
    const DualInterface& di = m.dual_interfaces[i];
    const InterfaceTerms t = interface_terms(g, theta, u.dual[di.Ks], u.dual[di.Ls], p.dual[di.Ks], p.dual[di.Ls],
                                             psi.dual_interface_avg[i], di.normal);
    r.I_dual[i] = t.I;
    min_entry = std::min(min_entry, t.I);
    r.I_star += di.measure * t.I * psi.dual_interface_avg[i];
    r.R_star += di.measure * t.R;
    bsum += di.measure * t.bound;
  }
  r.I_star *= (d - 1.0) / d;
  r.R_star *= (d - 1.0) / d;
  r.R_star_bound = theta_max_star * bsum;
  r.min_entry = min_entry;

  const DiscreteFunction c = convection_divergence(m, u, g);
  const DiscreteFunction tp = [&] {
    DiscreteFunction x = u.interior(m);
    for (int K = 0; K < m.n_primal_interior; ++K) x.primal[K] = theta(x.primal[K]) * p.primal[K];
    for (int Ks = 0; Ks < m.n_dual_interior; ++Ks) x.dual[Ks] = theta(x.dual[Ks]) * p.dual[Ks];
    return x;
  }();
  r.lhs = inner_functions(m, c, tp);

  const VecFn1 q = entropy_flux(theta, f);
  double qp = 0.0, qd = 0.0;
  for (int K = 0; K < m.n_primal_interior; ++K) qp += m.primal[K].measure * q(u.primal[K]).dot(psi.grad_primal[K]);
  for (int Ks = 0; Ks < m.n_dual_interior; ++Ks) qd += m.dual[Ks].measure * q(u.dual[Ks]).dot(psi.grad_dual[Ks]);
  const double qterm = qp / d + (d - 1.0) / d * qd;
  r.rhs = -qterm + r.I + r.R + r.I_star + r.R_star;

  double ninf = 0.0;
  for (double v : u.primal) ninf = std::max(ninf, std::abs(v));
  for (double v : u.dual) ninf = std::max(ninf, std::abs(v));
  double pinf = 0.0;
  for (double v : p.primal) pinf = std::max(pinf, std::abs(v));
  for (double v : p.dual) pinf = std::max(pinf, std::abs(v));
  double finf = 0.0;
  for (int i = -8; i <= 8; ++i) finf = std::max(finf, f(ninf * i / 8.0).norm());
  r.scale = std::max(1.0, std::max(finf, ninf)) * std::max(1.0, pinf) * std::max(1.0, std::abs(theta(ninf))) *
            std::max(1.0, std::abs(theta(-ninf))) * m.domain_measure;
  return r;
}

double weak_bv(const DdfvMesh& m, const DiscreteFunctionBar& u, const NumericalFlux& g) {
  check_compatible(m, u);
  if (g.vanishes()) return 0.0;
  // theta = Id: the Stieltjes integral reduces to a Lebesgue one
  auto term = [&](double a, double b, const Vec3& nu) {
    if (a == b) return 0.0;
    const double gab = g(a, b, nu);
    const double floor =
        1e-13 * std::max({1.0, std::abs(g.consistent(a, nu)), std::abs(g.consistent(b, nu))}) * std::abs(b - a);
    return integrate_adaptive([&](double s) { return g.consistent(s, nu) - gab; }, a, b, 1e-12, floor);
  };
  const double d = m.dim;
  double I = 0.0, Is = 0.0;
  for (const Interface& itf : m.interfaces)
    I += itf.measure * term(u.primal[itf.K], u.primal[itf.L], itf.normal);
  for (const DualInterface& di : m.dual_interfaces)
    Is += di.measure * term(u.dual[di.Ks], u.dual[di.Ls], di.normal);
  return I / d + (d - 1.0) / d * Is;
}

double field_norm_pow(const DdfvMesh& m, const DiscreteField& F, double p) {
  double s = 0.0;
  for (int i = 0; i < m.n_diamonds(); ++i) s += m.diamonds[i].measure * std::pow(F.values[i].norm(), p);
  return s;
}

}  // namespace ddfv
