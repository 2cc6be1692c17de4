#include "ddfv/checks.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <span>
#include <sstream>

namespace ddfv {

namespace {

using Rng = std::mt19937_64;

double uniform(Rng& r, double a, double b) { return std::uniform_real_distribution<double>(a, b)(r); }

DiscreteFunctionBar random_zero_space(const DdfvMesh& m, Rng& r, double amp = 1.0) {
  DiscreteFunctionBar u = zeros_bar(m);
  for (int K = 0; K < m.n_primal_interior; ++K) u.primal[K] = uniform(r, -amp, amp);
  for (int Ks = 0; Ks < m.n_dual_interior; ++Ks) u.dual[Ks] = uniform(r, -amp, amp);
  return u;
}

DiscreteField random_field(const DdfvMesh& m, Rng& r) {
  DiscreteField F;
  F.values.resize(m.diamonds.size());
  for (Vec3& v : F.values) v = Vec3(uniform(r, -1, 1), uniform(r, -1, 1), m.dim == 3 ? uniform(r, -1, 1) : 0.0);
  return F;
}

Vec3 random_vector(int dim, Rng& r) {
  return Vec3(uniform(r, -1, 1), uniform(r, -1, 1), dim == 3 ? uniform(r, -1, 1) : 0.0);
}

double sup(const DiscreteFunctionBar& u) {
  double s = 0.0;
  for (double v : u.primal) s = std::max(s, std::abs(v));
  for (double v : u.dual) s = std::max(s, std::abs(v));
  return s;
}

double sup(const DiscreteField& F) {
  double s = 0.0;
  for (const Vec3& v : F.values) s = std::max(s, v.norm());
  return s;
}

std::array<double, 6> bounding_box(const DdfvMesh& m) {
  std::array<double, 6> b{0, 0, 0, 0, 0, 0};
  for (int i = 0; i < 3; ++i) {
    b[2 * i] = std::numeric_limits<double>::infinity();
    b[2 * i + 1] = -std::numeric_limits<double>::infinity();
  }
  for (const Vec3& p : m.points)
    for (int i = 0; i < 3; ++i) {
      b[2 * i] = std::min(b[2 * i], p[i]);
      b[2 * i + 1] = std::max(b[2 * i + 1], p[i]);
    }
  return b;
}

CheckResult finish(std::string name, double worst, double tol, int samples, const std::string& detail = {}) {
  CheckResult c;
  c.name = std::move(name);
  c.value = worst;
  c.tolerance = tol;
  c.pass = std::isfinite(worst) && worst <= tol;
  c.samples = samples;
  c.detail = detail;
  return c;
}

DiscreteFunction times_theta(const DdfvMesh& m, const DiscreteFunctionBar& u, const ScalarMap& theta,
                             const DiscreteFunctionBar& psi) {
  DiscreteFunction x = zeros(m);
  for (int K = 0; K < m.n_primal_interior; ++K) x.primal[K] = theta(u.primal[K]) * psi.primal[K];
  for (int Ks = 0; Ks < m.n_dual_interior; ++Ks) x.dual[Ks] = theta(u.dual[Ks]) * psi.dual[Ks];
  return x;
}

struct ThetaCase {
  std::string name;
  ScalarMap theta;
};

// Test functions paired with the thetas allowed for them: theta(0) != 0 needs psi vanishing near the boundary.
bool admissible(const ScalarMap& theta, const DiscreteFunctionBar& psi, const DdfvMesh& m) {
  if (theta(0.0) == 0.0) return true;
  for (int K = m.n_primal_interior; K < m.n_primal(); ++K)
    if (psi.primal[K] != 0.0) return false;
  for (int Ks = m.n_dual_interior; Ks < m.n_dual(); ++Ks)
    if (psi.dual[Ks] != 0.0) return false;
  return true;
}

}  // namespace

SpaceFn interior_bump(int dim, const std::array<double, 6>& box) {
  Vec3 c = Vec3::Zero();
  double side = std::numeric_limits<double>::infinity();
  for (int i = 0; i < dim; ++i) {
    c[i] = 0.5 * (box[2 * i] + box[2 * i + 1]);
    side = std::min(side, box[2 * i + 1] - box[2 * i]);
  }
  const double R = 0.2 * side;
  return [c, R](const Vec3& x) {
    const double s = 1.0 - (x - c).squaredNorm() / (R * R);
    return s > 0.0 ? s * s * s : 0.0;
  };
}

CheckResult check_duality(const DdfvMesh& m, int pairs, std::uint64_t seed, const DivergenceFn& div) {
  Rng r(seed);
  double worst = 0.0;
  for (int i = 0; i < pairs; ++i) {
    const DiscreteField F = random_field(m, r);
    const DiscreteFunctionBar v = random_zero_space(m, r);
    DiscreteFunction dv = div(m, F);
    for (double& x : dv.primal) x = -x;
    for (double& x : dv.dual) x = -x;
    const double lhs = inner_functions(m, dv, v.interior(m));
    const double rhs = inner_fields(m, F, gradient(m, v));
    worst = std::max(worst, std::abs(lhs - rhs) / (sup(F) * sup(v) * m.domain_measure));
  }
  return finish("duality_" + std::to_string(m.dim) + "d", worst, 1e-11, pairs);
}

CheckResult check_affine_exactness(const DdfvMesh& m, std::uint64_t seed) {
  Rng r(seed);
  double worst = 0.0;
  const int trials = 5;
  for (int t = 0; t < trials; ++t) {
    const double c0 = uniform(r, -3, 3);
    const Vec3 slope = 3.0 * random_vector(m.dim, r);
    auto aff = [&](const Vec3& x) { return c0 + slope.dot(x); };
    DiscreteFunctionBar w = zeros_bar(m);
    for (int K = 0; K < m.n_primal(); ++K) w.primal[K] = aff(m.primal[K].center);
    for (int Ks = 0; Ks < m.n_dual(); ++Ks) w.dual[Ks] = aff(m.dual[Ks].center);
    const DiscreteField G = gradient(m, w);
    const double s = std::max(1.0, slope.norm());
    for (const Vec3& g : G.values) worst = std::max(worst, (g - slope).norm() / s);
  }
  return finish("affine_exactness_" + std::to_string(m.dim) + "d", worst, 1e-12, trials);
}

CheckResult check_reconstruction(const DdfvMesh& m, int vectors, std::uint64_t seed) {
  Rng r(seed);
  double worst = 0.0;
  for (int i = 0; i < m.n_diamonds(); ++i) {
    const Diamond& D = m.diamonds[i];
    const Interface& itf = m.interfaces[i];
    for (int k = 0; k < vectors; ++k) {
      const Vec3 v = random_vector(m.dim, r);
      Vec3 rec = v.dot(itf.normal) * itf.normal;
      for (int s : D.subdiamonds) {
        const Subdiamond& S = m.subdiamonds[s];
        const double w = m.dim == 2 ? 1.0 : 2.0 * S.measure / D.measure;
        rec += w * v.dot(S.nu_star) * S.nu_star;
      }
      worst = std::max(worst, (rec - v).norm() / v.norm());
    }
  }
  return finish("reconstruction_" + std::to_string(m.dim) + "d", worst, 1e-12, m.n_diamonds() * vectors);
}

CheckResult check_triangle_reconstruction(int triangles, std::uint64_t seed) {
  Rng r(seed);
  double worst = 0.0;
  int done = 0;
  while (done < triangles) {
    std::array<Vec3, 3> t;
    for (Vec3& p : t) p = Vec3(uniform(r, -1, 1), uniform(r, -1, 1), 0.0);
    auto cross2 = [](const Vec3& a, const Vec3& b) { return a[0] * b[1] - a[1] * b[0]; };
    const double area2 = cross2(t[1] - t[0], t[2] - t[0]);
    const double emax = std::max({(t[1] - t[0]).norm(), (t[2] - t[1]).norm(), (t[0] - t[2]).norm()});
    // skip near-degenerate draws whose circumcenter is numerically meaningless
    if (std::abs(area2) < 0.05 * emax * emax) continue;
    const Vec3 t0 = circumcenter(std::span<const Vec3>(t.data(), 3));
    const Vec3 v = random_vector(2, r);
    Vec3 rec = Vec3::Zero();
    for (int l = 0; l < 3; ++l) {
      const Vec3& a = t[(l + 2) % 3];
      const Vec3& b = t[(l + 1) % 3];
      // signed area of (t0, a, b), negative when t0 and t_l are on opposite sides of the edge
      const double s0 = cross2(b - a, t0 - a), sl = cross2(b - a, t[l] - a);
      const double Tl = 0.5 * std::abs(s0) * (s0 * sl >= 0 ? 1.0 : -1.0);
      const Vec3 e = (b - a).normalized();
      rec += Tl * v.dot(e) * e;
    }
    rec *= 2.0 / (0.5 * std::abs(area2));
    worst = std::max(worst, (rec - v).norm() / v.norm());
    ++done;
  }
  return finish("triangle_reconstruction", worst, 1e-12, triangles);
}

CheckResult check_entropy_dissipation(const DdfvMesh& m, const ProblemSpec& spec, int samples, std::uint64_t seed) {
  Rng r(seed);
  const auto box = bounding_box(m);
  const ProjectedTest one = project_bar(m, [](const Vec3&) { return 1.0; });
  const ProjectedTest bump = project_bar(m, interior_bump(m.dim, box));
  double worst = 0.0;
  int count = 0;
  for (int i = 0; i < samples; ++i) {
    const DiscreteFunctionBar u = random_zero_space(m, r);
    const double c = uniform(r, -0.5, 0.5);
    const std::vector<ThetaCase> thetas{{"id", identity_map()}, {"A", spec.A}, {"sign", sign_plus(c, 0.1)}};
    const DiscreteFunctionBar w = compose(u, spec.A);
    const DiscreteField Gw = gradient(m, w);
    const DiscreteField F = apply_diffusion(spec, Gw);
    const DiscreteFunction divF = divergence(m, F);
    for (const ThetaCase& tc : thetas) {
      const ScalarMap At = A_theta(tc.theta, spec.A);
      const DiscreteField Gt = gradient(m, compose(u, [&](double z) { return At(z); }));
      for (const ProjectedTest* psi : {&one, &bump}) {
        if (!admissible(tc.theta, psi->values, m)) continue;
        const double lhs = inner_functions(m, divF, times_theta(m, u, tc.theta, psi->values));
        const DiscreteField Gp = gradient(m, psi->values);
        double rhs = 0.0;
        for (int D = 0; D < m.n_diamonds(); ++D) {
          const double k = Gw.values[D].norm() == 0.0 ? 0.0 : spec.k(Gw.values[D]);
          rhs -= m.diamonds[D].measure * k * Gt.values[D].dot(Gp.values[D]);
        }
        double th = 0.0;
        for (double v : u.primal) th = std::max(th, std::abs(tc.theta(v)));
        for (double v : u.dual) th = std::max(th, std::abs(tc.theta(v)));
        const double scale = std::max(sup(F), 1e-300) * std::max(th, 1.0) * sup(psi->values) * m.domain_measure;
        worst = std::max(worst, (lhs - rhs) / scale);
        ++count;
      }
    }
  }
  return finish("entropy_dissipation_" + std::to_string(m.dim) + "d", worst, 1e-10, count);
}

CheckResult check_penalization_summation(const DdfvMesh& m, int samples, std::uint64_t seed) {
  Rng r(seed);
  double worst = 0.0;
  const double d = m.dim;
  for (int i = 0; i < samples; ++i) {
    DiscreteFunctionBar w = zeros_bar(m);
    for (double& x : w.primal) x = uniform(r, -1, 1);
    for (double& x : w.dual) x = uniform(r, -1, 1);
    const DiscreteFunctionBar psi = random_zero_space(m, r);
    const double lhs = inner_functions(m, penalization(m, w), psi.interior(m));
    double rhs = 0.0;
    for (const Overlap& o : m.overlaps)
      rhs += o.measure * (w.primal[o.K] - w.dual[o.Ks]) * (psi.primal[o.K] - psi.dual[o.Ks]);
    rhs *= (d - 1.0) / d / m.size;
    const double scale = sup(w) * sup(psi) * m.domain_measure / m.size;
    worst = std::max(worst, std::abs(lhs - rhs) / scale);
  }
  return finish("penalization_summation_" + std::to_string(m.dim) + "d", worst, 1e-12, samples);
}

CheckResult check_penalization_theta(const DdfvMesh& m, const ProblemSpec& spec, int samples, std::uint64_t seed) {
  Rng r(seed);
  const auto box = bounding_box(m);
  const ProjectedTest one = project_bar(m, [](const Vec3&) { return 1.0; });
  const ProjectedTest bump = project_bar(m, interior_bump(m.dim, box));
  const double d = m.dim;
  double worst = 0.0;
  int count = 0;
  for (int i = 0; i < samples; ++i) {
    const DiscreteFunctionBar u = random_zero_space(m, r);
    const DiscreteFunctionBar w = compose(u, spec.A);
    const DiscreteFunction Pw = penalization(m, w);
    const double c = uniform(r, -0.5, 0.5);
    const std::vector<ThetaCase> thetas{{"id", identity_map()}, {"A", spec.A}, {"sign", sign_plus(c, 0.1)}};
    for (const ThetaCase& tc : thetas)
      for (const ProjectedTest* psi : {&one, &bump}) {
        if (!admissible(tc.theta, psi->values, m)) continue;
        const DiscreteFunctionBar& p = psi->values;
        const double lhs = inner_functions(m, Pw, times_theta(m, u, tc.theta, p));
        double rhs = 0.0;
        for (const Overlap& o : m.overlaps)
          rhs += o.measure * tc.theta(u.primal[o.K]) * (w.primal[o.K] - w.dual[o.Ks]) * (p.primal[o.K] - p.dual[o.Ks]);
        rhs *= (d - 1.0) / d / m.size;
        double th = 1.0;
        for (double v : u.primal) th = std::max(th, std::abs(tc.theta(v)));
        for (double v : u.dual) th = std::max(th, std::abs(tc.theta(v)));
        const double scale = std::max(sup(w), 1e-300) * th * sup(p) * m.domain_measure / m.size;
        worst = std::max(worst, (rhs - lhs) / scale);
        ++count;
      }
  }
  return finish("penalization_theta_" + std::to_string(m.dim) + "d", worst, 1e-10, count);
}

CheckResult check_evolution_duality(const DdfvMesh& m, int samples, std::uint64_t seed) {
  Rng r(seed);
  const auto box = bounding_box(m);
  const SpaceFn bump = interior_bump(m.dim, box);
  const int N = 6;
  const double dt = 0.1;
  double worst = 0.0;
  int count = 0;
  for (int i = 0; i < samples; ++i) {
    const double omega = uniform(r, 1.0, 4.0);
    const SpaceTimeFn psi = [&, omega](double t, const Vec3& x) {
      return (1.5 + std::cos(omega * t)) * (0.2 + bump(x) + x[0] * x[0]);
    };
    const std::vector<ProjectedTest> P = project_space_time(m, psi, dt, N, 2, 2);
    std::vector<DiscreteFunction> u;
    for (int n = 0; n <= N; ++n) u.push_back(random_zero_space(m, r).interior(m));
    const double c = uniform(r, -0.5, 0.5);
    for (const ScalarMap& theta : {identity_map(), sign_plus(c, 0.0), sign_plus(c, 0.2), sign_minus(c, 0.0)}) {
      const auto eta = entropy_primitive(theta);
      auto pi = [&](int n) { return P[n].values.interior(m); };
      double lhs = 0.0;
      for (int n = 1; n <= N; ++n) {
        DiscreteFunction diff = u[n], tp = pi(n);
        for (size_t k = 0; k < diff.primal.size(); ++k) {
          diff.primal[k] -= u[n - 1].primal[k];
          tp.primal[k] *= theta(u[n].primal[k]);
        }
        for (size_t k = 0; k < diff.dual.size(); ++k) {
          diff.dual[k] -= u[n - 1].dual[k];
          tp.dual[k] *= theta(u[n].dual[k]);
        }
        lhs += inner_functions(m, diff, tp);
      }
      double rhs = 0.0;
      for (int n = 1; n < N; ++n) {
        DiscreteFunction dp = pi(n + 1);
        const DiscreteFunction pn = pi(n);
        for (size_t k = 0; k < dp.primal.size(); ++k) dp.primal[k] -= pn.primal[k];
        for (size_t k = 0; k < dp.dual.size(); ++k) dp.dual[k] -= pn.dual[k];
        rhs -= inner_functions(m, compose(u[n], eta), dp);
      }
      rhs += inner_functions(m, compose(u[N], eta), pi(N));
      rhs -= inner_functions(m, compose(u[0], eta), pi(1));
      const double scale = 4.0 * m.domain_measure * N;
      worst = std::max(worst, (rhs - lhs) / scale);
      ++count;
    }
  }
  return finish("evolution_duality_" + std::to_string(m.dim) + "d", worst, 1e-12, count);
}

CheckResult check_convection_decomposition(const DdfvMesh& m, const ProblemSpec& spec, FluxScheme scheme, int samples,
                                           std::uint64_t seed) {
  Rng r(seed);
  const auto box = bounding_box(m);
  const auto g = make_flux(spec, scheme, 1.0);
  const ProjectedTest one = project_bar(m, [](const Vec3&) { return 1.0; });
  const ProjectedTest bump = project_bar(m, interior_bump(m.dim, box));
  double worst_identity = 0.0, min_entry = 0.0, worst_bound = 0.0;
  int count = 0;
  for (int i = 0; i < samples; ++i) {
    const DiscreteFunctionBar u = random_zero_space(m, r);
    const double c = uniform(r, -0.5, 0.5);
    for (const ScalarMap& theta : {identity_map(), sign_plus(c, 0.0), sign_plus(c, 0.1), sign_minus(c, 0.0)})
      for (const ProjectedTest* psi : {&one, &bump}) {
        if (!admissible(theta, psi->values, m)) continue;
        const EntropyDissipationReport rep = entropy_dissipation_report(m, u, theta, *psi, *g, spec.f);
        worst_identity = std::max(worst_identity, std::abs(rep.defect()) / rep.scale);
        min_entry = std::min(min_entry, rep.min_entry);
        const double slack_tol = 1e-12 * rep.scale;
        worst_bound = std::max({worst_bound, std::abs(rep.R) - rep.R_bound - slack_tol,
                                std::abs(rep.R_star) - rep.R_star_bound - slack_tol});
        ++count;
      }
  }
  std::ostringstream os;
  os << "min I entry " << min_entry << ", remainder excess " << worst_bound;
  CheckResult c = finish(std::string("convection_decomposition_") + to_string(scheme) + "_" + std::to_string(m.dim) +
                             "d",
                         worst_identity, 1e-9, count, os.str());
  c.pass = c.pass && min_entry >= -1e-12 && worst_bound <= 0.0;
  return c;
}

std::vector<CheckResult> verify_suite(const DdfvMesh& m, const ProblemSpec& spec, const VerifyOptions& opt) {
  std::vector<CheckResult> out;
  const std::uint64_t s = opt.seed;
  out.push_back(check_duality(m, opt.duality_pairs, s, opt.divergence_override ? opt.divergence_override : divergence));
  out.push_back(check_affine_exactness(m, s + 1));
  out.push_back(check_reconstruction(m, opt.reconstruction_vectors, s + 2));
  out.push_back(check_triangle_reconstruction(opt.triangles, s + 3));
  out.push_back(check_entropy_dissipation(m, spec, opt.dissipation_samples, s + 4));
  out.push_back(check_penalization_summation(m, opt.dissipation_samples, s + 5));
  out.push_back(check_penalization_theta(m, spec, opt.dissipation_samples, s + 6));
  out.push_back(check_evolution_duality(m, opt.evolution_samples, s + 7));
  ProblemOptions po;
  po.dim = m.dim;
  po.box = bounding_box(m);
  const ProblemSpec burgers = builtin_problem("burgers_diffusion(0)", po);
  for (FluxScheme sc : opt.schemes)
    out.push_back(check_convection_decomposition(m, burgers, sc, opt.convection_samples, s + 8));
  return out;
}

}  // namespace ddfv
