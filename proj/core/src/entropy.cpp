#include "ddfv/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace ddfv {

namespace {

// Smooth cutoff equal to 1 before t0 and 0 after t1.
double cutoff(double t, double t0, double t1) {
  if (t <= t0) return 1.0;
  if (t >= t1) return 0.0;
  const double s = (t - t0) / (t1 - t0);
  const double c = std::cos(0.5 * std::numbers::pi * s);
  return c * c;
}

SpaceFn ball_bump(const Vec3& c, double R) {
  return [c, R](const Vec3& x) {
    const double s = 1.0 - (x - c).squaredNorm() / (R * R);
    return s > 0.0 ? s * s * s : 0.0;
  };
}

// Per-step data shared by every (test, theta) pair.
struct StepData {
  DiscreteFunction u_prev;
  DiscreteFunctionBar w;
  DiscreteField Gw;
  DiscreteFunction neg_div;  // -div a(grad w)
  DiscreteFunction pen;
  DiscreteFunction residual;
};

DiscreteFunction theta_times(const DdfvMesh& m, const DiscreteFunctionBar& u, const ScalarMap& theta,
                             const DiscreteFunctionBar& psi) {
  DiscreteFunction v = zeros(m);
  for (int K = 0; K < m.n_primal_interior; ++K) v.primal[K] = theta(u.primal[K]) * psi.primal[K];
  for (int Ks = 0; Ks < m.n_dual_interior; ++Ks) v.dual[Ks] = theta(u.dual[Ks]) * psi.dual[Ks];
  return v;
}

DiscreteFunction minus(const DdfvMesh& m, const DiscreteFunctionBar& a, const DiscreteFunctionBar& b) {
  DiscreteFunction v = zeros(m);
  for (int K = 0; K < m.n_primal_interior; ++K) v.primal[K] = a.primal[K] - b.primal[K];
  for (int Ks = 0; Ks < m.n_dual_interior; ++Ks) v.dual[Ks] = a.dual[Ks] - b.dual[Ks];
  return v;
}

double q_term(const DdfvMesh& m, const DiscreteFunctionBar& u, const VecFn1& q, const ProjectedTest& psi) {
  const double d = m.dim;
  double qp = 0.0, qd = 0.0;
  for (int K = 0; K < m.n_primal_interior; ++K) qp += m.primal[K].measure * q(u.primal[K]).dot(psi.grad_primal[K]);
  for (int Ks = 0; Ks < m.n_dual_interior; ++Ks) qd += m.dual[Ks].measure * q(u.dual[Ks]).dot(psi.grad_dual[Ks]);
  return qp / d + (d - 1.0) / d * qd;
}

}  // namespace

std::string to_string(EntropyKind k) {
  switch (k) {
    case EntropyKind::Weak:
      return "weak";
    case EntropyKind::Plus:
      return "plus";
    case EntropyKind::Minus:
      return "minus";
  }
  return "?";
}

std::vector<EntropyTest> default_entropy_tests(int dim, const std::array<double, 6>& box, double T) {
  Vec3 lo = Vec3::Zero(), len = Vec3::Zero();
  double side = std::numeric_limits<double>::infinity();
  for (int i = 0; i < dim; ++i) {
    lo[i] = box[2 * i];
    len[i] = box[2 * i + 1] - box[2 * i];
    side = std::min(side, len[i]);
  }
  auto at = [&](double a, double b, double c) { return Vec3(lo + Vec3(a, b, c).cwiseProduct(len)); };
  const SpaceFn b1 = ball_bump(at(0.5, 0.5, 0.5), 0.3 * side);
  const SpaceFn b2 = ball_bump(at(0.4, 0.6, 0.5), 0.22 * side);
  const SpaceFn b3 = ball_bump(at(0.55, 0.45, 0.5), 0.35 * side);
  return {
      {"centre", [=](double t, const Vec3& x) { return cutoff(t, 0.25 * T, 0.75 * T) * b1(x); }},
      {"offset", [=](double t, const Vec3& x) { return cutoff(t, 0.0, 0.5 * T) * b2(x); }},
      {"wide", [=](double t, const Vec3& x) {
         const double s = std::max(0.0, 1.0 - t / (0.8 * T));
         return s * s * s * b3(x);
       }},
  };
}

std::vector<EntropyResidual> discrete_entropy_residuals(const DdfvMesh& m, const ProblemSpec& spec,
                                                        const SchemeConfig& cfg, const RunResult& result,
                                                        const std::vector<EntropyTest>& tests,
                                                        const EntropyResidualOptions& opt) {
  const int N = result.u.N;
  const double dt = result.u.dt;
  if (N < 1 || static_cast<int>(result.u.slices.size()) != N + 1)
    throw std::invalid_argument("discrete_entropy_residuals: incomplete run");
  const double d = m.dim;
  const auto g = make_flux(spec, cfg.flux, result.diag.M);

  std::vector<StepData> steps(N + 1);
  for (int n = 1; n <= N; ++n) {
    const DiscreteFunctionBar& u = result.u.slices[n];
    StepData& s = steps[n];
    s.u_prev = result.u.slices[n - 1].interior(m);
    s.w = compose(u, spec.A.value);
    s.Gw = gradient(m, s.w);
    s.neg_div = divergence(m, apply_diffusion(spec, s.Gw));
    for (double& x : s.neg_div.primal) x = -x;
    for (double& x : s.neg_div.dual) x = -x;
    s.pen = cfg.penalization ? penalization(m, s.w) : zeros(m);
    s.residual = residual(m, spec, *g, u, s.u_prev, result.source[n], dt, cfg.penalization);
  }

  struct ThetaCase {
    EntropyKind kind;
    double c;
    ScalarMap theta;
    std::function<double(double)> eta;
    VecFn1 q;
  };
  std::vector<ThetaCase> cases;
  cases.push_back({EntropyKind::Weak, 0.0, constant_map(1.0), [](double z) { return z; }, spec.f});
  for (double c : opt.levels)
    for (int sign : {1, -1}) {
      EntropyPair e = entropy_pair(sign, c, 0.0, spec.f);
      cases.push_back({sign > 0 ? EntropyKind::Plus : EntropyKind::Minus, c, e.theta, e.eta, e.q});
    }

  std::vector<EntropyResidual> out;
  for (const EntropyTest& test : tests) {
    const auto psi = project_space_time(m, test.psi, dt, N, opt.quad_degree, opt.time_points);
    double pmin = 0.0;
    for (int n = 1; n <= N; ++n) {
      for (double v : psi[n].values.primal) pmin = std::min(pmin, v);
      for (double v : psi[n].values.dual) pmin = std::min(pmin, v);
    }
    if (pmin < -1e-14) throw std::invalid_argument("discrete_entropy_residuals: test '" + test.name + "' is negative");
    std::vector<DiscreteField> grad_psi(N + 1);
    for (int n = 1; n <= N; ++n) grad_psi[n] = gradient(m, psi[n].values);

    for (const ThetaCase& tc : cases) {
      EntropyResidual r;
      r.test = test.name;
      r.kind = tc.kind;
      r.c = tc.c;
      const ScalarMap At = A_theta(tc.theta, spec.A);
      auto eta_of = [&](const DiscreteFunctionBar& u) { return compose(u, tc.eta); };

      // time terms with Abel summation
      double time_terms = -inner_functions(m, eta_of(result.u.slices[N]), psi[N].values) +
                          inner_functions(m, eta_of(result.u.slices[0]), psi[1].values);
      double abs_sum = std::abs(time_terms);
      for (int n = 1; n < N; ++n) {
        const double t = inner_functions(m, eta_of(result.u.slices[n]).interior(m), minus(m, psi[n + 1].values, psi[n].values));
        time_terms += t;
        abs_sum += std::abs(t);
      }

      double q_sum = 0.0, k_sum = 0.0, src = 0.0, pen_bound = 0.0, rem = 0.0, dis = 0.0, res = 0.0;
      double raw_time = 0.0, raw_diff = 0.0, raw_pen = 0.0;
      for (int n = 1; n <= N; ++n) {
        const DiscreteFunctionBar& u = result.u.slices[n];
        const StepData& s = steps[n];
        const ProjectedTest& p = psi[n];
        const DiscreteFunction v = theta_times(m, u, tc.theta, p.values);

        const auto rep = entropy_dissipation_report(m, u, tc.theta, p, *g, spec.f);
        const double qn = q_term(m, u, tc.q, p);

        const DiscreteField Gt = gradient(m, compose(u, At.value));
        double kn = 0.0;
        for (int D = 0; D < m.n_diamonds(); ++D) {
          const Vec3& xi = s.Gw.values[D];
          const double k = xi.squaredNorm() == 0.0 ? 0.0 : spec.k(xi);
          kn += m.diamonds[D].measure * k * Gt.values[D].dot(grad_psi[n].values[D]);
        }

        double pn = 0.0;
        if (cfg.penalization) {
          for (const Overlap& o : m.overlaps)
            pn += o.measure * tc.theta(u.primal[o.K]) * (s.w.primal[o.K] - s.w.dual[o.Ks]) *
                  (p.values.primal[o.K] - p.values.dual[o.Ks]);
          pn *= (d - 1.0) / d / m.size;
        }

        const double sn = inner_functions(m, result.source[n], v);
        DiscreteFunction du = u.interior(m);
        for (int K = 0; K < m.n_primal_interior; ++K) du.primal[K] -= s.u_prev.primal[K];
        for (int Ks = 0; Ks < m.n_dual_interior; ++Ks) du.dual[Ks] -= s.u_prev.dual[Ks];

        q_sum += dt * qn;
        k_sum += dt * kn;
        src += dt * sn;
        pen_bound += dt * pn;
        rem += dt * (rep.R + rep.R_star);
        dis += dt * (rep.I + rep.I_star);
        res += dt * inner_functions(m, s.residual, v);
        raw_time += inner_functions(m, du, v);
        raw_diff += dt * inner_functions(m, s.neg_div, v);
        raw_pen += dt * inner_functions(m, s.pen, v);
        abs_sum += dt * (std::abs(qn) + std::abs(kn) + std::abs(sn) + std::abs(pn) + std::abs(rep.R) +
                         std::abs(rep.R_star));
      }

      r.lhs = time_terms + q_sum - k_sum + src;
      r.rhs = pen_bound + rem;
      r.slack = r.lhs - r.rhs;
      r.solver_term = res;
      r.dissipation = dis;
      r.penalization = pen_bound;
      r.remainder = rem;
      r.gaps = (raw_time + time_terms) + (raw_diff - k_sum) + (raw_pen - pen_bound);
      r.identity_defect = r.slack - (dis + r.gaps - res);
      r.scale = std::max(1.0, abs_sum);
      const double tol = opt.tolerance * r.scale;
      r.pass = tc.kind == EntropyKind::Weak ? std::abs(r.slack) <= tol : r.slack >= -std::abs(res) - tol;
      out.push_back(r);
    }
  }
  return out;
}

}  // namespace ddfv
