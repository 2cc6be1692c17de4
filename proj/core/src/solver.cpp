#include "ddfv/solver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <thread>

namespace ddfv {

void validate(const SchemeConfig& cfg) {
  if (!(cfg.dt > 0.0)) throw std::invalid_argument("scheme: dt must be positive");
  if (!(cfg.T > 0.0)) throw std::invalid_argument("scheme: T must be positive");
  if (!(cfg.tol > 0.0)) throw std::invalid_argument("scheme: tol must be positive");
  if (!(cfg.rho >= 0.0)) throw std::invalid_argument("scheme: rho must be nonnegative");
  if (cfg.max_newton < 1 || cfg.max_halvings < 0) throw std::invalid_argument("scheme: bad iteration limits");
  if (!(cfg.picard_relaxation > 0.0 && cfg.picard_relaxation <= 1.0))
    throw std::invalid_argument("scheme: picard relaxation must lie in (0, 1]");
  for (double r : cfg.rho_sequence)
    if (!(r >= 0.0)) throw std::invalid_argument("scheme: negative rho in continuation");
}

DiscreteFunctionBar initial_condition(const ProblemSpec& spec, const DdfvMesh& m, int degree) {
  if (!spec.u0) return zeros_bar(m);
  return extend_by_zero(m, project_cells(m, spec.u0, degree));
}

namespace {

// a(xi) with k either exact, floored at |xi| >= delta, or frozen per diamond.
struct DiffusionLaw {
  const ProblemSpec* spec = nullptr;
  double delta = 0.0;
  const std::vector<double>* frozen = nullptr;

  Vec3 operator()(int D, const Vec3& xi) const {
    if (frozen) return (*frozen)[D] * xi;
    if (delta <= 0.0 || spec->p >= 2.0) return diffusion_flux(*spec, xi);
    const double n = xi.norm();
    if (n >= delta) return spec->k(xi) * xi;
    const Vec3 dir = n > 0.0 ? Vec3(xi / n) : Vec3::UnitX();
    return spec->k(delta * dir) * xi;
  }
};

DiscreteFunction residual_impl(const DdfvMesh& m, const ProblemSpec& spec, const NumericalFlux& g,
                               const DiscreteFunctionBar& u, const DiscreteFunction& u_prev, const DiscreteFunction& S,
                               double dt, bool penalize, double rho, const DiffusionLaw& law) {
  DiscreteFunctionBar w = compose(u, spec.A.value);
  if (rho > 0.0) {
    for (size_t i = 0; i < w.primal.size(); ++i) w.primal[i] += rho * u.primal[i];
    for (size_t i = 0; i < w.dual.size(); ++i) w.dual[i] += rho * u.dual[i];
  }
  const DiscreteField G = gradient(m, w);
  DiscreteField F;
  F.values.resize(G.values.size());
  for (size_t D = 0; D < G.values.size(); ++D) F.values[D] = law(static_cast<int>(D), G.values[D]);
  DiscreteFunction r = divergence(m, F);
  const DiscreteFunction c = convection_divergence(m, u, g);
  DiscreteFunction p;
  if (penalize) p = penalization(m, w);
  for (int K = 0; K < m.n_primal_interior; ++K) {
    double v = (u.primal[K] - u_prev.primal[K]) / dt + c.primal[K] - r.primal[K] - S.primal[K];
    if (penalize) v += p.primal[K];
    r.primal[K] = v;
  }
  for (int Ks = 0; Ks < m.n_dual_interior; ++Ks) {
    double v = (u.dual[Ks] - u_prev.dual[Ks]) / dt + c.dual[Ks] - r.dual[Ks] - S.dual[Ks];
    if (penalize) v += p.dual[Ks];
    r.dual[Ks] = v;
  }
  return r;
}

int n_unknowns(const DdfvMesh& m) { return m.n_primal_interior + m.n_dual_interior; }

void scatter(const DdfvMesh& m, const Eigen::VectorXd& x, DiscreteFunctionBar& u) {
  for (int K = 0; K < m.n_primal_interior; ++K) u.primal[K] = x[K];
  for (int Ks = 0; Ks < m.n_dual_interior; ++Ks) u.dual[Ks] = x[m.n_primal_interior + Ks];
}

Eigen::VectorXd gather(const DdfvMesh& m, const DiscreteFunction& r) {
  Eigen::VectorXd x(n_unknowns(m));
  for (int K = 0; K < m.n_primal_interior; ++K) x[K] = r.primal[K];
  for (int Ks = 0; Ks < m.n_dual_interior; ++Ks) x[m.n_primal_interior + Ks] = r.dual[Ks];
  return x;
}

// Coupling graph of the unknowns and a distance-2 coloring for finite-difference Jacobians.
struct Stencil {
  std::vector<std::vector<int>> adj;  ///< includes the unknown itself
  std::vector<std::vector<int>> colors;

  explicit Stencil(const DdfvMesh& m) {
    const int n = n_unknowns(m), nP = m.n_primal_interior;
    std::vector<std::set<int>> a(n);
    auto add_group = [&](const std::vector<int>& grp) {
      for (int i : grp)
        for (int j : grp) a[i].insert(j);
    };
    for (const Diamond& D : m.diamonds) {
      std::vector<int> grp;
      if (D.K < nP) grp.push_back(D.K);
      if (D.L < nP) grp.push_back(D.L);
      for (int s : D.duals)
        if (s < m.n_dual_interior) grp.push_back(nP + s);
      add_group(grp);
    }
    for (const DualInterface& di : m.dual_interfaces)
      if (di.Ks < m.n_dual_interior && di.Ls < m.n_dual_interior) add_group({nP + di.Ks, nP + di.Ls});
    for (const Overlap& o : m.overlaps)
      if (o.K < nP && o.Ks < m.n_dual_interior) add_group({o.K, nP + o.Ks});
    adj.resize(n);
    for (int i = 0; i < n; ++i) {
      a[i].insert(i);
      adj[i].assign(a[i].begin(), a[i].end());
    }
    std::vector<int> color(n, -1);
    std::vector<int> mark;
    for (int j = 0; j < n; ++j) {
      for (int k : adj[j])
        for (int l : adj[k])
          if (color[l] >= 0) {
            if (static_cast<int>(mark.size()) <= color[l]) mark.resize(color[l] + 1, -1);
            mark[color[l]] = j;
          }
      int c = 0;
      while (c < static_cast<int>(mark.size()) && mark[c] == j) ++c;
      color[j] = c;
      if (static_cast<int>(colors.size()) <= c) colors.resize(c + 1);
      colors[c].push_back(j);
    }
  }
};

class StepSolver {
 public:
  StepSolver(const DdfvMesh& m, const ProblemSpec& spec, const NumericalFlux& g, const SchemeConfig& cfg)
      : m_(m), spec_(spec), g_(g), cfg_(cfg), stencil_(m) {}

  DiscreteFunctionBar solve(const DiscreteFunction& u_prev, const DiscreteFunction& S, StepReport& rep) {
    up_ = &u_prev;
    S_ = &S;
    DiscreteFunctionBar u0 = extend_by_zero(m_, u_prev);
    Eigen::VectorXd x = gather(m_, u_prev);
    best_ = std::numeric_limits<double>::infinity();
    best_x_ = x;
    int iters = 0;
    rep.rho = 0.0;
    rep.strategy = "newton";

    const double base_rho = cfg_.rho;
    Outcome o = newton(x, base_rho, iters);
    if (!o.converged && cfg_.continuation) {
      rep.strategy = "continuation";
      Eigen::VectorXd y = gather(m_, u_prev);
      for (double r : cfg_.rho_sequence) {
        const double rr = std::max(r, base_rho);
        if (rr > 0.0) rep.rho = rep.rho == 0.0 ? rr : std::min(rep.rho, rr);
        o = newton(y, rr, iters);
      }
      x = y;
    }
    if (!o.converged && cfg_.picard) {
      rep.strategy = "picard";
      x = best_x_;
      o = picard(x, iters);
    }
    rep.iterations = iters;
    if (!o.converged) {
      DiscreteFunctionBar it = zeros_bar(m_);
      scatter(m_, best_x_, it);
      std::ostringstream os;
      os << "nonlinear solve did not converge (best residual " << best_ << ", tolerance " << cfg_.tol << ")";
      throw NonConvergence(os.str(), best_, it, rep.strategy + (rep.rho > 0 ? " rho=" + std::to_string(rep.rho) : ""));
    }
    DiscreteFunctionBar u = zeros_bar(m_);
    scatter(m_, x, u);
    rep.residual = o.norm;
    return u;
  }

 private:
  struct Outcome {
    bool converged = false;
    double norm = 0.0;
  };

  Eigen::VectorXd eval(const Eigen::VectorXd& x, double rho, const DiffusionLaw& law) {
    DiscreteFunctionBar u = zeros_bar(m_);
    scatter(m_, x, u);
    return gather(m_, residual_impl(m_, spec_, g_, u, *up_, *S_, cfg_.dt, cfg_.penalization, rho, law));
  }

  double norm(const Eigen::VectorXd& r) const {
    DiscreteFunction f = zeros(m_);
    for (int K = 0; K < m_.n_primal_interior; ++K) f.primal[K] = r[K];
    for (int Ks = 0; Ks < m_.n_dual_interior; ++Ks) f.dual[Ks] = r[m_.n_primal_interior + Ks];
    return residual_norm(m_, f);
  }

  void note(const Eigen::VectorXd& x, double nrm, double rho) {
    if (rho == cfg_.rho && nrm < best_) {
      best_ = nrm;
      best_x_ = x;
    }
  }

  Eigen::SparseMatrix<double> jacobian(const Eigen::VectorXd& x, const Eigen::VectorXd& r0, double rho,
                                       const DiffusionLaw& law) {
    const int n = static_cast<int>(x.size());
    const auto& colors = stencil_.colors;
    std::vector<std::vector<Eigen::Triplet<double>>> parts(colors.size());
    auto work = [&](size_t c) {
      Eigen::VectorXd xp = x;
      for (int j : colors[c]) xp[j] += step(x[j]);
      const Eigen::VectorXd rp = eval(xp, rho, law);
      for (int j : colors[c]) {
        const double h = xp[j] - x[j];
        for (int i : stencil_.adj[j]) parts[c].emplace_back(i, j, (rp[i] - r0[i]) / h);
      }
    };
    const int nt = std::max(1, std::min<int>(cfg_.threads, static_cast<int>(colors.size())));
    if (nt == 1) {
      for (size_t c = 0; c < colors.size(); ++c) work(c);
    } else {
      std::vector<std::thread> pool;
      for (int t = 0; t < nt; ++t)
        pool.emplace_back([&, t] {
          for (size_t c = t; c < colors.size(); c += nt) work(c);
        });
      for (auto& th : pool) th.join();
    }
    std::vector<Eigen::Triplet<double>> trip;
    for (auto& p : parts) trip.insert(trip.end(), p.begin(), p.end());
    Eigen::SparseMatrix<double> J(n, n);
    J.setFromTriplets(trip.begin(), trip.end());
    return J;
  }

  static double step(double v) { return 1e-7 * std::max(1.0, std::abs(v)); }

  bool linear_solve(const Eigen::SparseMatrix<double>& J, const Eigen::VectorXd& rhs, Eigen::VectorXd& out) {
    if (!analyzed_) {
      lu_.analyzePattern(J);
      analyzed_ = true;
    }
    lu_.factorize(J);
    if (lu_.info() != Eigen::Success) return false;
    out = lu_.solve(rhs);
    return lu_.info() == Eigen::Success && out.allFinite();
  }

  Outcome newton(Eigen::VectorXd& x, double rho, int& iters) {
    const DiffusionLaw exact{&spec_, 0.0, nullptr};
    const DiffusionLaw floored{&spec_, cfg_.delta, nullptr};
    Eigen::VectorXd r = eval(x, rho, exact);
    double nr = norm(r);
    note(x, nr, rho);
    for (int it = 0; it < cfg_.max_newton; ++it) {
      if (nr <= cfg_.tol) return {true, nr};
      const Eigen::VectorXd rj = spec_.p < 2.0 ? eval(x, rho, floored) : r;
      const Eigen::SparseMatrix<double> J = jacobian(x, rj, rho, floored);
      Eigen::VectorXd dx;
      if (!linear_solve(J, -r, dx)) return {false, nr};
      ++iters;
      double lambda = 1.0;
      bool accepted = false;
      for (int h = 0; h <= cfg_.max_halvings; ++h) {
        const Eigen::VectorXd xn = x + lambda * dx;
        const Eigen::VectorXd rn = eval(xn, rho, exact);
        const double nn = norm(rn);
        if (std::isfinite(nn) && nn <= (1.0 - cfg_.armijo * lambda) * nr) {
          x = xn;
          r = rn;
          nr = nn;
          accepted = true;
          break;
        }
        lambda *= 0.5;
      }
      note(x, nr, rho);
      if (!accepted) return {nr <= cfg_.tol, nr};
    }
    return {nr <= cfg_.tol, nr};
  }

  Outcome picard(Eigen::VectorXd& x, int& iters) {
    const double rho = cfg_.rho;
    const DiffusionLaw exact{&spec_, 0.0, nullptr};
    std::vector<double> kf(m_.diamonds.size());
    Eigen::VectorXd r = eval(x, rho, exact);
    double nr = norm(r);
    for (int it = 0; it < cfg_.max_picard; ++it) {
      if (nr <= cfg_.tol) return {true, nr};
      // freeze k at the current gradient
      DiscreteFunctionBar u = zeros_bar(m_);
      scatter(m_, x, u);
      DiscreteFunctionBar w = compose(u, spec_.A.value);
      if (rho > 0.0) {
        for (size_t i = 0; i < w.primal.size(); ++i) w.primal[i] += rho * u.primal[i];
        for (size_t i = 0; i < w.dual.size(); ++i) w.dual[i] += rho * u.dual[i];
      }
      const DiscreteField G = gradient(m_, w);
      for (size_t D = 0; D < kf.size(); ++D) {
        const double nx = G.values[D].norm();
        const Vec3 xi = nx >= cfg_.delta ? G.values[D] : Vec3(cfg_.delta * Vec3::UnitX());
        kf[D] = spec_.k(xi);
      }
      const DiffusionLaw frozen{&spec_, 0.0, &kf};
      const Eigen::VectorXd rf = eval(x, rho, frozen);
      const Eigen::SparseMatrix<double> J = jacobian(x, rf, rho, frozen);
      Eigen::VectorXd dx;
      if (!linear_solve(J, -rf, dx)) return {false, nr};
      ++iters;
      x += cfg_.picard_relaxation * dx;
      r = eval(x, rho, exact);
      nr = norm(r);
      note(x, nr, rho);
    }
    return {nr <= cfg_.tol, nr};
  }

  const DdfvMesh& m_;
  const ProblemSpec& spec_;
  const NumericalFlux& g_;
  const SchemeConfig& cfg_;
  Stencil stencil_;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
  bool analyzed_ = false;
  const DiscreteFunction* up_ = nullptr;
  const DiscreteFunction* S_ = nullptr;
  double best_ = 0.0;
  Eigen::VectorXd best_x_;
};

}  // namespace

DiscreteFunction residual(const DdfvMesh& m, const ProblemSpec& spec, const NumericalFlux& g,
                          const DiscreteFunctionBar& u, const DiscreteFunction& u_prev, const DiscreteFunction& S,
                          double dt, bool penalize, double rho) {
  check_compatible(m, u);
  check_compatible(m, u_prev);
  check_compatible(m, S);
  return residual_impl(m, spec, g, u, u_prev, S, dt, penalize, rho, DiffusionLaw{&spec, 0.0, nullptr});
}

DiscreteFunction residual_explicit(const DdfvMesh& m, const ProblemSpec& spec, const NumericalFlux& g,
                                   const DiscreteFunctionBar& u, const DiscreteFunction& u_prev,
                                   const DiscreteFunction& S, double dt, bool penalize) {
  const int d = m.dim;
  auto A = [&](double z) { return spec.A(z); };
  // subdiamond gradient of A(u) written out from the difference quotients
  auto grad_S = [&](int D) {
    const Diamond& dm = m.diamonds[D];
    const Interface& itf = m.interfaces[D];
    Vec3 v = (A(u.primal[dm.L]) - A(u.primal[dm.K])) / itf.dist * itf.normal;
    for (int s : dm.subdiamonds) {
      const Subdiamond& sd = m.subdiamonds[s];
      const double weight = d == 2 ? 1.0 : 2.0 * sd.measure / dm.measure;
      v += weight * (A(u.dual[sd.Ls]) - A(u.dual[sd.Ks])) / sd.dist_star * sd.nu_star;
    }
    return v;
  };
  std::vector<std::vector<const Overlap*>> ov_primal(m.n_primal()), ov_dual(m.n_dual());
  for (const Overlap& o : m.overlaps) {
    ov_primal[o.K].push_back(&o);
    ov_dual[o.Ks].push_back(&o);
  }
  DiscreteFunction r = zeros(m);
  for (int K = 0; K < m.n_primal_interior; ++K) {
    const PrimalVolume& P = m.primal[K];
    double v = P.measure * (u.primal[K] - u_prev.primal[K]) / dt;
    for (int i : P.interfaces) {
      const Interface& itf = m.interfaces[i];
      const bool own = itf.K == K;
      const Vec3 nuK = own ? itf.normal : Vec3(-itf.normal);
      const int L = own ? itf.L : itf.K;
      if (!g.vanishes()) v += itf.measure * g(u.primal[K], u.primal[L], nuK);
      const Vec3 a = diffusion_flux(spec, grad_S(i));
      for (int s : m.diamonds[i].subdiamonds) v -= m.subdiamonds[s].sigma * a.dot(nuK);
    }
    if (penalize)
      for (const Overlap* o : ov_primal[K])
        v += (d - 1.0) / m.size * o->measure * (A(u.primal[K]) - A(u.dual[o->Ks]));
    r.primal[K] = v / P.measure - S.primal[K];
  }
  for (int Ks = 0; Ks < m.n_dual_interior; ++Ks) {
    const DualVolume& V = m.dual[Ks];
    double v = V.measure * (u.dual[Ks] - u_prev.dual[Ks]) / dt;
    for (int i : V.interfaces) {
      const DualInterface& di = m.dual_interfaces[i];
      const bool own = di.Ks == Ks;
      const Vec3 nu = own ? di.normal : Vec3(-di.normal);
      const int Ls = own ? di.Ls : di.Ks;
      if (!g.vanishes()) v += di.measure * g(u.dual[Ks], u.dual[Ls], nu);
    }
    for (auto [si, sign] : V.subdiamonds) {
      const Subdiamond& sd = m.subdiamonds[si];
      v -= sd.sigma_star * diffusion_flux(spec, grad_S(sd.diamond)).dot(sign * sd.nu_star);
    }
    if (penalize)
      for (const Overlap* o : ov_dual[Ks]) v += 1.0 / m.size * o->measure * (A(u.dual[Ks]) - A(u.primal[o->K]));
    r.dual[Ks] = v / V.measure - S.dual[Ks];
  }
  return r;
}

double residual_norm(const DdfvMesh& m, const DiscreteFunction& r) { return std::sqrt(inner_functions(m, r, r)); }

DiscreteFunctionBar nonlinear_solve(const DdfvMesh& m, const ProblemSpec& spec, const NumericalFlux& g,
                                    const DiscreteFunction& u_prev, const DiscreteFunction& S,
                                    const SchemeConfig& cfg, StepReport& report) {
  validate(cfg);
  StepSolver solver(m, spec, g, cfg);
  return solver.solve(u_prev, S, report);
}

namespace {

void fill_stats(const DdfvMesh& m, const DiscreteFunctionBar& u, StepReport& r) {
  r.umin = std::numeric_limits<double>::infinity();
  r.umax = -r.umin;
  for (int K = 0; K < m.n_primal_interior; ++K) {
    r.umin = std::min(r.umin, u.primal[K]);
    r.umax = std::max(r.umax, u.primal[K]);
  }
  for (int Ks = 0; Ks < m.n_dual_interior; ++Ks) {
    r.umin = std::min(r.umin, u.dual[Ks]);
    r.umax = std::max(r.umax, u.dual[Ks]);
  }
  r.linf = std::max(std::abs(r.umin), std::abs(r.umax));
  double mp = 0.0, md = 0.0;
  for (int K = 0; K < m.n_primal_interior; ++K) mp += m.primal[K].measure * u.primal[K];
  for (int Ks = 0; Ks < m.n_dual_interior; ++Ks) md += m.dual[Ks].measure * u.dual[Ks];
  r.mass = mp / m.dim + (m.dim - 1.0) / m.dim * md;
}

}  // namespace

RunResult run(const ProblemSpec& spec, const DdfvMesh& m, const SchemeConfig& cfg, const StepCallback& cb) {
  validate(cfg);
  if (spec.dim != m.dim) throw std::invalid_argument("run: problem and mesh dimensions differ");
  const int N = static_cast<int>(std::floor(cfg.T / cfg.dt * (1.0 + 1e-12)));
  if (N < 1) throw std::invalid_argument("run: T shorter than one time step");

  RunResult res;
  res.diag.M = m_bound(spec, N * cfg.dt);
  res.u.dt = res.w.dt = cfg.dt;
  res.u.N = res.w.N = N;
  if (spec.source)
    res.source = time_average(m, spec.source, cfg.dt, N, cfg.quad_degree, cfg.time_points, spec.source_breaks);
  else
    res.source.assign(N + 1, zeros(m));

  const double M = std::max(res.diag.M, 1e-12);
  const auto g = make_flux(spec, cfg.flux, M);
  StepSolver solver(m, spec, *g, cfg);

  DiscreteFunctionBar u = initial_condition(spec, m, cfg.quad_degree);
  res.u.slices.push_back(u);
  res.w.slices.push_back(compose(u, spec.A.value));
  StepReport r0;
  fill_stats(m, u, r0);
  res.steps.push_back(r0);

  double gap2 = 0.0;
  for (int n = 1; n <= N; ++n) {
    StepReport rep;
    rep.n = n;
    rep.t = n * cfg.dt;
    const DiscreteFunction prev = u.interior(m);
    try {
      u = solver.solve(prev, res.source[n], rep);
    } catch (NonConvergence& e) {
      e.partial = std::make_shared<RunResult>(res);
      e.partial->u.N = e.partial->w.N = n - 1;
      throw;
    }
    fill_stats(m, u, rep);
    const DiscreteFunctionBar w = compose(u, spec.A.value);
    res.u.slices.push_back(u);
    res.w.slices.push_back(w);
    res.steps.push_back(rep);

    res.diag.max_linf = std::max(res.diag.max_linf, rep.linf);
    res.diag.energy += cfg.dt * field_norm_pow(m, gradient(m, w), spec.p);
    res.diag.penalization_sum += cfg.dt * inner_functions(m, penalization(m, w), w.interior(m));
    res.diag.weak_bv += cfg.dt * weak_bv(m, u, *g);
    double s = 0.0;
    for (const Overlap& o : m.overlaps) {
      const double diff = w.primal[o.K] - w.dual[o.Ks];
      s += o.measure * diff * diff;
    }
    gap2 += cfg.dt * s;
    if (cb) cb(rep);
  }
  res.diag.gap_l2 = std::sqrt(gap2);
  return res;
}

}  // namespace ddfv
