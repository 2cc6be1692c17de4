#include "commands.hpp"

#include "ddfv/checks.hpp"
#include "ddfv/output.hpp"
#include "ddfv/reference.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>

namespace ddfv::cli {

namespace {

std::ofstream open_out(const std::string& dir, const std::string& name) {
  std::ofstream f(output_path(dir, name));
  if (!f) throw ConfigError("cannot write " + name + " in " + dir);
  return f;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

void write_snapshots(const Config& cfg, const std::string& dir, const DdfvMesh& m, const RunResult& r) {
  if (cfg.flag("output.csv", true)) {
    auto f = open_out(dir, "steps.csv");
    write_step_csv(f, r.steps);
  }
  if (cfg.flag("output.space_time", true)) {
    auto f = open_out(dir, "space_time.csv");
    write_csv(f, m, r.u);
  }
  if (cfg.flag("output.vtk", true) && !r.u.slices.empty()) {
    auto p = open_out(dir, "u_primal.vtk");
    write_vtk_primal(p, m, r.u.slices.back());
    auto d = open_out(dir, "u_dual.vtk");
    write_vtk_dual(d, m, r.u.slices.back());
  }
}

// Final-time value of a run as a function of space, for error evaluation.
double final_time(const RunResult& r) { return r.u.N * r.u.dt; }

Vec3 grad_of(const std::function<double(const Vec3&)>& g, const Vec3& x, int dim, double h) {
  Vec3 out = Vec3::Zero();
  for (int i = 0; i < dim; ++i) {
    Vec3 e = Vec3::Zero();
    e[i] = h;
    out[i] = (g(x + e) - g(x - e)) / (2.0 * h);
  }
  return out;
}

// ||grad^T w - grad A(u*)||_{L^p} at the final time, sampled at diamond midpoints.
double gradient_error(const DdfvMesh& m, const ProblemSpec& spec, const RunResult& r, const SpaceTimeFn& exact,
                      double p) {
  const double T = final_time(r);
  const DiscreteField G = gradient(m, r.w.slices.back());
  auto Aex = [&](const Vec3& x) { return spec.A(exact(T, x)); };
  const double h = 1e-6 * m.length_scale;
  double s = 0.0;
  for (int D = 0; D < m.n_diamonds(); ++D) {
    const Diamond& d = m.diamonds[D];
    const Vec3 x = 0.5 * (m.primal[d.K].center + m.primal[d.L].center);
    s += d.measure * std::pow((G.values[D] - grad_of(Aex, x, m.dim, h)).norm(), p);
  }
  return std::pow(s, 1.0 / p);
}

}  // namespace

void apply(Config& cfg, const Overrides& o) {
  if (o.seed) cfg.set("verify.seed", std::to_string(*o.seed));
  if (o.threads) cfg.set("scheme.threads", std::to_string(*o.threads));
  if (o.exact_reductions) cfg.set("scheme.threads", "1");
}

int cmd_mesh_info(const Config& cfg, std::ostream& out) {
  const DdfvMesh m = make_mesh(cfg);
  const std::string report = mesh_report(m);
  out << report;
  auto f = open_out(output_dir(cfg), "mesh_info.txt");
  f << report;
  return Ok;
}

int cmd_verify(const Config& cfg, std::ostream& out) {
  const DdfvMesh m = make_mesh(cfg);
  const ProblemSpec spec = make_problem(cfg, m);
  const VerifyOptions opt = make_verify_options(cfg);
  const auto results = verify_suite(m, spec, opt);
  auto f = open_out(output_dir(cfg), "verify.csv");
  f << "check,pass,value,tolerance,samples,detail\n";
  bool ok = true;
  for (const CheckResult& r : results) {
    ok = ok && r.pass;
    out << std::left << std::setw(40) << r.name << (r.pass ? "PASS " : "FAIL ") << fmt(r.value) << " (tol "
        << fmt(r.tolerance) << ", n=" << r.samples << ")";
    if (!r.detail.empty()) out << ' ' << r.detail;
    out << '\n';
    f << r.name << ',' << (r.pass ? 1 : 0) << ',' << std::setprecision(17) << r.value << ',' << r.tolerance << ','
      << r.samples << ",\"" << r.detail << "\"\n";
  }
  out << (ok ? "all checks passed\n" : "verification FAILED\n");
  return ok ? Ok : VerifyFailure;
}

int cmd_run(const Config& cfg, std::ostream& out) {
  const DdfvMesh m = make_mesh(cfg);
  const ProblemSpec spec = make_problem(cfg, m);
  const SchemeConfig sc = make_scheme(cfg);
  const std::string dir = output_dir(cfg);
  RunResult r;
  try {
    r = run(spec, m, sc, [&](const StepReport& s) {
      out << "step " << s.n << " t=" << fmt(s.t) << " it=" << s.iterations << " res=" << fmt(s.residual) << ' '
          << s.strategy << '\n';
    });
  } catch (const NonConvergence& e) {
    out << "solver failure: " << e.what() << " (best residual " << fmt(e.best_residual) << ", " << e.state << ")\n";
    if (e.partial) {
      write_snapshots(cfg, dir, m, *e.partial);
      auto f = open_out(dir, "diagnostics.csv");
      write_diagnostics(f, e.partial->diag, {{"converged", 0.0}});
    }
    return SolverFailure;
  }
  write_snapshots(cfg, dir, m, r);
  std::vector<std::pair<std::string, double>> extra{{"converged", 1.0}, {"final_mass", r.steps.back().mass}};
  if (spec.exact) {
    const double T = final_time(r);
    const double e = lift_error(m, r.u.slices.back(), [&](const Vec3& x) { return spec.exact(T, x); },
                                LiftKind::Combined, 2.0);
    extra.emplace_back("final_l2_error", e);
  }
  auto f = open_out(dir, "diagnostics.csv");
  write_diagnostics(f, r.diag, extra);
  out << "M=" << fmt(r.diag.M) << " max|u|=" << fmt(r.diag.max_linf) << " energy=" << fmt(r.diag.energy)
      << " penalization=" << fmt(r.diag.penalization_sum) << " weak_bv=" << fmt(r.diag.weak_bv)
      << " gap_l2=" << fmt(r.diag.gap_l2) << '\n';
  for (const auto& [k, v] : extra) out << k << '=' << fmt(v) << '\n';
  return Ok;
}

int cmd_convergence(const Config& base, std::ostream& out) {
  const auto ladder = make_ladder(base);
  const std::string dir = output_dir(base);
  std::string reference = base.get("convergence.reference", "auto");

  auto f = open_out(dir, "convergence.csv");
  f << "n,size,dt,l1_primal,l1_dual,l1_combined,l2_primal,l2_dual,l2_combined,final_l2,grad_w,gap_l2,"
       "order_l1,order_l2,order_final_l2,order_gap\n";
  out << std::left << std::setw(6) << "n" << std::setw(14) << "size" << std::setw(14) << "L1(Q)" << std::setw(14)
      << "L2(Q)" << std::setw(14) << "L2(T)" << std::setw(14) << "gap" << '\n';

  struct Row {
    double size, l1, l2, fin, gap;
  };
  std::vector<Row> rows;
  for (const LadderLevel& lv : ladder) {
    Config cfg = base;
    cfg.set("mesh.n", std::to_string(lv.n));
    if (cfg.has("mesh.nx")) cfg.set("mesh.nx", std::to_string(lv.n));
    if (cfg.has("mesh.ny")) cfg.set("mesh.ny", std::to_string(lv.n));
    if (cfg.has("mesh.nz")) cfg.set("mesh.nz", std::to_string(lv.n));
    char dt[32];
    std::snprintf(dt, sizeof dt, "%.17g", lv.dt);
    cfg.set("scheme.dt", dt);
    const DdfvMesh m = make_mesh(cfg);
    const ProblemSpec spec = make_problem(cfg, m);
    const SchemeConfig sc = make_scheme(cfg);

    SpaceTimeFn exact;
    std::string ref = reference;
    if (ref == "auto") ref = spec.exact ? "exact" : "viscosity";
    if (ref == "exact") {
      if (!spec.exact) throw ConfigError(base.origin() + ": problem has no exact solution");
      exact = spec.exact;
    } else if (ref == "viscosity") {
      const Vec3 dir_v = [&] {
        const auto d = cfg.numbers("problem.direction", {1, 0, 0});
        Vec3 v = Vec3::Zero();
        for (std::size_t i = 0; i < d.size() && i < 3; ++i) v[static_cast<int>(i)] = d[i];
        return Vec3(v.normalized());
      }();
      const auto u0 = spec.u0;
      const auto flux = spec.f;
      const auto dflux = spec.df;
      ViscosityOracleOptions vo;
      vo.T = sc.T;
      const ReferenceSolution oracle = vanishing_viscosity_1d(
          [flux, dir_v](double u) { return flux(u).dot(dir_v); }, [dflux, dir_v](double u) { return dflux(u).dot(dir_v); },
          [u0, dir_v](double s) { return u0(Vec3(s * dir_v)); }, base.number("convergence.oracle_eps", 1e-3),
          base.integer("convergence.oracle_n", 4096), dir_v, vo);
      exact = oracle.u;
    } else {
      throw ConfigError(base.origin() + ": unknown convergence.reference '" + ref + "'");
    }

    const RunResult r = run(spec, m, sc);
    const double T = final_time(r);
    auto err = [&](LiftKind k, double q) { return lift_error(m, r.u, exact, k, q); };
    const double l1p = err(LiftKind::Primal, 1), l1d = err(LiftKind::Dual, 1), l1c = err(LiftKind::Combined, 1);
    const double l2p = err(LiftKind::Primal, 2), l2d = err(LiftKind::Dual, 2), l2c = err(LiftKind::Combined, 2);
    const double fin =
        lift_error(m, r.u.slices.back(), [&](const Vec3& x) { return exact(T, x); }, LiftKind::Combined, 2.0);
    const double gw = ref == "exact" ? gradient_error(m, spec, r, exact, spec.p) : std::nan("");
    rows.push_back({m.size, l1c, l2c, fin, r.diag.gap_l2});

    auto order = [&](double Row::*field) {
      if (rows.size() < 2) return std::nan("");
      const Row& a = rows[rows.size() - 2];
      const Row& b = rows.back();
      return std::log(a.*field / b.*field) / std::log(a.size / b.size);
    };
    f << std::setprecision(17) << lv.n << ',' << m.size << ',' << lv.dt << ',' << l1p << ',' << l1d << ',' << l1c << ','
      << l2p << ',' << l2d << ',' << l2c << ',' << fin << ',' << gw << ',' << r.diag.gap_l2 << ','
      << order(&Row::l1) << ',' << order(&Row::l2) << ',' << order(&Row::fin) << ',' << order(&Row::gap) << '\n';
    out << std::setw(6) << lv.n << std::setw(14) << fmt(m.size) << std::setw(14) << fmt(l1c) << std::setw(14)
        << fmt(l2c) << std::setw(14) << fmt(fin) << std::setw(14) << fmt(r.diag.gap_l2) << '\n';
  }
  return Ok;
}

}  // namespace ddfv::cli
