// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include "ddfv/checks.hpp"
#include "ddfv/entropy.hpp"
#include "ddfv/reference.hpp"
#include "ddfv/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace ddfv;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

// Least-squares slope of log(err) against log(size).
double fitted_order(const std::vector<double>& size, const std::vector<double>& err) {
  const int n = static_cast<int>(size.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    const double x = std::log(size[i]), y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return true;
}

std::vector<DdfvMesh> identity_meshes() {
  std::vector<DdfvMesh> out;
  out.push_back(build_structured_2d(8, 8));
  out.push_back(read_mesh_file(DDFV_TEST_DATA "/square_unstructured.msh"));
  out.push_back(build_structured_3d(2, 2, 2));
  return out;
}

ProblemSpec problem_for(const DdfvMesh& m, const std::string& name, ProblemOptions po = {}) {
  po.dim = m.dim;
  return builtin_problem(name, po);
}

void report(Outcome& o, const CheckResult& r) {
  o.detail << ' ' << r.name << '=' << sci(r.value);
  o.require(r.pass, r.name + " " + r.detail);
}

// Runs shared between criteria; each is computed once and timed where it is first needed.
struct Level {
  DdfvMesh mesh;
  ProblemSpec spec;
  SchemeConfig cfg;
  RunResult run;
};

struct Shared {
  std::optional<Level> pulse;
  std::vector<Level> viscous;
  std::vector<Level> heat;
  std::vector<Level> hyperbolic;
  std::optional<ReferenceSolution> oracle;
};

Level solve(DdfvMesh m, ProblemSpec spec, SchemeConfig cfg) {
  Level l{std::move(m), std::move(spec), cfg, {}};
  l.run = run(l.spec, l.mesh, l.cfg);
  return l;
}

Outcome crit_duality() {
  Outcome o;
  for (const DdfvMesh& m : identity_meshes()) report(o, check_duality(m, 50, 11));
  return o;
}

Outcome crit_reconstruction() {
  Outcome o;
  for (const DdfvMesh& m : identity_meshes()) {
    report(o, check_affine_exactness(m, 21));
    report(o, check_reconstruction(m, 20, 22));
  }
  report(o, check_triangle_reconstruction(1000, 23));
  return o;
}

Outcome crit_dissipation() {
  Outcome o;
  for (const DdfvMesh& m : identity_meshes()) {
    for (const char* name : {"porous_medium(2)", "p_laplace(3)"}) {
      const ProblemSpec s = problem_for(m, name);
      report(o, check_entropy_dissipation(m, s, 20, 31));
      report(o, check_penalization_theta(m, s, 20, 33));
    }
    report(o, check_penalization_summation(m, 20, 32));
  }
  return o;
}

Outcome crit_convection() {
  Outcome o;
  for (const DdfvMesh& m : identity_meshes()) {
    const ProblemSpec s = problem_for(m, "burgers_diffusion(0)");
    for (FluxScheme sc : {FluxScheme::Godunov, FluxScheme::Rusanov}) report(o, check_convection_decomposition(m, s, sc, 10, 41));
  }
  return o;
}

Outcome crit_maximum(Shared& sh) {
  Outcome o;
  ProblemOptions po;
  po.initial = "bump";
  po.amplitude = 1.0;
  po.source = "pulse";
  po.source_amp = 0.5;
  po.source_until = 0.2;
  SchemeConfig cfg;
  cfg.T = 1.0;
  cfg.dt = 1.0 / 64.0;
  sh.pulse = solve(build_structured_2d(16, 16), builtin_problem("porous_medium(2)", po), cfg);
  const RunResult& r = sh.pulse->run;
  double lo = 0.0;
  for (const StepReport& s : r.steps) lo = std::min(lo, s.umin);
  const double bound = 1.0 + 0.1 + 10.0 * cfg.tol;
  o.detail << " max|u|=" << sci(r.diag.max_linf) << " bound=" << sci(bound) << " min u=" << sci(lo)
           << " steps=" << r.u.N;
  o.require(r.diag.max_linf <= bound, "max|u| above bound");
  o.require(r.u.N == 64, "step count");
  return o;
}

Outcome crit_bounds(Shared& sh) {
  Outcome o;
  ProblemOptions po;
  po.initial = "bump";
  for (int n : {8, 16, 32}) {
    SchemeConfig cfg;
    cfg.T = 0.5;
    cfg.dt = 0.5 / n;
    sh.viscous.push_back(solve(build_structured_2d(n, n), builtin_problem("burgers_diffusion(0.1)", po), cfg));
  }
  const auto field = [&](double RunDiagnostics::*f) {
    std::vector<double> v;
    for (const Level& l : sh.viscous) v.push_back(l.run.diag.*f);
    return v;
  };
  for (const auto& [name, f] : std::vector<std::pair<std::string, double RunDiagnostics::*>>{
           {"energy", &RunDiagnostics::energy},
           {"penalization", &RunDiagnostics::penalization_sum},
           {"weak_bv", &RunDiagnostics::weak_bv}}) {
    const auto v = field(f);
    o.detail << ' ' << name << '=';
    for (std::size_t i = 0; i < v.size(); ++i) o.detail << (i ? "/" : "") << sci(v[i]);
    for (double x : v) o.require(x >= 0.0 && x <= 2.0 * v.front(), name + " outside factor 2 of the coarsest level");
  }
  return o;
}

Outcome crit_heat(Shared& sh) {
  Outcome o;
  std::vector<double> size, err;
  for (int n : {8, 16, 32}) {
    SchemeConfig cfg;
    cfg.T = 0.1;
    cfg.dt = 0.2 / n;
    sh.heat.push_back(solve(build_structured_2d(n, n), builtin_problem("heat"), cfg));
    const Level& l = sh.heat.back();
    const double T = l.run.u.N * l.run.u.dt;
    const auto exact = l.spec.exact;
    size.push_back(l.mesh.size);
    err.push_back(lift_error(l.mesh, l.run.u.slices.back(), [&](const Vec3& x) { return exact(T, x); },
                             LiftKind::Combined, 2.0));
  }
  const double order = fitted_order(size, err);
  o.detail << " L2(T)=" << sci(err[0]) << '/' << sci(err[1]) << '/' << sci(err[2]) << " order=" << sci(order);
  o.require(strictly_decreasing(err), "error not strictly decreasing");
  o.require(order >= 0.8, "order below 0.8");
  return o;
}

Outcome crit_hyperbolic(Shared& sh) {
  Outcome o;
  ProblemOptions po;
  po.initial = "riemann";
  const ProblemSpec spec = builtin_problem("burgers_diffusion(0)", po);
  const double T = 0.5;
  ViscosityOracleOptions vo;
  vo.T = T;
  const auto u0 = spec.u0;
  const auto f = spec.f;
  const auto df = spec.df;
  sh.oracle = vanishing_viscosity_1d([&](double u) { return f(u).x(); }, [&](double u) { return df(u).x(); },
                                     [&](double s) { return u0(Vec3(s, 0.5, 0)); }, 1e-3, 4096, Vec3(1, 0, 0), vo);
  const auto oracle_u = sh.oracle->u;
  const double y = 0.5 + 1e-7;
  const double oracle_front =
      front_position([&](double x) { return oracle_u(T, Vec3(x, y, 0)); }, 0.0, 1.0, 0.5, 4096);
  std::vector<double> l1;
  o.detail << " oracle front=" << sci(oracle_front);
  for (int n : {16, 32, 64}) {
    SchemeConfig cfg;
    cfg.T = T;
    cfg.dt = T / n;
    sh.hyperbolic.push_back(solve(build_structured_2d(n, n), spec, cfg));
    const Level& l = sh.hyperbolic.back();
    l1.push_back(lift_error(l.mesh, l.run.u, oracle_u, LiftKind::Combined, 1.0));
    const double front = front_position(
        [&](double x) { return lift_at(l.mesh, l.run.u.slices.back(), Vec3(x, y, 0)).combined; }, 0.0, 1.0, 0.5,
        4096);
    o.detail << " n=" << n << ": L1=" << sci(l1.back()) << " front=" << sci(front);
    o.require(std::abs(front - oracle_front) <= 2.0 * l.mesh.size, "front off by more than 2h at n=" + std::to_string(n));
  }
  o.require(strictly_decreasing(l1), "L1(Q) error not strictly decreasing");
  return o;
}

Outcome crit_gap(const Shared& sh) {
  Outcome o;
  for (const auto& [name, ladder] : std::vector<std::pair<std::string, const std::vector<Level>*>>{
           {"heat", &sh.heat}, {"viscous", &sh.viscous}}) {
    if (ladder->size() < 2) {
      o.require(false, name + " ladder missing");
      continue;
    }
    std::vector<double> size, gap;
    for (const Level& l : *ladder) {
      size.push_back(l.mesh.size);
      gap.push_back(l.run.diag.gap_l2);
    }
    const double order = fitted_order(size, gap);
    o.detail << ' ' << name << " gap=";
    for (std::size_t i = 0; i < gap.size(); ++i) o.detail << (i ? "/" : "") << sci(gap[i]);
    o.detail << " order=" << sci(order);
    o.require(strictly_decreasing(gap), name + " gap not decreasing");
    o.require(order >= 0.4, name + " order below 0.4");
  }
  return o;
}

Outcome crit_entropy(const Shared& sh) {
  Outcome o;
  std::vector<const Level*> runs;
  if (sh.pulse) runs.push_back(&*sh.pulse);
  if (sh.viscous.size() > 1) runs.push_back(&sh.viscous[1]);
  if (!sh.hyperbolic.empty()) runs.push_back(&sh.hyperbolic.front());
  o.require(runs.size() == 3, "source runs missing");
  for (const Level* l : runs) {
    const auto tests = default_entropy_tests(l->mesh.dim, l->spec.box, l->cfg.T);
    const auto rows = discrete_entropy_residuals(l->mesh, l->spec, l->cfg, l->run, tests);
    double weak = 0.0, entropy = 1e300;
    int failed = 0;
    for (const EntropyResidual& e : rows) {
      if (e.kind == EntropyKind::Weak)
        weak = std::max(weak, std::abs(e.slack) / e.scale);
      else
        entropy = std::min(entropy, (e.slack + std::abs(e.solver_term)) / e.scale);
      if (!e.pass) ++failed;
    }
    o.detail << ' ' << l->spec.name << ": weak=" << sci(weak) << " entropy_min=" << sci(entropy) << " rows=" << rows.size();
    o.require(failed == 0, std::to_string(failed) + " rows failed for " + l->spec.name);
  }
  return o;
}

}  // namespace

int main() {
  Shared sh;
  struct Criterion {
    int id;
    std::string name;
    double limit;
    std::function<Outcome()> body;
  };
  const std::vector<Criterion> criteria{
      {1, "discrete duality", 10, crit_duality},
      {2, "affine exactness and reconstruction", 5, crit_reconstruction},
      {3, "entropy dissipation and penalization summation", 30, crit_dissipation},
      {4, "convection decomposition", 30, crit_convection},
      {5, "discrete maximum principle", 120, [&] { return crit_maximum(sh); }},
      {6, "energy, penalization and weak-BV bounds", 600, [&] { return crit_bounds(sh); }},
      {7, "heat equation convergence", 600, [&] { return crit_heat(sh); }},
      {8, "degenerate hyperbolic limit", 600, [&] { return crit_hyperbolic(sh); }},
      {9, "penalization smallness", 600, [&] { return crit_gap(sh); }},
      {10, "discrete entropy residuals", 300, [&] { return crit_entropy(sh); }},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double s = seconds_since(t0);
    o.require(s < c.limit, "runtime above " + std::to_string(static_cast<int>(c.limit)) + " s");
    if (!o.pass) ++failures;
    std::printf("%s %2d %s (%.1f s)%s\n", o.pass ? "PASS" : "FAIL", c.id, c.name.c_str(), s, o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
