#include <doctest.h>

#include "ddfv/entropy.hpp"
#include "ddfv/reference.hpp"
#include "ddfv/solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace ddfv;

namespace {

double sup(const DiscreteFunctionBar& u) {
  double s = 0.0;
  for (double v : u.primal) s = std::max(s, std::abs(v));
  for (double v : u.dual) s = std::max(s, std::abs(v));
  return s;
}

}  // namespace

TEST_CASE("zero data stays zero") {
  const DdfvMesh m = build_structured_2d(4, 4);
  ProblemOptions po;
  po.initial = "zero";
  const ProblemSpec s = builtin_problem("porous_medium(2)", po);
  SchemeConfig cfg;
  cfg.T = 0.1;
  cfg.dt = 0.05;
  const RunResult r = run(s, m, cfg);
  CHECK(r.u.N == 2);
  for (const auto& sl : r.u.slices) CHECK(sup(sl) == 0.0);
}

TEST_CASE("linear heat steps converge in one or two Newton iterations") {
  const DdfvMesh m = build_structured_2d(6, 6);
  const ProblemSpec s = builtin_problem("heat");
  SchemeConfig cfg;
  cfg.T = 0.05;
  cfg.dt = 0.01;
  const RunResult r = run(s, m, cfg);
  for (const StepReport& st : r.steps) {
    CHECK(st.iterations <= 2);
    CHECK(st.residual <= cfg.tol);
    CHECK(st.strategy == "newton");
  }
  CHECK(r.diag.max_linf <= r.diag.M + 1e-9);
}

TEST_CASE("matrix-free residual matches the volume-by-volume assembly") {
  const DdfvMesh m = read_mesh_file(DDFV_TEST_DATA "/square_unstructured.msh");
  const ProblemSpec s = builtin_problem("polytropic(2,3)");
  const ProblemSpec b = builtin_problem("burgers_diffusion(0.1)");
  std::mt19937_64 r(8);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (const ProblemSpec* sp : {&s, &b}) {
    const auto g = make_flux(*sp, FluxScheme::Godunov, 1.0);
    DiscreteFunctionBar u = zeros_bar(m);
    for (int K = 0; K < m.n_primal_interior; ++K) u.primal[K] = U(r);
    for (int K = 0; K < m.n_dual_interior; ++K) u.dual[K] = U(r);
    DiscreteFunction prev = u.interior(m), S = zeros(m);
    for (double& v : prev.primal) v += 0.1 * U(r);
    for (double& v : S.dual) v = U(r);
    const DiscreteFunction a = residual(m, *sp, *g, u, prev, S, 0.01);
    const DiscreteFunction e = residual_explicit(m, *sp, *g, u, prev, S, 0.01);
    double scale = 1.0, diff = 0.0;
    for (std::size_t i = 0; i < a.primal.size(); ++i) {
      scale = std::max(scale, std::abs(a.primal[i]));
      diff = std::max(diff, std::abs(a.primal[i] - e.primal[i]));
    }
    for (std::size_t i = 0; i < a.dual.size(); ++i) {
      scale = std::max(scale, std::abs(a.dual[i]));
      diff = std::max(diff, std::abs(a.dual[i] - e.dual[i]));
    }
    CHECK(diff <= 1e-11 * scale);
  }
}

TEST_CASE("Burgers without diffusion converges at a large time step") {
  const DdfvMesh m = build_structured_2d(8, 8);
  ProblemOptions po;
  po.initial = "riemann";
  const ProblemSpec s = builtin_problem("burgers_diffusion(0)", po);
  SchemeConfig cfg;
  cfg.T = 0.5;
  cfg.dt = 0.25;
  const RunResult r = run(s, m, cfg);
  CHECK(r.u.N == 2);
  CHECK(r.diag.max_linf <= 1.0 + 1e-8);
  for (const StepReport& st : r.steps) CHECK(st.residual <= cfg.tol);
}

TEST_CASE("ordered data give ordered solutions") {
  const DdfvMesh m = build_structured_2d(6, 6);
  ProblemOptions lo, hi;
  lo.amplitude = 0.5;
  hi.amplitude = 1.0;
  SchemeConfig cfg;
  cfg.T = 0.2;
  cfg.dt = 0.05;
  const RunResult a = run(builtin_problem("porous_medium(2)", lo), m, cfg);
  const RunResult b = run(builtin_problem("porous_medium(2)", hi), m, cfg);
  for (int n = 0; n <= a.u.N; ++n) {
    for (std::size_t i = 0; i < a.u.slices[n].primal.size(); ++i)
      CHECK(a.u.slices[n].primal[i] <= b.u.slices[n].primal[i] + 1e-8);
    for (std::size_t i = 0; i < a.u.slices[n].dual.size(); ++i)
      CHECK(a.u.slices[n].dual[i] <= b.u.slices[n].dual[i] + 1e-8);
  }
}

TEST_CASE("w is A(u) on every volume") {
  const DdfvMesh m = build_structured_2d(6, 6);
  const ProblemSpec s = builtin_problem("porous_medium(3)");
  SchemeConfig cfg;
  cfg.T = 0.1;
  cfg.dt = 0.05;
  const RunResult r = run(s, m, cfg);
  for (int n = 0; n <= r.u.N; ++n) {
    for (std::size_t i = 0; i < r.u.slices[n].primal.size(); ++i)
      CHECK(r.w.slices[n].primal[i] == doctest::Approx(s.A(r.u.slices[n].primal[i])));
    for (std::size_t i = 0; i < r.u.slices[n].dual.size(); ++i)
      CHECK(r.w.slices[n].dual[i] == doctest::Approx(s.A(r.u.slices[n].dual[i])));
  }
  CHECK(r.diag.energy >= 0.0);
  CHECK(r.diag.penalization_sum >= 0.0);
}

TEST_CASE("nonconvergence carries a partial result") {
  const DdfvMesh m = build_structured_2d(4, 4);
  const ProblemSpec s = builtin_problem("porous_medium(2)");
  SchemeConfig cfg;
  cfg.T = 0.1;
  cfg.dt = 0.05;
  cfg.tol = 1e-300;
  cfg.max_newton = 1;
  cfg.continuation = false;
  cfg.picard = false;
  try {
    run(s, m, cfg);
    FAIL("expected nonconvergence");
  } catch (const NonConvergence& e) {
    REQUIRE(e.partial);
    CHECK(e.partial->u.N == 0);
    CHECK(e.partial->u.slices.size() == 1);
  }
}

TEST_CASE("invalid scheme settings are rejected") {
  SchemeConfig cfg;
  cfg.dt = -1.0;
  CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
}

TEST_CASE("discrete weak and entropy relations hold for a converged run") {
  const DdfvMesh m = build_structured_2d(8, 8);
  const ProblemSpec s = builtin_problem("burgers_diffusion(0.05)");
  SchemeConfig cfg;
  cfg.T = 0.2;
  cfg.dt = 0.025;
  const RunResult r = run(s, m, cfg);
  const auto rows = discrete_entropy_residuals(m, s, cfg, r, default_entropy_tests(2, s.box, cfg.T));
  CHECK(rows.size() == 3 * (1 + 2 * 3));
  for (const EntropyResidual& e : rows) {
    CAPTURE(e.test);
    CAPTURE(to_string(e.kind));
    CAPTURE(e.slack);
    CHECK(e.pass);
    CHECK(std::abs(e.identity_defect) <= 1e-10 * e.scale);
    CHECK(e.gaps >= -1e-12 * e.scale);
    CHECK(e.dissipation >= -1e-12 * e.scale);
  }
}

TEST_CASE("negative test functions are rejected") {
  const DdfvMesh m = build_structured_2d(4, 4);
  const ProblemSpec s = builtin_problem("heat");
  SchemeConfig cfg;
  cfg.T = 0.1;
  cfg.dt = 0.05;
  const RunResult r = run(s, m, cfg);
  const std::vector<EntropyTest> bad{{"neg", [](double, const Vec3& x) { return -x.x() * (1 - x.x()); }}};
  CHECK_THROWS_AS(discrete_entropy_residuals(m, s, cfg, r, bad), std::invalid_argument);
}
