#include <doctest.h>

#include "ddfv/config.hpp"
#include "ddfv/output.hpp"

#include <sstream>

using namespace ddfv;

TEST_CASE("config parsing") {
  const Config c = Config::parse(R"(# comment
[mesh]
builder = structured2d
n = 6

[problem]
name = porous_medium(2)
direction = 1, 0

[scheme]
dt = 0.05
T = 0.1
flux = rusanov
)",
                                 "inline");
  CHECK(c.integer("mesh.n", 0) == 6);
  CHECK(c.get("problem.name", "") == "porous_medium(2)");
  CHECK(c.numbers("problem.direction", {}) == std::vector<double>{1.0, 0.0});
  CHECK(c.number("scheme.tol", 1e-9) == 1e-9);
  const DdfvMesh m = make_mesh(c);
  CHECK(m.n_primal_interior > 0);
  const ProblemSpec s = make_problem(c, m);
  CHECK(s.dim == 2);
  const SchemeConfig sc = make_scheme(c);
  CHECK(sc.flux == FluxScheme::Rusanov);
  CHECK(sc.dt == 0.05);
}

TEST_CASE("config errors carry context") {
  CHECK_THROWS_WITH_AS(Config::parse("[mesh]\nbogus = 1\n", "f.cfg"), doctest::Contains("f.cfg:2"), ConfigError);
  CHECK_THROWS_AS(Config::parse("[nosuch]\n", "f.cfg"), ConfigError);
  CHECK_THROWS_AS(Config::parse("[mesh]\nn 4\n", "f.cfg"), ConfigError);
  const Config c = Config::parse("[mesh]\nn = four\n", "f.cfg");
  CHECK_THROWS_AS(c.integer("mesh.n", 1), ConfigError);
  const Config d = Config::parse("[scheme]\ndt = -1\n", "f.cfg");
  CHECK_THROWS_AS(make_scheme(d), std::invalid_argument);
  CHECK_THROWS_AS(Config::load("missing.cfg"), ConfigError);
}

TEST_CASE("refinement ladder") {
  const Config c = Config::parse("[convergence]\nlevels = 4, 8, 16\ndt = 0.1\ndt_rule = linear\n", "x");
  const auto l = make_ladder(c);
  REQUIRE(l.size() == 3);
  CHECK(l[1].n == 8);
  CHECK(l[2].dt == doctest::Approx(l[0].dt / 4));
}

TEST_CASE("VTK and CSV output are well formed and deterministic") {
  const DdfvMesh m = build_structured_2d(3, 3);
  ProblemOptions po;
  const ProblemSpec s = builtin_problem("heat", po);
  SchemeConfig cfg;
  cfg.T = 0.02;
  cfg.dt = 0.01;
  const RunResult r = run(s, m, cfg);
  auto render = [&] {
    std::ostringstream os;
    write_vtk_primal(os, m, r.u.slices.back());
    write_vtk_dual(os, m, r.u.slices.back());
    write_step_csv(os, r.steps);
    write_diagnostics(os, r.diag, {{"extra", 1.0}});
    write_csv(os, m, r.u);
    return os.str();
  };
  const std::string a = render();
  CHECK(a == render());

  std::ostringstream p;
  write_vtk_primal(p, m, r.u.slices.back());
  const std::string ps = p.str();
  CHECK(ps.rfind("# vtk DataFile Version 3.0", 0) == 0);
  CHECK(ps.find("CELLS " + std::to_string(m.simplices.size())) != std::string::npos);

  std::ostringstream d;
  write_vtk_dual(d, m, r.u.slices.back());
  CHECK(d.str().find("CELL_TYPES " + std::to_string(m.n_dual())) != std::string::npos);

  std::ostringstream st;
  write_step_csv(st, r.steps);
  std::string line;
  int lines = 0;
  std::istringstream in(st.str());
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 1 + static_cast<int>(r.steps.size()));
}
