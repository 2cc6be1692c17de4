#include <doctest.h>

#include "ddfv/flux.hpp"
#include "ddfv/physics.hpp"
#include "ddfv/quadrature.hpp"
#include "ddfv/reference.hpp"

#include <cmath>
#include <random>

using namespace ddfv;

TEST_CASE("adaptive quadrature") {
  CHECK(integrate_adaptive([](double x) { return std::exp(x); }, 0, 1) == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-13));
  CHECK(integrate_adaptive([](double x) { return std::sqrt(x); }, 0, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
  CHECK(integrate_adaptive([](double x) { return std::abs(x - 0.3); }, 0, 1) == doctest::Approx(0.29).epsilon(1e-10));
  CHECK(integrate_adaptive([](double x) { return x; }, 1, 0) == doctest::Approx(-0.5));
}

TEST_CASE("simplex rules integrate polynomials") {
  for (int dim : {2, 3})
    for (int deg : {1, 3, 5}) {
      const SimplexRule r = grundmann_moller(dim, deg);
      double w = 0.0;
      for (double x : r.weights) w += x;
      CHECK(w == doctest::Approx(1.0));
    }
  const std::vector<Vec3> tri{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)};
  const double v = integrate_simplex(tri, grundmann_moller(2, 3), [](const Vec3& x) { return x.x() * x.x() * x.y(); });
  CHECK(v == doctest::Approx(1.0 / 60.0).epsilon(1e-13));
}

TEST_CASE("entropy primitive and flux are normalized at zero") {
  const VecFn1 f = [](double u) { return Vec3(0.5 * u * u, 0.0, 0.0); };
  const ScalarMap th = sign_plus(-0.3);
  CHECK(entropy_primitive(th)(0.0) == doctest::Approx(0.0));
  CHECK(entropy_flux(th, f)(0.0).norm() == doctest::Approx(0.0));
  CHECK(entropy_primitive(th)(0.5) == doctest::Approx(0.5));
}

TEST_CASE("scalar maps") {
  const ScalarMap pm = power_map(2.0);
  CHECK(pm(-3.0) == doctest::Approx(-9.0));
  CHECK(pm.derivative(2.0) == doctest::Approx(4.0));
  const ScalarMap sp = sign_plus(0.5);
  CHECK(sp(0.4) == 0.0);
  CHECK(sp(0.5) == 0.0);
  CHECK(sp(0.6) == 1.0);
  const ScalarMap sm = sign_minus(0.5);
  CHECK(sm(0.4) == -1.0);
  CHECK(sm(0.6) == 0.0);
  const ScalarMap smooth = sign_plus(0.0, 0.1);
  CHECK(smooth(0.05) == doctest::Approx(0.5));
}

TEST_CASE("Stieltjes integral with atoms") {
  const auto h = [](double z) { return z * z; };
  // smooth theta: int h theta' dz
  CHECK(stieltjes(h, power_map(2.0), 0, 1) == doctest::Approx(0.5));
  // jump of height 1 at 0.5 inside the interval
  CHECK(stieltjes(h, sign_plus(0.5), 0, 1) == doctest::Approx(0.25));
  CHECK(stieltjes(h, sign_plus(0.5), 1, 0) == doctest::Approx(-0.25));
  CHECK(stieltjes(h, sign_plus(0.5), 0, 0.4) == doctest::Approx(0.0));
}

TEST_CASE("A_theta and its inverse composition") {
  const ScalarMap A = power_map(2.0);
  const ScalarMap theta = identity_map();
  const ScalarMap At = A_theta(theta, A);
  // int_0^z s d(s|s|) = 2 z^3 / 3 for z > 0
  CHECK(At(0.7) == doctest::Approx(2.0 * 0.343 / 3.0).epsilon(1e-10));
  const TildeATheta tilde(theta, A, 2.0);
  CHECK(tilde(A(0.7)) == doctest::Approx(At(0.7)).epsilon(1e-9));
  CHECK(tilde.preimage(A(-0.3)) == doctest::Approx(-0.3).epsilon(1e-9));
}

TEST_CASE("entropy pairs vanish at their level and satisfy q' = theta f'") {
  const VecFn1 f = [](double u) { return Vec3(0.5 * u * u, 0.0, 0.0); };
  for (int sign : {1, -1})
    for (double c : {-0.3, 0.0, 0.4}) {
      const EntropyPair e = entropy_pair(sign, c, 0.0, f);
      CHECK(e.eta(c) == doctest::Approx(0.0));
      CHECK(e.q(c).norm() == doctest::Approx(0.0));
      CHECK(e.eta(c - sign * 0.2) == doctest::Approx(0.0));
      for (double z : {-0.8, -0.1, 0.25, 0.9}) {
        if (std::abs(z - c) < 1e-3) continue;
        const double h = 1e-6;
        const double dq = (e.q(z + h).x() - e.q(z - h).x()) / (2 * h);
        CHECK(dq == doctest::Approx(e.theta(z) * z).epsilon(1e-6));
        const double deta = (e.eta(z + h) - e.eta(z - h)) / (2 * h);
        CHECK(deta == doctest::Approx(e.theta(z)).epsilon(1e-6));
      }
    }
}

TEST_CASE("builtin problems honour the structural contracts") {
  for (const char* name : {"heat", "porous_medium(2)", "p_laplace(3)", "polytropic(2,3)", "burgers_diffusion(0.1)",
                           "burgers_diffusion(0)"}) {
    const ProblemSpec s = builtin_problem(name);
    const ContractReport c = check_contracts(s, m_bound(s, 1.0));
    CHECK_MESSAGE(c.ok(), name);
  }
  CHECK_THROWS_AS(builtin_problem("porous_medium(0.5)"), std::invalid_argument);
  CHECK_THROWS_AS(builtin_problem("unknown"), std::invalid_argument);
}

TEST_CASE("bound M includes the source integral") {
  ProblemOptions o;
  o.source = "pulse";
  o.source_amp = 0.5;
  o.source_until = 0.2;
  const ProblemSpec s = builtin_problem("porous_medium(2)", o);
  CHECK(m_bound(s, 1.0) == doctest::Approx(1.1));
}

namespace {

double burgers_godunov(double a, double b) {
  const auto f = [](double u) { return 0.5 * u * u; };
  if (a <= b) {
    if (a > 0.0) return f(a);
    if (b < 0.0) return f(b);
    return 0.0;
  }
  return std::max(f(a), f(b));
}

}  // namespace

TEST_CASE("numerical fluxes") {
  const ProblemSpec s = builtin_problem("burgers_diffusion(0)");
  const Vec3 nx(1, 0, 0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (FluxScheme sch : {FluxScheme::Godunov, FluxScheme::Rusanov, FluxScheme::LaxFriedrichs, FluxScheme::EngquistOsher}) {
    const auto g = make_flux(s, sch, 1.0);
    CAPTURE(to_string(sch));
    for (int i = 0; i < 200; ++i) {
      const double a = U(rng), b = U(rng);
      const Vec3 nu = Vec3(U(rng), U(rng), 0).normalized();
      CHECK((*g)(a, a, nu) == doctest::Approx(s.f(a).dot(nu)).epsilon(1e-12));
      CHECK((*g)(a, b, nu) == doctest::Approx(-(*g)(b, a, -nu)).epsilon(1e-12));
      const double h = 1e-3;
      CHECK((*g)(a + h, b, nu) >= (*g)(a, b, nu) - 1e-12);
      CHECK((*g)(a, b + h, nu) <= (*g)(a, b, nu) + 1e-12);
    }
  }
  const auto god = make_flux(s, FluxScheme::Godunov, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double a = U(rng), b = U(rng);
    CHECK((*god)(a, b, nx) == doctest::Approx(burgers_godunov(a, b)).epsilon(1e-12));
  }
  CHECK(parse_flux_scheme("rusanov") == FluxScheme::Rusanov);
  CHECK_THROWS(parse_flux_scheme("nope"));
}

TEST_CASE("heat problem exact solution solves the equation") {
  const ReferenceSolution ref = heat_exact(2, {0, 1, 0, 1, 0, 1});
  const Vec3 x(0.3, 0.6, 0);
  const double t = 0.05, h = 1e-4;
  const double ut = (ref.u(t + h, x) - ref.u(t - h, x)) / (2 * h);
  double lap = 0.0;
  for (int i = 0; i < 2; ++i) {
    Vec3 e = Vec3::Zero();
    e[i] = h;
    lap += (ref.u(t, x + e) - 2 * ref.u(t, x) + ref.u(t, x - e)) / (h * h);
  }
  CHECK(ut - lap == doctest::Approx(0.0).epsilon(1e-5).scale(1.0));
  CHECK(ref.u(t, Vec3(0, 0.4, 0)) == doctest::Approx(0.0));
}
