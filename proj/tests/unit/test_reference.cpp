#include <doctest.h>

#include "ddfv/reference.hpp"
#include "ddfv/physics.hpp"

#include <cmath>

using namespace ddfv;

TEST_CASE("vanishing viscosity oracle moves a Burgers shock at the Rankine-Hugoniot speed") {
  const auto f = [](double u) { return 0.5 * u * u; };
  const auto df = [](double u) { return u; };
  const auto u0 = [](double s) { return s < 0.3 ? 1.0 : 0.0; };
  ViscosityOracleOptions o;
  o.T = 0.4;
  const ReferenceSolution r = vanishing_viscosity_1d(f, df, u0, 1e-3, 2048, Vec3(1, 0, 0), o);
  const double front = front_position([&](double x) { return r.u(0.4, Vec3(x, 0.5, 0)); }, 0, 1, 0.5, 4096);
  CHECK(front == doctest::Approx(0.3 + 0.5 * 0.4).epsilon(0.01));
  CHECK(r.u(0.4, Vec3(0.46, 0.2, 0)) == doctest::Approx(1.0).epsilon(1e-2));
  // the zero inflow value opens a fan u = x / t at the left end
  CHECK(r.u(0.4, Vec3(0.2, 0.2, 0)) == doctest::Approx(0.5).epsilon(0.03));
}

TEST_CASE("rarefaction is resolved") {
  const auto u0 = [](double s) { return s < 0.5 ? 0.0 : 1.0; };
  ViscosityOracleOptions o;
  o.T = 0.2;
  const ReferenceSolution r = vanishing_viscosity_1d([](double u) { return 0.5 * u * u; }, [](double u) { return u; },
                                                     u0, 1e-4, 2048, Vec3(1, 0, 0), o);
  // fan u = (x - 0.5) / t
  CHECK(r.u(0.2, Vec3(0.6, 0.5, 0)) == doctest::Approx(0.5).epsilon(0.03));
}

TEST_CASE("manufactured source annihilates the exact solution") {
  const ProblemSpec heat = builtin_problem("heat");
  const ReferenceSolution ex = heat_exact(2, heat.box);
  const Manufactured mf = manufactured(heat, ex.u);
  for (double t : {0.0, 0.1, 0.3})
    for (const Vec3& x : {Vec3(0.2, 0.3, 0), Vec3(0.5, 0.5, 0), Vec3(0.8, 0.1, 0)})
      CHECK(std::abs(mf.source(t, x)) < 1e-6);
  const ProblemSpec pm = builtin_problem("porous_medium(2)");
  const SpaceTimeFn ustar = [](double t, const Vec3& x) {
    return (1 + t) * std::sin(M_PI * x.x()) * std::sin(M_PI * x.y());
  };
  const Manufactured m2 = manufactured(pm, ustar);
  // S = dt u - lap(u|u|); at the centre lap(u^2) = 2|grad u|^2 + 2 u lap u = -4 pi^2 (1+t)^2
  const double t = 0.2;
  CHECK(m2.source(t, Vec3(0.5, 0.5, 0)) == doctest::Approx(1.0 + 4 * M_PI * M_PI * (1 + t) * (1 + t)).epsilon(1e-6));
}

TEST_CASE("front position of a monotone profile") {
  CHECK(front_position([](double x) { return 1.0 - x; }, 0, 1, 0.5, 1000) == doctest::Approx(0.5).epsilon(1e-3));
}
