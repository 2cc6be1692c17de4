#include <doctest.h>

#include "ddfv/checks.hpp"
#include "ddfv/operators.hpp"

#include <random>

using namespace ddfv;

namespace {

DiscreteFunctionBar random_bar(const DdfvMesh& m, std::mt19937_64& r, bool boundary_zero) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  DiscreteFunctionBar u = zeros_bar(m);
  for (int K = 0; K < m.n_primal(); ++K)
    if (!boundary_zero || K < m.n_primal_interior) u.primal[K] = U(r);
  for (int K = 0; K < m.n_dual(); ++K)
    if (!boundary_zero || K < m.n_dual_interior) u.dual[K] = U(r);
  return u;
}

}  // namespace

TEST_CASE("identity suite passes on 2D, unstructured and 3D meshes") {
  const ProblemSpec spec = builtin_problem("porous_medium(2)");
  std::vector<DdfvMesh> meshes;
  meshes.push_back(build_structured_2d(6, 6));
  meshes.push_back(read_mesh_file(DDFV_TEST_DATA "/square_unstructured.msh"));
  meshes.push_back(build_structured_3d(2, 2, 2));
  for (const DdfvMesh& m : meshes) {
    ProblemOptions po;
    po.dim = m.dim;
    const ProblemSpec s = builtin_problem("porous_medium(2)", po);
    VerifyOptions opt;
    opt.duality_pairs = 10;
    opt.reconstruction_vectors = 20;
    opt.triangles = 200;
    opt.dissipation_samples = 4;
    opt.convection_samples = 3;
    opt.evolution_samples = 3;
    for (const CheckResult& r : verify_suite(m, s, opt)) {
      CAPTURE(r.name);
      CAPTURE(r.value);
      CHECK(r.pass);
    }
  }
  (void)spec;
}

TEST_CASE("a sign-flipped divergence breaks duality") {
  const DdfvMesh m = build_structured_2d(6, 6);
  const DivergenceFn flipped = [](const DdfvMesh& mm, const DiscreteField& F) {
    DiscreteFunction d = divergence(mm, F);
    for (double& v : d.dual) v = -v;
    return d;
  };
  CHECK(check_duality(m, 10, 5).pass);
  CHECK_FALSE(check_duality(m, 10, 5, flipped).pass);
}

TEST_CASE("gradient of an affine function is exact") {
  const DdfvMesh m = read_mesh_file(DDFV_TEST_DATA "/square_unstructured.msh");
  const Vec3 slope(0.7, -1.3, 0);
  DiscreteFunctionBar w = zeros_bar(m);
  for (int K = 0; K < m.n_primal(); ++K) w.primal[K] = 0.2 + slope.dot(m.primal[K].center);
  for (int K = 0; K < m.n_dual(); ++K) w.dual[K] = 0.2 + slope.dot(m.dual[K].center);
  for (const Vec3& g : gradient(m, w).values) CHECK((g - slope).norm() < 1e-10);
}

TEST_CASE("penalization is a nonnegative linear pairing") {
  const DdfvMesh m = build_structured_2d(5, 5);
  std::mt19937_64 r(11);
  for (int i = 0; i < 5; ++i) {
    const DiscreteFunctionBar w = random_bar(m, r, true);
    const DiscreteFunctionBar v = random_bar(m, r, true);
    CHECK(inner_functions(m, extend_by_zero(m, penalization(m, w)), w) >= -1e-12);
    const double pwv = inner_functions(m, extend_by_zero(m, penalization(m, w)), v);
    const double pvw = inner_functions(m, extend_by_zero(m, penalization(m, v)), w);
    CHECK(pwv == doctest::Approx(pvw).epsilon(1e-12));
  }
  const DiscreteFunction z = penalization(m, zeros_bar(m));
  for (double x : z.primal) CHECK(x == 0.0);
}

TEST_CASE("convection divergence conserves mass up to boundary fluxes") {
  const DdfvMesh m = build_structured_2d(8, 8);
  const ProblemSpec s = builtin_problem("burgers_diffusion(0)");
  const auto g = make_flux(s, FluxScheme::Godunov, 1.0);
  std::mt19937_64 r(2);
  const DiscreteFunctionBar u = random_bar(m, r, true);
  const DiscreteFunction c = convection_divergence(m, u, *g);
  double primal = 0.0, boundary = 0.0;
  for (int K = 0; K < m.n_primal_interior; ++K) primal += m.primal[K].measure * c.primal[K];
  for (const Interface& itf : m.interfaces)
    if (m.primal[itf.L].is_boundary) boundary += itf.measure * (*g)(u.primal[itf.K], 0.0, itf.normal);
  CHECK(primal == doctest::Approx(boundary).epsilon(1e-12).scale(1.0));
  // constant state away from the boundary has zero interior divergence
  DiscreteFunctionBar k = zeros_bar(m);
  for (int K = 0; K < m.n_primal(); ++K) k.primal[K] = 0.4;
  for (int K = 0; K < m.n_dual(); ++K) k.dual[K] = 0.4;
  const DiscreteFunction ck = convection_divergence(m, k, *g);
  for (double v : ck.primal) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("entropy dissipation terms are nonnegative") {
  const DdfvMesh m = build_structured_2d(6, 6);
  const ProblemSpec s = builtin_problem("burgers_diffusion(0)");
  const auto g = make_flux(s, FluxScheme::Rusanov, 1.0);
  std::mt19937_64 r(4);
  const DiscreteFunctionBar u = random_bar(m, r, true);
  const ProjectedTest psi = project_bar(m, interior_bump(2, {0, 1, 0, 1, 0, 1}));
  const EntropyPair e = entropy_pair(1, 0.1, 0.0, s.f);
  const EntropyDissipationReport rep = entropy_dissipation_report(m, u, e.theta, psi, *g, s.f);
  for (double v : rep.I_primal) CHECK(v >= -1e-14);
  for (double v : rep.I_dual) CHECK(v >= -1e-14);
  CHECK(std::abs(rep.defect()) <= 1e-10 * rep.scale);
  CHECK(std::abs(rep.R) <= rep.R_bound + 1e-12);
  CHECK(weak_bv(m, u, *g) >= 0.0);
}
