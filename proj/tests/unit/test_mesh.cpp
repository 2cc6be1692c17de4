#include <doctest.h>

#include "ddfv/mesh.hpp"

#include <cmath>
#include <fstream>
#include <numeric>

using namespace ddfv;

namespace {

double sum_primal(const DdfvMesh& m) {
  double s = 0.0;
  for (int K = 0; K < m.n_primal_interior; ++K) s += m.primal[K].measure;
  return s;
}

double sum_dual(const DdfvMesh& m) {
  double s = 0.0;
  for (const DualVolume& V : m.dual) s += V.measure;
  return s;
}

void check_partitions(const DdfvMesh& m, double volume) {
  CHECK(m.domain_measure == doctest::Approx(volume).epsilon(1e-12));
  CHECK(sum_primal(m) == doctest::Approx(volume).epsilon(1e-12));
  CHECK(sum_dual(m) == doctest::Approx(volume).epsilon(1e-12));
  double sd = 0.0, so = 0.0, ss = 0.0;
  for (const Diamond& D : m.diamonds) sd += D.measure;
  for (const Overlap& o : m.overlaps) so += o.measure;
  for (const Subdiamond& S : m.subdiamonds) ss += S.measure;
  CHECK(sd == doctest::Approx(volume).epsilon(1e-12));
  CHECK(so == doctest::Approx(volume).epsilon(1e-12));
  CHECK(ss == doctest::Approx(volume).epsilon(1e-12));
}

// Segment between neighbouring centers is parallel to the interface normal.
void check_orthogonality(const DdfvMesh& m) {
  double worst = 0.0;
  for (const Interface& itf : m.interfaces) {
    const Vec3 d = m.primal[itf.L].center - m.primal[itf.K].center;
    CHECK(d.dot(itf.normal) == doctest::Approx(itf.dist).epsilon(1e-10));
    worst = std::max(worst, (d - d.dot(itf.normal) * itf.normal).norm());
  }
  CHECK(worst < 1e-12);
}

}  // namespace

TEST_CASE("structured 2D mesh partitions the square") {
  const DdfvMesh m = build_structured_2d(8, 8);
  CHECK(m.dim == 2);
  CHECK(m.points.size() == 81);
  CHECK(m.simplices.size() == 128);
  CHECK(m.n_dual_interior == 49);
  CHECK(m.n_dual() == 81);
  check_partitions(m, 1.0);
  check_orthogonality(m);
  CHECK(m.size > 0.0);
  CHECK(m.reg >= 1.0);
  CHECK(m.report.face_condition);
}

TEST_CASE("rectangle and uniform pattern") {
  const DdfvMesh m = build_structured_2d(6, 4, {0, 2, -1, 0.5}, Pattern2d::Uniform);
  check_partitions(m, 3.0);
  check_orthogonality(m);
}

TEST_CASE("structured 3D mesh partitions the cube") {
  const DdfvMesh m = build_structured_3d(2, 2, 2);
  CHECK(m.dim == 3);
  check_partitions(m, 1.0);
  check_orthogonality(m);
  CHECK(m.report.face_condition);
  CHECK(mesh_report(m).find("face_circumcenter_condition: pass") != std::string::npos);
}

TEST_CASE("unstructured mesh file") {
  const DdfvMesh m = read_mesh_file(DDFV_TEST_DATA "/square_unstructured.msh");
  check_partitions(m, 1.0);
  check_orthogonality(m);
  CHECK(m.size == doctest::Approx(mesh_size(m)));
  CHECK(m.reg == doctest::Approx(regularity_constant(m)));
}

TEST_CASE("boundary volumes carry faces") {
  const DdfvMesh m = build_structured_2d(4, 4);
  double perimeter = 0.0;
  for (int K = m.n_primal_interior; K < m.n_primal(); ++K) {
    CHECK(m.primal[K].is_boundary);
    CHECK(m.primal[K].simplices.empty());
    perimeter += m.primal[K].measure;
  }
  CHECK(perimeter == doctest::Approx(4.0));
}

TEST_CASE("mesh file round trip") {
  SimplicialData d;
  d.dim = 2;
  // regular hexagon around its centre: six acute triangles
  d.points.push_back(Vec3(0, 0, 0));
  for (int i = 0; i < 6; ++i) d.points.push_back(Vec3(std::cos(i * M_PI / 3), std::sin(i * M_PI / 3), 0));
  for (int i = 0; i < 6; ++i) d.cells.push_back({0, 1 + i, 1 + (i + 1) % 6});
  const std::string path = "roundtrip.msh";
  write_mesh_file(path, d);
  const DdfvMesh m = read_mesh_file(path);
  CHECK(m.simplices.size() == 6);
  check_partitions(m, 1.5 * std::sqrt(3.0));
}

TEST_CASE("malformed input is rejected") {
  CHECK_THROWS_AS(parse_mesh_text("2 3\n", "x"), MeshError);
  CHECK_THROWS_AS(parse_mesh_text("2 3 1\n0 0 0\n1 1 0\n2 0 1\n0 0 1 7\n", "x"), MeshError);
  CHECK_THROWS_AS(read_mesh_file("does/not/exist.msh"), MeshError);
}

TEST_CASE("non-Delaunay triangulation is rejected") {
  // thin rhombus split along its long diagonal
  const std::vector<Vec3> p{Vec3(0, 0, 0), Vec3(1, -0.2, 0), Vec3(2, 0, 0), Vec3(1, 0.2, 0)};
  const std::vector<std::vector<int>> cells{{0, 1, 2}, {0, 2, 3}};
  try {
    build_from_simplicial(2, p, cells);
    FAIL("expected a mesh error");
  } catch (const MeshError& e) {
    CHECK(e.kind() == MeshErrorKind::NonDelaunay);
  }
}

TEST_CASE("point location") {
  const DdfvMesh m = build_structured_2d(4, 4);
  const int s = m.locate(Vec3(0.3, 0.6, 0));
  REQUIRE(s >= 0);
  const auto [K, Ks] = m.locate_cells(Vec3(0.3, 0.6, 0));
  CHECK(K >= 0);
  CHECK(Ks >= 0);
  CHECK(m.locate(Vec3(2, 2, 0)) == -1);
}
