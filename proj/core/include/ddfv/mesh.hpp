#pragma once

#include "ddfv/geometry.hpp"

#include <array>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ddfv {

enum class MeshErrorKind {
  InvalidInput,
  NonDelaunay,
  FaceCircumcenterOutside,
  DegenerateCell,
  NonConforming,
  NegativeSubdiamond,
  PartitionMismatch,
};

const char* to_string(MeshErrorKind k);

class MeshError : public std::runtime_error {
 public:
  MeshError(MeshErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  MeshErrorKind kind() const { return kind_; }

 private:
  MeshErrorKind kind_;
};

/// Primal control volume. Interior volumes are clusters of simplices sharing one
/// circumcenter; boundary volumes are the (d-1)-faces on the domain boundary.
struct PrimalVolume {
  int id = -1;
  Vec3 center;
  double measure = 0.0;  ///< d-measure for interior, (d-1)-measure for boundary
  std::vector<int> vertices;
  std::vector<int> simplices;  ///< empty for boundary volumes
  std::vector<int> interfaces;
  std::vector<int> neighbors;
  bool is_boundary = false;
  double diameter = 0.0;
};

/// One piece of a dual cell: triangle (2D) or tetrahedron (3D) with the dual center first.
struct DualPiece {
  std::array<Vec3, 4> pts;
  double measure = 0.0;
};

struct DualVolume {
  int id = -1;
  int vertex = -1;  ///< index into DdfvMesh::points
  Vec3 center;
  double measure = 0.0;
  std::vector<int> neighbors;
  std::vector<int> interfaces;  ///< dual interfaces
  std::vector<std::pair<int, double>> subdiamonds;  ///< (subdiamond, orientation sign of nu*)
  std::vector<DualPiece> pieces;
  bool is_boundary = false;
  double diameter = 0.0;
};

/// Primal interface K|L, also the key of diamond D^{K,L} (same index).
struct Interface {
  int K = -1, L = -1;  ///< K interior, L interior with K < L or boundary
  double measure = 0.0;
  Vec3 normal;  ///< unit, from K to L
  double dist = 0.0;  ///< d_KL
  Vec3 face_center;  ///< circumcenter of the face
  std::vector<int> duals;  ///< dual ids of the face vertices
  std::vector<Vec3> face;  ///< face vertex positions
};

struct Subdiamond {
  int diamond = -1;
  int Ks = -1, Ls = -1;  ///< dual ids, Ks < Ls
  double measure = 0.0;
  double sigma = 0.0;       ///< m_{sigma_S}
  double sigma_star = 0.0;  ///< m_{sigma*_S}
  Vec3 nu_star;             ///< unit, from Ks to Ls
  double dist_star = 0.0;   ///< d_{K*L*}
  Vec3 edge_mid;
};

struct Diamond {
  int id = -1;
  int K = -1, L = -1;
  std::vector<int> duals;
  double measure = 0.0;
  std::vector<int> subdiamonds;
  double diameter = 0.0;
};

/// Dual interface K*|L*: union of the sigma*_S of all subdiamonds with the same dual pair.
struct DualInterface {
  int Ks = -1, Ls = -1;
  double measure = 0.0;
  Vec3 normal;
  double dist = 0.0;
  std::vector<int> subdiamonds;
};

struct Overlap {
  int K = -1;
  int Ks = -1;
  double measure = 0.0;
};

struct ValidationReport {
  int cocircular_ties = 0;
  int merged_clusters = 0;  ///< clusters made of more than one simplex
  int circumcenters_outside_cell = 0;
  bool face_condition = true;  ///< every interface face contains its circumcenter
  double max_partition_error = 0.0;
  std::vector<std::string> warnings;
};

struct MeshOptions {
  double eps_geo = 1e-12;  ///< relative to the domain diameter
  bool check_delaunay = true;
};

class DdfvMesh {
 public:
  int dim = 2;
  std::vector<Vec3> points;
  std::vector<std::vector<int>> simplices;
  std::vector<int> simplex_cluster;
  std::vector<Vec3> simplex_center;
  std::vector<std::vector<int>> vertex_neighbors;  ///< edge adjacency of the triangulation

  std::vector<PrimalVolume> primal;  ///< interior first, then boundary
  std::vector<DualVolume> dual;      ///< interior first, then boundary
  std::vector<int> vertex_to_dual;
  std::vector<Interface> interfaces;
  std::vector<Diamond> diamonds;
  std::vector<Subdiamond> subdiamonds;
  std::vector<DualInterface> dual_interfaces;
  std::vector<Overlap> overlaps;  ///< sorted by (K, Ks)

  int n_primal_interior = 0;
  int n_dual_interior = 0;
  double domain_measure = 0.0;
  double length_scale = 1.0;
  double eps_geo = 1e-12;
  double size = 0.0;
  double reg = 0.0;
  ValidationReport report;

  int n_primal() const { return static_cast<int>(primal.size()); }
  int n_dual() const { return static_cast<int>(dual.size()); }
  int n_diamonds() const { return static_cast<int>(diamonds.size()); }

  /// Index of a simplex containing x, or -1.
  int locate(const Vec3& x) const;

  /// Primal interior volume containing x (or -1) and the nearest dual center.
  std::pair<int, int> locate_cells(const Vec3& x) const;

  struct Grid;
  std::shared_ptr<const Grid> grid;
};

DdfvMesh build_from_simplicial(int dim, const std::vector<Vec3>& points,
                               const std::vector<std::vector<int>>& cells,
                               const MeshOptions& opt = {});

enum class Pattern2d { UnionJack, Uniform };

DdfvMesh build_structured_2d(int nx, int ny, std::array<double, 4> rect = {0, 1, 0, 1},
                             Pattern2d pattern = Pattern2d::UnionJack, const MeshOptions& opt = {});

DdfvMesh build_structured_3d(int nx, int ny, int nz,
                             std::array<double, 6> box = {0, 1, 0, 1, 0, 1},
                             const MeshOptions& opt = {});

/// Plain-text node/element file: "d npoints ncells", point lines "id x y [z]",
/// cell lines "id v1 v2 v3 [v4]", optionally a "boundary" section that is ignored.
DdfvMesh read_mesh_file(const std::string& path, const MeshOptions& opt = {});

struct SimplicialData {
  int dim = 2;
  std::vector<Vec3> points;
  std::vector<std::vector<int>> cells;
};
SimplicialData parse_mesh_text(const std::string& text, const std::string& origin);
void write_mesh_file(const std::string& path, const SimplicialData& data);

double regularity_constant(const DdfvMesh& mesh);
double mesh_size(const DdfvMesh& mesh);

/// Overlap list m_{K cap K*} by convex clipping of each simplex against Voronoi bisectors.
std::vector<Overlap> overlap_measures(const DdfvMesh& mesh);

/// Plain-text summary: counts, size, reg and validation flags.
std::string mesh_report(const DdfvMesh& mesh);

}  // namespace ddfv
