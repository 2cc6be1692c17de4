#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace ddfv {

/// Points are stored with three components; 2D meshes keep z = 0.
using Vec3 = Eigen::Vector3d;

/// Half-space {x : normal . x <= offset}.
struct HalfSpace {
  Vec3 normal;
  double offset;
};

/// Circumcenter of a 1-, 2- or 3-simplex given by 2, 3 or 4 points.
/// For a triangle in 3D the center lies in the triangle's plane.
Vec3 circumcenter(std::span<const Vec3> pts);

/// Unsigned k-dimensional measure of the simplex spanned by k+1 points.
double simplex_measure(std::span<const Vec3> pts);

double signed_area(const Vec3& a, const Vec3& b, const Vec3& c);
double signed_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d);

/// Unit normal of the hyperplane spanned by a (d-1)-face, pointing away from `opposite`.
Vec3 face_normal(std::span<const Vec3> face, const Vec3& opposite, int dim);

double diameter(std::span<const Vec3> pts);

/// Half-space of points at least as close to `a` as to `b`.
HalfSpace bisector(const Vec3& a, const Vec3& b);

/// Area of the triangle (2D, z = 0) clipped by the given half-spaces.
double clipped_triangle_area(std::span<const Vec3> tri, std::span<const HalfSpace> cuts);

/// Volume of the tetrahedron clipped by the given half-spaces.
double clipped_tetra_volume(std::span<const Vec3> tet, std::span<const HalfSpace> cuts);

/// Barycentric coordinates of x in a d-simplex (d+1 points).
Eigen::VectorXd barycentric(std::span<const Vec3> simplex, const Vec3& x, int dim);

}  // namespace ddfv
