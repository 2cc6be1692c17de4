#include "ddfv/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ddfv {

Vec3 circumcenter(std::span<const Vec3> pts) {
  switch (pts.size()) {
    case 2:
      return 0.5 * (pts[0] + pts[1]);
    case 3: {
      const Vec3 a = pts[1] - pts[0];
      const Vec3 b = pts[2] - pts[0];
      const Vec3 axb = a.cross(b);
      const double den = 2.0 * axb.squaredNorm();
      if (den == 0.0) throw std::domain_error("circumcenter: degenerate triangle");
      return pts[0] + (a.squaredNorm() * b - b.squaredNorm() * a).cross(axb) / den;
    }
    case 4: {
      Eigen::Matrix3d m;
      Eigen::Vector3d rhs;
      for (int i = 0; i < 3; ++i) {
        const Vec3 e = pts[i + 1] - pts[0];
        m.row(i) = 2.0 * e.transpose();
        rhs(i) = e.squaredNorm();
      }
      const Eigen::Vector3d x = m.fullPivLu().solve(rhs);
      return pts[0] + x;
    }
    default:
      throw std::invalid_argument("circumcenter: expected 2 to 4 points");
  }
}

double simplex_measure(std::span<const Vec3> pts) {
  const int k = static_cast<int>(pts.size()) - 1;
  if (k <= 0) return 0.0;
  Eigen::MatrixXd e(3, k);
  for (int i = 0; i < k; ++i) e.col(i) = pts[i + 1] - pts[0];
  const Eigen::MatrixXd g = e.transpose() * e;
  double fact = 1.0;
  for (int i = 2; i <= k; ++i) fact *= i;
  return std::sqrt(std::max(0.0, g.determinant())) / fact;
}

double signed_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x()));
}

double signed_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  return (b - a).dot((c - a).cross(d - a)) / 6.0;
}

Vec3 face_normal(std::span<const Vec3> face, const Vec3& opposite, int dim) {
  Vec3 n;
  if (dim == 2) {
    const Vec3 t = face[1] - face[0];
    n = Vec3(t.y(), -t.x(), 0.0);
  } else {
    n = (face[1] - face[0]).cross(face[2] - face[0]);
  }
  n.normalize();
  if (n.dot(face[0] - opposite) < 0.0) n = -n;
  return n;
}

double diameter(std::span<const Vec3> pts) {
  double d = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) d = std::max(d, (pts[i] - pts[j]).norm());
  return d;
}

HalfSpace bisector(const Vec3& a, const Vec3& b) {
  const Vec3 n = (b - a).normalized();
  return {n, n.dot(0.5 * (a + b))};
}

namespace {

using Polygon = std::vector<Vec3>;

Polygon clip_polygon(const Polygon& poly, const HalfSpace& h, double tol, Polygon* cap) {
  Polygon out;
  const std::size_t n = poly.size();
  if (n == 0) return out;
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = h.normal.dot(poly[i]) - h.offset;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3& p = poly[i];
    const Vec3& q = poly[(i + 1) % n];
    const double sp = s[i];
    const double sq = s[(i + 1) % n];
    if (sp <= tol) {
      out.push_back(p);
      if (cap && std::abs(sp) <= tol) cap->push_back(p);
    }
    if ((sp < -tol && sq > tol) || (sp > tol && sq < -tol)) {
      const Vec3 x = p + (q - p) * (sp / (sp - sq));
      out.push_back(x);
      if (cap) cap->push_back(x);
    }
  }
  return out.size() >= 3 ? out : Polygon{};
}

double polygon_area_2d(const Polygon& p) {
  double a = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Vec3& u = p[i];
    const Vec3& v = p[(i + 1) % p.size()];
    a += u.x() * v.y() - u.y() * v.x();
  }
  return 0.5 * a;
}

Vec3 vector_area(const Polygon& p) {
  Vec3 a = Vec3::Zero();
  for (std::size_t i = 1; i + 1 < p.size(); ++i) a += (p[i] - p[0]).cross(p[i + 1] - p[0]);
  return 0.5 * a;
}

Polygon order_cap(std::vector<Vec3> pts, const Vec3& normal, double tol) {
  Polygon uniq;
  for (const Vec3& p : pts) {
    bool dup = false;
    for (const Vec3& q : uniq)
      if ((p - q).norm() <= tol) {
        dup = true;
        break;
      }
    if (!dup) uniq.push_back(p);
  }
  if (uniq.size() < 3) return {};
  Vec3 c = Vec3::Zero();
  for (const Vec3& p : uniq) c += p;
  c /= static_cast<double>(uniq.size());
  Vec3 e1 = (uniq[0] - c);
  e1 -= normal * normal.dot(e1);
  if (e1.norm() == 0.0) return {};
  e1.normalize();
  const Vec3 e2 = normal.cross(e1);
  std::sort(uniq.begin(), uniq.end(), [&](const Vec3& a, const Vec3& b) {
    return std::atan2((a - c).dot(e2), (a - c).dot(e1)) < std::atan2((b - c).dot(e2), (b - c).dot(e1));
  });
  return uniq;
}

}  // namespace

double clipped_triangle_area(std::span<const Vec3> tri, std::span<const HalfSpace> cuts) {
  Polygon poly(tri.begin(), tri.end());
  if (polygon_area_2d(poly) < 0.0) std::reverse(poly.begin(), poly.end());
  const double tol = 1e-14 * diameter(tri);
  for (const HalfSpace& h : cuts) {
    poly = clip_polygon(poly, h, tol, nullptr);
    if (poly.empty()) return 0.0;
  }
  return std::max(0.0, polygon_area_2d(poly));
}

double clipped_tetra_volume(std::span<const Vec3> tet, std::span<const HalfSpace> cuts) {
  std::vector<Polygon> faces;
  const Vec3 c = 0.25 * (tet[0] + tet[1] + tet[2] + tet[3]);
  const int idx[4][3] = {{1, 2, 3}, {0, 3, 2}, {0, 1, 3}, {0, 2, 1}};
  for (const auto& f : idx) {
    Polygon p{tet[f[0]], tet[f[1]], tet[f[2]]};
    if (vector_area(p).dot(p[0] - c) < 0.0) std::reverse(p.begin(), p.end());
    faces.push_back(p);
  }
  const double tol = 1e-14 * diameter(tet);
  for (const HalfSpace& h : cuts) {
    std::vector<Polygon> next;
    std::vector<Vec3> cap_pts;
    bool plane_face = false;
    for (const Polygon& f : faces) {
      const bool on_plane = std::all_of(f.begin(), f.end(), [&](const Vec3& p) {
        return std::abs(h.normal.dot(p) - h.offset) <= tol;
      });
      if (on_plane) {
        if (vector_area(f).dot(h.normal) > 0.0) {
          plane_face = true;
          next.push_back(f);
        }
        continue;
      }
      Polygon g = clip_polygon(f, h, tol, &cap_pts);
      if (!g.empty()) next.push_back(std::move(g));
    }
    Polygon cap = plane_face ? Polygon{} : order_cap(cap_pts, h.normal, 10.0 * tol);
    if (!cap.empty()) {
      if (vector_area(cap).dot(h.normal) < 0.0) std::reverse(cap.begin(), cap.end());
      next.push_back(std::move(cap));
    }
    faces = std::move(next);
    if (faces.size() < 4) return 0.0;
  }
  double vol = 0.0;
  for (const Polygon& f : faces) vol += vector_area(f).dot(f[0] - c);
  return std::max(0.0, vol / 3.0);
}

Eigen::VectorXd barycentric(std::span<const Vec3> simplex, const Vec3& x, int dim) {
  Eigen::MatrixXd m(dim, dim);
  Eigen::VectorXd r(dim);
  for (int j = 0; j < dim; ++j) m.col(j) = (simplex[j + 1] - simplex[0]).head(dim);
  r = (x - simplex[0]).head(dim);
  const Eigen::VectorXd l = m.fullPivLu().solve(r);
  Eigen::VectorXd b(dim + 1);
  b(0) = 1.0 - l.sum();
  b.tail(dim) = l;
  return b;
}

}  // namespace ddfv
