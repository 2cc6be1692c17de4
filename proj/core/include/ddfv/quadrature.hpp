#pragma once

#include "ddfv/geometry.hpp"

#include <functional>
#include <span>
#include <vector>

namespace ddfv {

/// Simplex rule in barycentric coordinates; weights sum to one.
struct SimplexRule {
  int dim = 0;
  int degree = 0;
  std::vector<std::vector<double>> bary;
  std::vector<double> weights;
};

/// Grundmann-Moller rule on a dim-simplex, exact for polynomials of the given degree.
SimplexRule grundmann_moller(int dim, int degree);

/// Integral over the simplex spanned by pts (dim + 1 points), f evaluated at physical points.
template <class F>
double integrate_simplex(std::span<const Vec3> pts, const SimplexRule& rule, F&& f) {
  const double meas = simplex_measure(pts);
  if (meas == 0.0) return 0.0;
  double acc = 0.0;
  for (std::size_t q = 0; q < rule.weights.size(); ++q) {
    Vec3 x = Vec3::Zero();
    for (std::size_t i = 0; i < pts.size(); ++i) x += rule.bary[q][i] * pts[i];
    acc += rule.weights[q] * f(x);
  }
  return meas * acc;
}

/// Gauss-Legendre nodes and weights on [0, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRule gauss_legendre(int n);

/// Adaptive Gauss-Kronrod integral of f over [a, b]. A panel is accepted once its error estimate is
/// below tol times its L1 norm or below its share of abs_tol; abs_tol guards integrands that cancel.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol = 1e-12, double abs_tol = 0.0);

}  // namespace ddfv
