#include "ddfv/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ddfv {

namespace {

void compositions(int total, int parts, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (parts == 1) {
    cur.push_back(total);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int k = 0; k <= total; ++k) {
    cur.push_back(k);
    compositions(total - k, parts - 1, cur, out);
    cur.pop_back();
  }
}

double factorial(int n) { return std::tgamma(n + 1.0); }

}  // namespace

SimplexRule grundmann_moller(int dim, int degree) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("grundmann_moller: dim must be 1..3");
  const int s = std::max(0, (degree - 1 + 1) / 2);
  const int d = 2 * s + 1;
  SimplexRule rule;
  rule.dim = dim;
  rule.degree = d;
  for (int i = 0; i <= s; ++i) {
    const double w = ((i % 2) ? -1.0 : 1.0) * std::pow(2.0, -2.0 * s) *
                     std::pow(static_cast<double>(d + dim - 2 * i), d) /
                     (factorial(i) * factorial(d + dim - i)) * factorial(dim);
    std::vector<std::vector<int>> betas;
    std::vector<int> cur;
    compositions(s - i, dim + 1, cur, betas);
    for (const auto& beta : betas) {
      std::vector<double> b(dim + 1);
      for (int j = 0; j <= dim; ++j) b[j] = (2.0 * beta[j] + 1.0) / (d + dim - 2 * i);
      rule.bary.push_back(std::move(b));
      rule.weights.push_back(w);
    }
  }
  return rule;
}

GaussRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n >= 1");
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    j(k, k - 1) = b;
    j(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  GaussRule r;
  for (int k = 0; k < n; ++k) {
    const double v = es.eigenvectors()(0, k);
    r.nodes.push_back(0.5 * (es.eigenvalues()(k) + 1.0));
    r.weights.push_back(v * v);
  }
  return r;
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double tol, double abs_tol) {
  if (a == b) return 0.0;
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  const double width = std::abs(b - a);
  struct Panel {
    double value, err;
  };
  auto eval = [&](double l, double r) {
    double err = 0.0, l1 = 0.0;
    const double v = GK::integrate(f, l, r, 0, 0.0, &err, &l1);
    return std::pair{Panel{v, err}, l1};
  };
  auto refine = [&](auto&& self, double l, double r, Panel p, double l1, int depth) -> double {
    if (depth >= 15 || p.err <= tol * l1 || p.err <= abs_tol * std::abs(r - l) / width) return p.value;
    const double mid = 0.5 * (l + r);
    const auto [left, l1l] = eval(l, mid);
    const auto [right, l1r] = eval(mid, r);
    // roundoff floor reached: halving no longer shrinks the estimate
    if (left.err + right.err > 0.9 * p.err) return left.value + right.value;
    return self(self, l, mid, left, l1l, depth + 1) + self(self, mid, r, right, l1r, depth + 1);
  };
  const auto [whole, l1] = eval(a, b);
  return refine(refine, a, b, whole, l1, 0);
}

}  // namespace ddfv
