#include "ddfv/flux.hpp"

#include "ddfv/quadrature.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>

namespace ddfv {

FluxScheme parse_flux_scheme(const std::string& name) {
  if (name == "godunov") return FluxScheme::Godunov;
  if (name == "rusanov") return FluxScheme::Rusanov;
  if (name == "lax_friedrichs") return FluxScheme::LaxFriedrichs;
  if (name == "engquist_osher") return FluxScheme::EngquistOsher;
  throw std::invalid_argument("unknown flux scheme: " + name);
}

const char* to_string(FluxScheme s) {
  switch (s) {
    case FluxScheme::Godunov:
      return "godunov";
    case FluxScheme::Rusanov:
      return "rusanov";
    case FluxScheme::LaxFriedrichs:
      return "lax_friedrichs";
    case FluxScheme::EngquistOsher:
      return "engquist_osher";
  }
  return "?";
}

NumericalFlux::NumericalFlux(VecFn1 f, VecFn1 df, std::function<std::vector<double>(const Vec3&)> critical,
                             FluxScheme scheme, double M, int samples)
    : f_(std::move(f)), df_(std::move(df)), critical_(std::move(critical)), scheme_(scheme), M_(M), samples_(samples) {
  if (!(M_ > 0.0) || !std::isfinite(M_)) throw InvalidBound("flux bound M must be positive and finite");
  if (!df_) {
    auto fv = f_;
    df_ = [fv](double s) {
      const double h = 1e-6 * std::max(1.0, std::abs(s));
      return Vec3((fv(s + h) - fv(s - h)) / (2.0 * h));
    };
  }
  const int n = 10000;
  zero_ = true;
  Vec3 prev = f_(-M_);
  for (int i = 0; i <= n; ++i) {
    const double s = -M_ + 2.0 * M_ * i / n;
    const Vec3 v = f_(s);
    if (v.norm() != 0.0) zero_ = false;
    if (i > 0) modulus_ = std::max(modulus_, (v - prev).norm() / (2.0 * M_ / n));
    prev = v;
  }
  const int m = 2000;
  slopes_.reserve(m + 1);
  for (int i = 0; i <= m; ++i) {
    const Vec3 d = df_(-M_ + 2.0 * M_ * i / m);
    slopes_.push_back(d);
    lambda_global_ = std::max(lambda_global_, d.norm());
  }
  lambda_global_ = std::max(lambda_global_, modulus_);
}

double NumericalFlux::viscosity(const Vec3& nu) const {
  if (scheme_ == FluxScheme::LaxFriedrichs) return lambda_global_;
  const std::array<double, 3> key{nu.x(), nu.y(), nu.z()};
  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto it = lambda_cache_.find(key);
    if (it != lambda_cache_.end()) return it->second;
  }
  double lam = 0.0;
  for (const Vec3& d : slopes_) lam = std::max(lam, std::abs(d.dot(nu)));
  std::lock_guard<std::mutex> lock(cache_mutex_);
  lambda_cache_.emplace(key, lam);
  return lam;
}

double NumericalFlux::godunov(double a, double b, const Vec3& nu) const {
  auto phi = [&](double s) { return f_(s).dot(nu); };
  const double lo = std::min(a, b), hi = std::max(a, b);
  const bool take_min = a <= b;
  auto better = [take_min](double x, double y) { return take_min ? x < y : x > y; };
  double best = phi(a);
  const double pb = phi(b);
  if (better(pb, best)) best = pb;
  if (critical_) {
    for (double c : critical_(nu))
      if (c > lo && c < hi) {
        const double v = phi(c);
        if (better(v, best)) best = v;
      }
    return best;
  }
  int arg = -1;
  double bv = best;
  for (int i = 1; i < samples_; ++i) {
    const double v = phi(lo + (hi - lo) * i / samples_);
    if (better(v, bv)) {
      bv = v;
      arg = i;
    }
  }
  if (arg < 0) return best;
  const double l = lo + (hi - lo) * (arg - 1) / samples_;
  const double r = lo + (hi - lo) * (arg + 1) / samples_;
  auto obj = [&](double s) { return take_min ? phi(s) : -phi(s); };
  const auto res = boost::math::tools::brent_find_minima(obj, l, r, 50);
  const double v = take_min ? res.second : -res.second;
  return better(v, bv) ? v : bv;
}

double NumericalFlux::engquist_osher(double a, double b, const Vec3& nu) const {
  // g(a, b) = phi(b) + int_b^a max(phi', 0)
  auto pos = [&](double s) { return std::max(df_(s).dot(nu), 0.0); };
  const double lo = std::min(a, b), hi = std::max(a, b);
  std::vector<double> cuts{lo};
  if (critical_)
    for (double c : critical_(nu))
      if (c > lo && c < hi) cuts.push_back(c);
  std::sort(cuts.begin(), cuts.end());
  cuts.push_back(hi);
  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) integral += integrate_adaptive(pos, cuts[i], cuts[i + 1], 1e-13);
  if (a < b) integral = -integral;
  return f_(b).dot(nu) + integral;
}

double NumericalFlux::operator()(double a, double b, const Vec3& nu) const {
  if (zero_) return 0.0;
  if (a == b) return consistent(a, nu);
  switch (scheme_) {
    case FluxScheme::Godunov:
      return godunov(a, b, nu);
    case FluxScheme::EngquistOsher:
      return engquist_osher(a, b, nu);
    case FluxScheme::Rusanov:
    case FluxScheme::LaxFriedrichs:
      return 0.5 * (f_(a) + f_(b)).dot(nu) - 0.5 * viscosity(nu) * (b - a);
  }
  return 0.0;
}

std::unique_ptr<NumericalFlux> make_flux(const ProblemSpec& spec, FluxScheme scheme, double M) {
  return std::make_unique<NumericalFlux>(spec.f, spec.df, spec.flux_critical_points, scheme, M);
}

}  // namespace ddfv
