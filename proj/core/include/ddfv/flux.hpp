#pragma once

#include "ddfv/physics.hpp"

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>

namespace ddfv {

enum class FluxScheme { Godunov, Rusanov, LaxFriedrichs, EngquistOsher };

FluxScheme parse_flux_scheme(const std::string& name);
const char* to_string(FluxScheme s);

class InvalidBound : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Monotone numerical convection flux g_{K,L}(a, b) for an interface with unit normal nu from K to L.
/// g(a, a) = f(a).nu exactly and g_{L,K}(b, a) = -g_{K,L}(a, b) through nu -> -nu.
class NumericalFlux {
 public:
  NumericalFlux(VecFn1 f, VecFn1 df, std::function<std::vector<double>(const Vec3&)> critical, FluxScheme scheme,
                double M, int samples = 256);

  double operator()(double a, double b, const Vec3& nu) const;
  double consistent(double a, const Vec3& nu) const { return f_(a).dot(nu); }

  FluxScheme scheme() const { return scheme_; }
  double bound() const { return M_; }
  /// Sampled Lipschitz constant of f on [-M, M].
  double modulus() const { return modulus_; }
  /// Viscosity coefficient used by the central schemes for the direction nu.
  double viscosity(const Vec3& nu) const;
  bool vanishes() const { return zero_; }

 private:
  double godunov(double a, double b, const Vec3& nu) const;
  double engquist_osher(double a, double b, const Vec3& nu) const;

  VecFn1 f_, df_;
  std::function<std::vector<double>(const Vec3&)> critical_;
  FluxScheme scheme_;
  double M_;
  int samples_;
  double modulus_ = 0.0;
  double lambda_global_ = 0.0;
  bool zero_ = false;
  std::vector<Vec3> slopes_;
  mutable std::mutex cache_mutex_;
  mutable std::map<std::array<double, 3>, double> lambda_cache_;
};

std::unique_ptr<NumericalFlux> make_flux(const ProblemSpec& spec, FluxScheme scheme, double M);

}  // namespace ddfv
