#pragma once

#include "ddfv/fields.hpp"

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace ddfv {

/// Jump of a piecewise continuous map: value() at `at` may differ from both one-sided limits.
struct Jump {
  double at = 0.0;
  double left = 0.0;
  double right = 0.0;
};

/// Piecewise continuous scalar map with its a.e. derivative and singular points.
struct ScalarMap {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  std::vector<double> kinks;
  std::vector<Jump> jumps;

  double operator()(double z) const { return value(z); }
};

ScalarMap identity_map();
ScalarMap constant_map(double c);
ScalarMap affine_map(double slope);
/// z |-> alpha |z|^{m-1} z + beta z.
ScalarMap power_map(double m, double alpha = 1.0, double beta = 0.0);
/// sign^+(z - c) for eps = 0, (1/eps) min((z-c)^+, eps) otherwise; sign(0) = 0.
ScalarMap sign_plus(double c = 0.0, double eps = 0.0);
/// -sign^-(z - c) reflected: -1 below c, 0 above; smoothed over (c - eps, c) for eps > 0.
ScalarMap sign_minus(double c = 0.0, double eps = 0.0);

/// Riemann-Stieltjes integral of h against d theta over [a, b] (oriented).
/// An atom at an interior jump contributes h(z)(right - left); at an endpoint only the
/// part between the endpoint value and the inner one-sided limit counts.
double stieltjes(const std::function<double(double)>& h, const ScalarMap& theta, double a, double b,
                 double tol = 1e-12, double abs_tol = 0.0);

/// z |-> int_0^z theta(s) dA(s) for continuous A with a.e. derivative.
ScalarMap A_theta(const ScalarMap& theta, const ScalarMap& A);

/// b |-> A_theta(z) with A(z) = b, on the range A([-bracket, bracket]).
/// Plateaus of A are resolved to their midpoint.
class TildeATheta {
 public:
  TildeATheta(ScalarMap theta, ScalarMap A, double bracket);
  double operator()(double b) const;
  double preimage(double b) const;
  double range_min() const { return lo_; }
  double range_max() const { return hi_; }

 private:
  ScalarMap theta_, A_, Atheta_;
  double bracket_, lo_, hi_;
};

using VecFn1 = std::function<Vec3(double)>;

/// Semi-Kruzhkov pair (eta_c^+-, q_c^+-) built from theta = sign^+-_eps(. - c).
struct EntropyPair {
  int sign = 1;
  double c = 0.0;
  double eps = 0.0;
  ScalarMap theta;
  std::function<double(double)> eta;
  VecFn1 q;
};

EntropyPair entropy_pair(int sign, double c, double eps, const VecFn1& f);

/// q(z) = theta(z) f(z) - int_0^z f d theta, vanishing at 0.
VecFn1 entropy_flux(const ScalarMap& theta, const VecFn1& f);
/// eta(z) = int_0^z theta.
std::function<double(double)> entropy_primitive(const ScalarMap& theta);

struct ProblemSpec {
  std::string name;
  int dim = 2;
  std::array<double, 6> box{0, 1, 0, 1, 0, 1};
  VecFn1 f;
  VecFn1 df;
  /// Points where f(s).nu has a local extremum, for the Godunov flux; empty callable means unknown.
  std::function<std::vector<double>(const Vec3&)> flux_critical_points;
  ScalarMap A;
  double p = 2.0;
  std::function<double(const Vec3&)> k;
  SpaceTimeFn source;
  std::vector<double> source_breaks;
  std::function<double(double)> source_sup;
  SpaceFn u0;
  double u0_sup = 0.0;
  SpaceTimeFn exact;  ///< empty when no closed form is known
};

/// a(xi) = k(xi) xi with a(0) = 0.
Vec3 diffusion_flux(const ProblemSpec& spec, const Vec3& xi);

/// M = ||u0||_inf + int_0^T ||S(t)||_inf dt.
double m_bound(const ProblemSpec& spec, double T);

struct ContractReport {
  bool f_zero = true;
  bool A_zero = true;
  bool A_monotone = true;
  bool a_monotone = true;
  double k_growth_constant = 1.0;  ///< C with C^-1 |xi|^{p-2} <= k(xi) <= C |xi|^{p-2}
  double flux_modulus = 0.0;       ///< sampled Lipschitz constant of f on [-M, M]
  bool ok() const { return f_zero && A_zero && A_monotone && a_monotone; }
};

ContractReport check_contracts(const ProblemSpec& spec, double M, unsigned seed = 7);

struct ProblemOptions {
  int dim = 2;
  std::array<double, 6> box{0, 1, 0, 1, 0, 1};
  std::string initial = "default";  ///< default | zero | constant | bump | exact | riemann
  double amplitude = 1.0;
  double riemann_left = 1.0;
  double riemann_right = 0.0;
  double riemann_at = 0.5;
  std::string source = "zero";  ///< zero | pulse
  double source_amp = 0.0;
  double source_until = 0.0;
  Vec3 direction = Vec3(1, 0, 0);
  // custom problem coefficients
  double f_linear = 0.0;
  double f_quadratic = 0.0;
  double A_linear = 1.0;
  double A_power = 0.0;
  double A_exponent = 1.0;
};

/// name is one of heat, porous_medium(m), p_laplace(p), polytropic(m,p), burgers_diffusion(nu), custom.
ProblemSpec builtin_problem(const std::string& name, const ProblemOptions& opt = {});

}  // namespace ddfv
