#include "ddfv/physics.hpp"

#include "ddfv/quadrature.hpp"
#include "ddfv/reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace ddfv {

ScalarMap identity_map() {
  return {[](double z) { return z; }, [](double) { return 1.0; }, {}, {}};
}

ScalarMap constant_map(double c) {
  return {[c](double) { return c; }, [](double) { return 0.0; }, {}, {}};
}

ScalarMap affine_map(double slope) {
  return {[slope](double z) { return slope * z; }, [slope](double) { return slope; }, {}, {}};
}

ScalarMap power_map(double m, double alpha, double beta) {
  ScalarMap s;
  s.value = [=](double z) { return alpha * std::pow(std::abs(z), m - 1.0) * z + beta * z; };
  s.derivative = [=](double z) {
    if (z == 0.0 && m < 1.0) return std::numeric_limits<double>::infinity();
    return alpha * m * std::pow(std::abs(z), m - 1.0) + beta;
  };
  if (m != 1.0 && alpha != 0.0) s.kinks.push_back(0.0);
  return s;
}

ScalarMap sign_plus(double c, double eps) {
  ScalarMap s;
  if (eps <= 0.0) {
    s.value = [c](double z) { return z > c ? 1.0 : 0.0; };
    s.derivative = [](double) { return 0.0; };
    s.jumps.push_back({c, 0.0, 1.0});
    return s;
  }
  s.value = [=](double z) { return std::min(std::max(z - c, 0.0), eps) / eps; };
  s.derivative = [=](double z) { return (z > c && z < c + eps) ? 1.0 / eps : 0.0; };
  s.kinks = {c, c + eps};
  return s;
}

ScalarMap sign_minus(double c, double eps) {
  ScalarMap s;
  if (eps <= 0.0) {
    s.value = [c](double z) { return z < c ? -1.0 : 0.0; };
    s.derivative = [](double) { return 0.0; };
    s.jumps.push_back({c, -1.0, 0.0});
    return s;
  }
  s.value = [=](double z) { return -std::min(std::max(c - z, 0.0), eps) / eps; };
  s.derivative = [=](double z) { return (z < c && z > c - eps) ? 1.0 / eps : 0.0; };
  s.kinks = {c - eps, c};
  return s;
}

namespace {

std::vector<double> cuts_between(double lo, double hi, const std::vector<double>& pts) {
  std::vector<double> c{lo};
  for (double x : pts)
    if (x > lo && x < hi) c.push_back(x);
  std::sort(c.begin() + 1, c.end());
  c.push_back(hi);
  return c;
}

double integrate_pieces(const std::function<double(double)>& g, double lo, double hi, const std::vector<double>& breaks,
                        double tol, double abs_tol = 0.0) {
  const auto c = cuts_between(lo, hi, breaks);
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < c.size(); ++i)
    acc += integrate_adaptive(g, c[i], c[i + 1], tol, abs_tol * (c[i + 1] - c[i]) / (hi - lo));
  return acc;
}

std::vector<double> singular_points(const ScalarMap& s) {
  std::vector<double> p = s.kinks;
  for (const auto& j : s.jumps) p.push_back(j.at);
  return p;
}

std::function<double(double)> derivative_or_fd(const ScalarMap& s) {
  if (s.derivative) return s.derivative;
  auto v = s.value;
  return [v](double z) {
    const double h = 1e-6 * std::max(1.0, std::abs(z));
    return (v(z + h) - v(z - h)) / (2.0 * h);
  };
}

}  // namespace

double stieltjes(const std::function<double(double)>& h, const ScalarMap& theta, double a, double b, double tol,
                 double abs_tol) {
  if (a == b) return 0.0;
  if (a > b) return -stieltjes(h, theta, b, a, tol, abs_tol);
  const auto dtheta = derivative_or_fd(theta);
  double acc =
      integrate_pieces([&](double s) { return h(s) * dtheta(s); }, a, b, singular_points(theta), tol, abs_tol);
  for (const Jump& j : theta.jumps) {
    if (j.at > a && j.at < b)
      acc += h(j.at) * (j.right - j.left);
    else if (j.at == a)
      acc += h(a) * (j.right - theta.value(a));
    else if (j.at == b)
      acc += h(b) * (theta.value(b) - j.left);
  }
  return acc;
}

ScalarMap A_theta(const ScalarMap& theta, const ScalarMap& A) {
  const auto dA = derivative_or_fd(A);
  std::vector<double> breaks = singular_points(theta);
  for (double k : A.kinks) breaks.push_back(k);
  ScalarMap s;
  s.value = [theta, dA, breaks](double z) {
    if (z == 0.0) return 0.0;
    const double lo = std::min(0.0, z), hi = std::max(0.0, z);
    const double v = integrate_pieces([&](double x) { return theta.value(x) * dA(x); }, lo, hi, breaks, 1e-13);
    return z > 0.0 ? v : -v;
  };
  s.derivative = [theta, dA](double z) { return theta.value(z) * dA(z); };
  s.kinks = breaks;
  return s;
}

TildeATheta::TildeATheta(ScalarMap theta, ScalarMap A, double bracket)
    : theta_(std::move(theta)), A_(std::move(A)), bracket_(bracket) {
  if (!(bracket_ > 0.0)) throw std::invalid_argument("TildeATheta: bracket must be positive");
  Atheta_ = A_theta(theta_, A_);
  lo_ = A_.value(-bracket_);
  hi_ = A_.value(bracket_);
}

double TildeATheta::preimage(double b) const {
  const double tol = 1e-12 * std::max(1.0, std::abs(b));
  if (b < lo_ - tol || b > hi_ + tol) throw std::domain_error("TildeATheta: value outside the range of A");
  // smallest z with A(z) >= b and largest z with A(z) <= b
  auto bisect = [&](bool lower) {
    double l = -bracket_, r = bracket_;
    for (int it = 0; it < 200 && r - l > 1e-15 * bracket_; ++it) {
      const double mid = 0.5 * (l + r);
      const double v = A_.value(mid);
      const bool go_left = lower ? (v >= b) : (v > b);
      (go_left ? r : l) = mid;
    }
    return 0.5 * (l + r);
  };
  return 0.5 * (bisect(true) + bisect(false));
}

double TildeATheta::operator()(double b) const { return Atheta_.value(preimage(b)); }

VecFn1 entropy_flux(const ScalarMap& theta, const VecFn1& f) {
  return [theta, f](double z) {
    Vec3 q = theta.value(z) * f(z);
    for (int c = 0; c < 3; ++c) q[c] -= stieltjes([&](double s) { return f(s)[c]; }, theta, 0.0, z);
    return q;
  };
}

std::function<double(double)> entropy_primitive(const ScalarMap& theta) {
  const std::vector<double> breaks = singular_points(theta);
  return [theta, breaks](double z) {
    if (z == 0.0) return 0.0;
    const double lo = std::min(0.0, z), hi = std::max(0.0, z);
    const double v = integrate_pieces(theta.value, lo, hi, breaks, 1e-13);
    return z > 0.0 ? v : -v;
  };
}

EntropyPair entropy_pair(int sign, double c, double eps, const VecFn1& f) {
  if (eps < 0.0) throw std::invalid_argument("entropy_pair: eps must be nonnegative");
  EntropyPair e;
  e.sign = sign >= 0 ? 1 : -1;
  e.c = c;
  e.eps = eps;
  e.theta = e.sign > 0 ? sign_plus(c, eps) : sign_minus(c, eps);
  if (eps == 0.0) {
    if (e.sign > 0) {
      e.eta = [c](double z) { return std::max(z - c, 0.0); };
      e.q = [c, f](double z) { return z > c ? Vec3(f(z) - f(c)) : Vec3(Vec3::Zero()); };
    } else {
      e.eta = [c](double z) { return std::max(c - z, 0.0); };
      e.q = [c, f](double z) { return z < c ? Vec3(f(c) - f(z)) : Vec3(Vec3::Zero()); };
    }
    return e;
  }
  auto E = entropy_primitive(e.theta);
  auto Q = entropy_flux(e.theta, f);
  const double Ec = E(c);
  const Vec3 Qc = Q(c);
  e.eta = [E, Ec](double z) { return E(z) - Ec; };
  e.q = [Q, Qc](double z) { return Vec3(Q(z) - Qc); };
  return e;
}

Vec3 diffusion_flux(const ProblemSpec& spec, const Vec3& xi) {
  if (xi.squaredNorm() == 0.0) return Vec3::Zero();
  return spec.k(xi) * xi;
}

double m_bound(const ProblemSpec& spec, double T) {
  double s = 0.0;
  if (spec.source_sup) {
    std::vector<double> cuts{0.0};
    for (double b : spec.source_breaks)
      if (b > 0.0 && b < T) cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.push_back(T);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) s += integrate_adaptive(spec.source_sup, cuts[i], cuts[i + 1], 1e-8);
  }
  return spec.u0_sup + s;
}

ContractReport check_contracts(const ProblemSpec& spec, double M, unsigned seed) {
  ContractReport r;
  r.f_zero = spec.f(0.0).norm() == 0.0;
  r.A_zero = spec.A.value(0.0) == 0.0;
  const int n = 10000;
  double prev = spec.A.value(-M);
  Vec3 fprev = spec.f(-M);
  for (int i = 1; i <= n; ++i) {
    const double z = -M + 2.0 * M * i / n;
    const double a = spec.A.value(z);
    if (a < prev) r.A_monotone = false;
    prev = a;
    const Vec3 fz = spec.f(z);
    r.flux_modulus = std::max(r.flux_modulus, (fz - fprev).norm() / (2.0 * M / n));
    fprev = fz;
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  auto rand_vec = [&] {
    Vec3 v(U(rng), U(rng), spec.dim == 3 ? U(rng) : 0.0);
    return v;
  };
  for (int i = 0; i < 1000; ++i) {
    const Vec3 xi = rand_vec(), eta = rand_vec();
    if ((xi - eta).norm() == 0.0) continue;
    if ((diffusion_flux(spec, xi) - diffusion_flux(spec, eta)).dot(xi - eta) <= 0.0) r.a_monotone = false;
    const double nx = xi.norm();
    if (nx > 0.0) {
      const double ratio = spec.k(xi) / std::pow(nx, spec.p - 2.0);
      r.k_growth_constant = std::max({r.k_growth_constant, ratio, 1.0 / ratio});
    }
  }
  return r;
}

namespace {

struct ParsedName {
  std::string base;
  std::vector<double> args;
};

ParsedName parse_name(const std::string& name) {
  ParsedName p;
  const auto open = name.find('(');
  if (open == std::string::npos) {
    p.base = name;
    return p;
  }
  const auto close = name.find(')', open);
  if (close == std::string::npos) throw std::invalid_argument("unknown problem: " + name);
  p.base = name.substr(0, open);
  std::stringstream ss(name.substr(open + 1, close - open - 1));
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      p.args.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad problem parameter in " + name);
    }
  }
  return p;
}

double arg_or(const ParsedName& p, std::size_t i, double def) { return i < p.args.size() ? p.args[i] : def; }

void set_initial(ProblemSpec& s, const ProblemOptions& o, bool has_exact) {
  std::string kind = o.initial;
  if (kind == "default") kind = has_exact ? "exact" : "bump";
  const double a = o.amplitude;
  if (kind == "zero") {
    s.u0 = [](const Vec3&) { return 0.0; };
    s.u0_sup = 0.0;
  } else if (kind == "constant") {
    s.u0 = [a](const Vec3&) { return a; };
    s.u0_sup = std::abs(a);
  } else if (kind == "bump") {
    Vec3 c(0.5 * (o.box[0] + o.box[1]), 0.5 * (o.box[2] + o.box[3]), 0.0);
    double side = std::min(o.box[1] - o.box[0], o.box[3] - o.box[2]);
    if (o.dim == 3) {
      c.z() = 0.5 * (o.box[4] + o.box[5]);
      side = std::min(side, o.box[5] - o.box[4]);
    }
    const double R = 0.4 * side;
    s.u0 = [a, c, R](const Vec3& x) {
      const double r2 = (x - c).squaredNorm() / (R * R);
      return r2 < 1.0 ? a * (1.0 - r2) * (1.0 - r2) : 0.0;
    };
    s.u0_sup = std::abs(a);
  } else if (kind == "riemann") {
    const Vec3 dir = o.direction.normalized();
    const double l = o.riemann_left, r = o.riemann_right, at = o.riemann_at;
    s.u0 = [dir, l, r, at](const Vec3& x) { return x.dot(dir) < at ? l : r; };
    s.u0_sup = std::max(std::abs(l), std::abs(r));
  } else if (kind == "exact") {
    if (!s.exact) throw std::invalid_argument("problem " + s.name + " has no exact solution");
    auto ex = s.exact;
    s.u0 = [ex](const Vec3& x) { return ex(0.0, x); };
    s.u0_sup = std::abs(a);
  } else {
    throw std::invalid_argument("unknown initial condition: " + kind);
  }
}

void set_source(ProblemSpec& s, const ProblemOptions& o) {
  if (o.source == "zero") {
    s.source = [](double, const Vec3&) { return 0.0; };
    s.source_sup = [](double) { return 0.0; };
  } else if (o.source == "pulse") {
    const double amp = o.source_amp, until = o.source_until;
    s.source = [amp, until](double t, const Vec3&) { return t < until ? amp : 0.0; };
    s.source_sup = [amp, until](double t) { return t < until ? std::abs(amp) : 0.0; };
    s.source_breaks = {until};
  } else {
    throw std::invalid_argument("unknown source: " + o.source);
  }
}

std::function<double(const Vec3&)> p_growth(double p) {
  if (p == 2.0) return [](const Vec3&) { return 1.0; };
  return [p](const Vec3& xi) {
    const double n = xi.norm();
    return n == 0.0 ? 0.0 : std::pow(n, p - 2.0);
  };
}

void no_convection(ProblemSpec& s) {
  s.f = [](double) { return Vec3(Vec3::Zero()); };
  s.df = s.f;
  s.flux_critical_points = [](const Vec3&) { return std::vector<double>{}; };
}

// f(u) = (b u + c u^2 / 2) dir
void polynomial_convection(ProblemSpec& s, double b, double c, const Vec3& dir) {
  s.f = [=](double u) { return Vec3((b * u + 0.5 * c * u * u) * dir); };
  s.df = [=](double u) { return Vec3((b + c * u) * dir); };
  s.flux_critical_points = [=](const Vec3&) {
    if (c == 0.0) return std::vector<double>{};
    return std::vector<double>{-b / c};
  };
}

}  // namespace

ProblemSpec builtin_problem(const std::string& name, const ProblemOptions& o) {
  if (o.dim != 2 && o.dim != 3) throw std::invalid_argument("problem dimension must be 2 or 3");
  const ParsedName pn = parse_name(name);
  ProblemSpec s;
  s.name = name;
  s.dim = o.dim;
  s.box = o.box;
  no_convection(s);
  bool has_exact = false;
  if (pn.base == "heat") {
    s.A = identity_map();
    s.p = 2.0;
    const ReferenceSolution ref = heat_exact(o.dim, o.box);
    const double a = o.amplitude;
    auto u = ref.u;
    s.exact = [u, a](double t, const Vec3& x) { return a * u(t, x); };
    has_exact = true;
  } else if (pn.base == "porous_medium") {
    const double m = arg_or(pn, 0, 2.0);
    if (m < 1.0) throw std::invalid_argument("porous_medium: m >= 1");
    s.A = power_map(m);
  } else if (pn.base == "p_laplace") {
    s.p = arg_or(pn, 0, 2.0);
    s.A = identity_map();
  } else if (pn.base == "polytropic") {
    const double m = arg_or(pn, 0, 2.0);
    s.p = arg_or(pn, 1, 2.0);
    s.A = power_map(m);
  } else if (pn.base == "burgers_diffusion") {
    const double nu = arg_or(pn, 0, 0.0);
    if (nu < 0.0) throw std::invalid_argument("burgers_diffusion: nu >= 0");
    s.A = nu == 0.0 ? constant_map(0.0) : affine_map(nu);
    polynomial_convection(s, 0.0, 1.0, o.direction.normalized());
  } else if (pn.base == "custom") {
    s.p = arg_or(pn, 0, 2.0);
    s.A = o.A_power != 0.0 ? power_map(o.A_exponent, o.A_power, o.A_linear) : affine_map(o.A_linear);
    polynomial_convection(s, o.f_linear, o.f_quadratic, o.direction.normalized());
  } else {
    throw std::invalid_argument("unknown problem: " + name);
  }
  if (!(s.p > 1.0)) throw std::invalid_argument("p must exceed 1");
  s.k = p_growth(s.p);
  set_initial(s, o, has_exact);
  set_source(s, o);
  return s;
}

}  // namespace ddfv
