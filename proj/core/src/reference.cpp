#include "ddfv/reference.hpp"

#include "ddfv/physics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ddfv {

ReferenceSolution heat_exact(int dim, const std::array<double, 6>& box, std::array<int, 3> modes) {
  ReferenceSolution r;
  r.kind = ReferenceSolution::Kind::ExactClosedForm;
  r.dim = dim;
  r.box = box;
  double lambda = 0.0;
  std::array<double, 3> w{};
  for (int i = 0; i < dim; ++i) {
    const double L = box[2 * i + 1] - box[2 * i];
    if (!(L > 0.0)) throw std::invalid_argument("heat_exact: empty box");
    w[i] = modes[i] * std::numbers::pi / L;
    lambda += w[i] * w[i];
  }
  r.u = [=](double t, const Vec3& x) {
    double v = std::exp(-lambda * t);
    for (int i = 0; i < dim; ++i) v *= std::sin(w[i] * (x[i] - box[2 * i]));
    return v;
  };
  return r;
}

namespace {

// Godunov flux of a scalar 1D flux; extrema lie at the endpoints or at the given critical points.
double godunov_1d(const std::function<double(double)>& phi, const std::vector<double>& critical, double a, double b) {
  if (a == b) return phi(a);
  const double lo = std::min(a, b), hi = std::max(a, b);
  double best = a <= b ? std::min(phi(a), phi(b)) : std::max(phi(a), phi(b));
  for (double c : critical)
    if (c > lo && c < hi) best = a <= b ? std::min(best, phi(c)) : std::max(best, phi(c));
  return best;
}

// Sign changes of dphi on [-r, r], located by bisection.
std::vector<double> critical_points(const std::function<double(double)>& dphi, double r) {
  std::vector<double> out;
  if (!(r > 0.0)) return out;
  const int n = 2000;
  double x0 = -r, d0 = dphi(x0);
  for (int i = 1; i <= n; ++i) {
    const double x1 = -r + 2.0 * r * i / n, d1 = dphi(x1);
    if (d0 == 0.0) {
      out.push_back(x0);
    } else if (d0 * d1 < 0.0) {
      double l = x0, h = x1, dl = d0;
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (l + h), dm = dphi(mid);
        if (dm * dl <= 0.0) {
          h = mid;
        } else {
          l = mid;
          dl = dm;
        }
      }
      out.push_back(0.5 * (l + h));
    }
    x0 = x1;
    d0 = d1;
  }
  return out;
}

}  // namespace

ReferenceSolution vanishing_viscosity_1d(const std::function<double(double)>& flux,
                                         const std::function<double(double)>& dflux,
                                         const std::function<double(double)>& u0, double eps, int fine_n,
                                         const Vec3& direction, const ViscosityOracleOptions& opt) {
  if (!(eps > 0.0) || fine_n < 8 || !(opt.b > opt.a) || !(opt.T > 0.0) || opt.snapshots < 1)
    throw std::invalid_argument("vanishing_viscosity_1d: bad parameters");
  const int n = fine_n;
  const double dx = (opt.b - opt.a) / n;
  std::vector<double> u(n);
  double umax = 0.0;
  for (int i = 0; i < n; ++i) {
    u[i] = u0(opt.a + (i + 0.5) * dx);
    umax = std::max(umax, std::abs(u[i]));
  }
  double slope = 0.0;
  for (int i = 0; i <= 200; ++i) slope = std::max(slope, std::abs(dflux(-umax + 2.0 * umax * i / 200.0)));
  const double rate = slope / dx + 2.0 * eps / (dx * dx);
  const double dt_max = opt.cfl / std::max(rate, 1e-300);
  const double dt_snap = opt.T / opt.snapshots;
  const int sub = std::max(1, static_cast<int>(std::ceil(dt_snap / dt_max)));
  const double dt = dt_snap / sub;
  const std::vector<double> critical = critical_points(dflux, umax);
  if (dt * rate > 1.0) throw std::runtime_error("vanishing_viscosity_1d: unstable time step");

  auto snaps = std::make_shared<std::vector<std::vector<double>>>();
  snaps->push_back(u);
  std::vector<double> F(n + 1), next(n);
  for (int s = 0; s < opt.snapshots; ++s) {
    for (int k = 0; k < sub; ++k) {
      for (int i = 0; i <= n; ++i) {
        const double ul = i == 0 ? 0.0 : u[i - 1];
        const double ur = i == n ? 0.0 : u[i];
        // boundary faces see the zero Dirichlet value at distance dx/2
        const double h = (i == 0 || i == n) ? 0.5 * dx : dx;
        F[i] = godunov_1d(flux, critical, ul, ur) - eps * (ur - ul) / h;
      }
      for (int i = 0; i < n; ++i) next[i] = u[i] - dt / dx * (F[i + 1] - F[i]);
      u.swap(next);
      for (double v : u)
        if (!std::isfinite(v)) throw std::runtime_error("vanishing_viscosity_1d: instability");
    }
    snaps->push_back(u);
  }

  ReferenceSolution r;
  r.kind = ReferenceSolution::Kind::FineGrid1d;
  r.t_max = opt.T;
  const Vec3 dir = direction.normalized();
  const double a = opt.a;
  const int ns = opt.snapshots;
  const double T = opt.T;
  r.u = [snaps, dir, a, dx, n, ns, T](double t, const Vec3& x) {
    const double s = std::clamp(t / T * ns, 0.0, static_cast<double>(ns));
    const int j = std::min(static_cast<int>(s), ns - 1);
    const double wt = s - j;
    const double xi = (x.dot(dir) - a) / dx - 0.5;
    auto sample = [&](const std::vector<double>& v) {
      if (xi <= -0.5 || xi >= n - 0.5) return 0.0;
      if (xi < 0.0) return v[0] * (xi + 0.5) / 0.5;
      if (xi > n - 1) return v[n - 1] * (n - 0.5 - xi) / 0.5;
      const int i = static_cast<int>(xi);
      const double w = xi - i;
      return (1.0 - w) * v[i] + w * v[std::min(i + 1, n - 1)];
    };
    return (1.0 - wt) * sample((*snaps)[j]) + wt * sample((*snaps)[j + 1]);
  };
  return r;
}

namespace {

// Central difference with one Richardson step: (4 D_{h/2} - D_h) / 3.
template <class G>
double richardson(G&& g, double h) {
  const double d1 = (g(h) - g(-h)) / (2.0 * h);
  const double d2 = (g(0.5 * h) - g(-0.5 * h)) / h;
  return (4.0 * d2 - d1) / 3.0;
}

}  // namespace

Manufactured manufactured(const ProblemSpec& spec, const SpaceTimeFn& ustar, double length_scale) {
  Manufactured m;
  m.ref.kind = ReferenceSolution::Kind::Manufactured;
  m.ref.u = ustar;
  m.ref.dim = spec.dim;
  m.ref.box = spec.box;
  const int d = spec.dim;
  const double h = 1e-3 * length_scale;
  const ProblemSpec s = spec;
  m.source = [s, ustar, d, h](double t, const Vec3& x) {
    const double dt = richardson([&](double e) { return ustar(t + e, x); }, h);
    auto w = [&](const Vec3& y) { return s.A.value(ustar(t, y)); };
    auto grad_w = [&](const Vec3& y) {
      Vec3 g = Vec3::Zero();
      for (int i = 0; i < d; ++i)
        g[i] = richardson(
            [&](double e) {
              Vec3 z = y;
              z[i] += e;
              return w(z);
            },
            h);
      return g;
    };
    double div = 0.0;
    for (int i = 0; i < d; ++i) {
      div += richardson(
          [&](double e) {
            Vec3 z = x;
            z[i] += e;
            return s.f(ustar(t, z))[i] - diffusion_flux(s, grad_w(z))[i];
          },
          h);
    }
    return dt + div;
  };
  return m;
}

ProblemSpec manufactured_problem(const ProblemSpec& spec, const SpaceTimeFn& ustar) {
  ProblemSpec s = spec;
  double L = 0.0;
  for (int i = 0; i < spec.dim; ++i) L = std::max(L, spec.box[2 * i + 1] - spec.box[2 * i]);
  const Manufactured m = manufactured(spec, ustar, L);
  s.source = m.source;
  s.exact = ustar;
  s.u0 = [ustar](const Vec3& x) { return ustar(0.0, x); };
  s.source_breaks.clear();
  // sup norms sampled on a lattice
  const int g = spec.dim == 2 ? 24 : 10;
  auto lattice_max = [&](const std::function<double(const Vec3&)>& v) {
    double mx = 0.0;
    for (int i = 0; i <= g; ++i)
      for (int j = 0; j <= g; ++j)
        for (int k = 0; k <= (spec.dim == 3 ? g : 0); ++k) {
          Vec3 x(spec.box[0] + (spec.box[1] - spec.box[0]) * i / g, spec.box[2] + (spec.box[3] - spec.box[2]) * j / g,
                 spec.dim == 3 ? spec.box[4] + (spec.box[5] - spec.box[4]) * k / g : 0.0);
          mx = std::max(mx, std::abs(v(x)));
        }
    return mx;
  };
  s.u0_sup = lattice_max(s.u0);
  auto src = m.source;
  s.source_sup = [lattice_max, src](double t) { return lattice_max([&](const Vec3& x) { return src(t, x); }); };
  return s;
}

double front_position(const std::function<double(double)>& profile, double a, double b, double level, int samples) {
  double front = a;
  double prev_x = a, prev_v = profile(a);
  for (int i = 1; i <= samples; ++i) {
    const double x = a + (b - a) * i / samples;
    const double v = profile(x);
    if (prev_v >= level && v < level) front = prev_x + (x - prev_x) * (prev_v - level) / (prev_v - v);
    if (v >= level) front = x;
    prev_x = x;
    prev_v = v;
  }
  return front;
}

}  // namespace ddfv
