#include "ddfv/fields.hpp"

#include "ddfv/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace ddfv {

DiscreteFunction DiscreteFunctionBar::interior(const DdfvMesh& m) const {
  DiscreteFunction f;
  f.primal.assign(primal.begin(), primal.begin() + m.n_primal_interior);
  f.dual.assign(dual.begin(), dual.begin() + m.n_dual_interior);
  return f;
}

bool DiscreteFunctionBar::in_zero_space(const DdfvMesh& m) const {
  for (int k = m.n_primal_interior; k < m.n_primal(); ++k)
    if (primal[k] != 0.0) return false;
  for (int k = m.n_dual_interior; k < m.n_dual(); ++k)
    if (dual[k] != 0.0) return false;
  return true;
}

DiscreteFunction zeros(const DdfvMesh& m) {
  return {std::vector<double>(m.n_primal_interior, 0.0), std::vector<double>(m.n_dual_interior, 0.0)};
}

DiscreteFunctionBar zeros_bar(const DdfvMesh& m) {
  return {std::vector<double>(m.n_primal(), 0.0), std::vector<double>(m.n_dual(), 0.0)};
}

DiscreteFunctionBar extend_by_zero(const DdfvMesh& m, const DiscreteFunction& f) {
  check_compatible(m, f);
  DiscreteFunctionBar b = zeros_bar(m);
  std::copy(f.primal.begin(), f.primal.end(), b.primal.begin());
  std::copy(f.dual.begin(), f.dual.end(), b.dual.begin());
  return b;
}

void check_compatible(const DdfvMesh& m, const DiscreteFunction& f) {
  if (static_cast<int>(f.primal.size()) != m.n_primal_interior || static_cast<int>(f.dual.size()) != m.n_dual_interior)
    throw std::invalid_argument("discrete function does not match the mesh");
}

void check_compatible(const DdfvMesh& m, const DiscreteFunctionBar& f) {
  if (static_cast<int>(f.primal.size()) != m.n_primal() || static_cast<int>(f.dual.size()) != m.n_dual())
    throw std::invalid_argument("discrete function does not match the mesh");
}

namespace {

double pairing(const DdfvMesh& m, const double* wp, const double* vp, const double* wd, const double* vd) {
  const double d = m.dim;
  double a = 0.0, b = 0.0;
  for (int k = 0; k < m.n_primal_interior; ++k) a += m.primal[k].measure * wp[k] * vp[k];
  for (int k = 0; k < m.n_dual_interior; ++k) b += m.dual[k].measure * wd[k] * vd[k];
  return a / d + (d - 1.0) / d * b;
}

std::vector<Vec3> simplex_points(const DdfvMesh& m, int s) {
  std::vector<Vec3> p;
  for (int v : m.simplices[s]) p.push_back(m.points[v]);
  return p;
}

std::span<const Vec3> piece_points(const DdfvMesh& m, const DualPiece& pc) {
  return std::span<const Vec3>(pc.pts.data(), m.dim + 1);
}

double face_integral(const DdfvMesh& m, const std::vector<Vec3>& face, const SpaceFn& f, const SimplexRule& r) {
  (void)m;
  return integrate_simplex(face, r, f);
}

// sigma*_S: segment (x_K, x_L) in 2D, triangle (x_K, x_L, edge midpoint) in 3D
double dual_facet_integral(const DdfvMesh& m, const Subdiamond& S, const SpaceFn& f, const SimplexRule& r) {
  const Diamond& D = m.diamonds[S.diamond];
  const Vec3 xK = m.primal[D.K].center, xL = m.primal[D.L].center;
  if (m.dim == 2) {
    const std::vector<Vec3> seg{xK, xL};
    return integrate_simplex(seg, r, f);
  }
  const std::vector<Vec3> tri{xK, xL, S.edge_mid};
  return integrate_simplex(tri, r, f);
}

int nearest_dual(const DdfvMesh& m, const std::vector<std::vector<int>>& cand, int K, const Vec3& x) {
  int best = -1;
  double bd = std::numeric_limits<double>::infinity();
  for (int ks : cand[K]) {
    const double d = (m.dual[ks].center - x).squaredNorm();
    if (d < bd) {
      bd = d;
      best = ks;
    }
  }
  return best;
}

std::vector<std::vector<int>> overlap_candidates(const DdfvMesh& m) {
  std::vector<std::vector<int>> c(m.n_primal_interior);
  for (const auto& o : m.overlaps) c[o.K].push_back(o.Ks);
  return c;
}

double powq(double x, double q) { return std::isinf(q) ? std::abs(x) : std::pow(std::abs(x), q); }

}  // namespace

double inner_functions(const DdfvMesh& m, const DiscreteFunction& w, const DiscreteFunction& v) {
  check_compatible(m, w);
  check_compatible(m, v);
  return pairing(m, w.primal.data(), v.primal.data(), w.dual.data(), v.dual.data());
}

double inner_functions(const DdfvMesh& m, const DiscreteFunctionBar& w, const DiscreteFunctionBar& v) {
  check_compatible(m, w);
  check_compatible(m, v);
  return pairing(m, w.primal.data(), v.primal.data(), w.dual.data(), v.dual.data());
}

double inner_fields(const DdfvMesh& m, const DiscreteField& F, const DiscreteField& G) {
  if (static_cast<int>(F.values.size()) != m.n_diamonds() || static_cast<int>(G.values.size()) != m.n_diamonds())
    throw std::invalid_argument("discrete field does not match the mesh");
  double s = 0.0;
  for (int i = 0; i < m.n_diamonds(); ++i) s += m.diamonds[i].measure * F.values[i].dot(G.values[i]);
  return s;
}

double integrate_primal(const DdfvMesh& m, int K, const SpaceFn& f, int degree) {
  const PrimalVolume& P = m.primal[K];
  if (P.is_boundary) {
    std::vector<Vec3> face;
    for (int v : P.vertices) face.push_back(m.points[v]);
    return integrate_simplex(face, grundmann_moller(m.dim - 1, degree), f);
  }
  const SimplexRule r = grundmann_moller(m.dim, degree);
  double acc = 0.0;
  for (int s : P.simplices) acc += integrate_simplex(simplex_points(m, s), r, f);
  return acc;
}

double integrate_dual(const DdfvMesh& m, int Ks, const SpaceFn& f, int degree) {
  const SimplexRule r = grundmann_moller(m.dim, degree);
  double acc = 0.0;
  for (const auto& pc : m.dual[Ks].pieces) acc += integrate_simplex(piece_points(m, pc), r, f);
  return acc;
}

DiscreteFunction project_cells(const DdfvMesh& m, const SpaceFn& s, int degree) {
  DiscreteFunction out = zeros(m);
  for (int k = 0; k < m.n_primal_interior; ++k) out.primal[k] = integrate_primal(m, k, s, degree) / m.primal[k].measure;
  for (int k = 0; k < m.n_dual_interior; ++k) out.dual[k] = integrate_dual(m, k, s, degree) / m.dual[k].measure;
  return out;
}

ProjectedTest project_bar(const DdfvMesh& m, const SpaceFn& psi, int degree) {
  ProjectedTest t;
  t.values = zeros_bar(m);
  const SimplexRule face_rule = grundmann_moller(m.dim - 1, degree);
  t.interface_avg.resize(m.interfaces.size());
  for (std::size_t i = 0; i < m.interfaces.size(); ++i) {
    const Interface& itf = m.interfaces[i];
    t.interface_avg[i] = face_integral(m, itf.face, psi, face_rule) / itf.measure;
    if (m.primal[itf.L].is_boundary) t.values.primal[itf.L] = t.interface_avg[i];
  }
  for (int k = 0; k < m.n_primal_interior; ++k) t.values.primal[k] = integrate_primal(m, k, psi, degree) / m.primal[k].measure;
  for (int k = 0; k < m.n_dual(); ++k) t.values.dual[k] = integrate_dual(m, k, psi, degree) / m.dual[k].measure;

  const SimplexRule facet_rule = grundmann_moller(m.dim - 1, degree);
  t.dual_interface_avg.resize(m.dual_interfaces.size());
  for (std::size_t j = 0; j < m.dual_interfaces.size(); ++j) {
    const DualInterface& di = m.dual_interfaces[j];
    double acc = 0.0;
    for (int si : di.subdiamonds) acc += dual_facet_integral(m, m.subdiamonds[si], psi, facet_rule);
    t.dual_interface_avg[j] = acc / di.measure;
  }

  t.grad_primal.assign(m.n_primal_interior, Vec3::Zero());
  for (std::size_t i = 0; i < m.interfaces.size(); ++i) {
    const Interface& itf = m.interfaces[i];
    const Vec3 flux = itf.measure * t.interface_avg[i] * itf.normal;
    t.grad_primal[itf.K] += flux;
    if (itf.L < m.n_primal_interior) t.grad_primal[itf.L] -= flux;
  }
  for (int k = 0; k < m.n_primal_interior; ++k) t.grad_primal[k] /= m.primal[k].measure;

  t.grad_dual.assign(m.n_dual_interior, Vec3::Zero());
  for (std::size_t j = 0; j < m.dual_interfaces.size(); ++j) {
    const DualInterface& di = m.dual_interfaces[j];
    const Vec3 flux = di.measure * t.dual_interface_avg[j] * di.normal;
    if (di.Ks < m.n_dual_interior) t.grad_dual[di.Ks] += flux;
    if (di.Ls < m.n_dual_interior) t.grad_dual[di.Ls] -= flux;
  }
  for (int k = 0; k < m.n_dual_interior; ++k) t.grad_dual[k] /= m.dual[k].measure;
  return t;
}

namespace {

template <class Acc>
void slab_points(double a, double b, const std::vector<double>& breaks, int time_points, Acc&& acc) {
  std::vector<double> cuts{a};
  for (double c : breaks)
    if (c > a && c < b) cuts.push_back(c);
  cuts.push_back(b);
  const GaussRule g = gauss_legendre(time_points);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double l = cuts[i], r = cuts[i + 1];
    for (std::size_t q = 0; q < g.nodes.size(); ++q) acc(l + (r - l) * g.nodes[q], g.weights[q] * (r - l) / (b - a));
  }
}

}  // namespace

std::vector<DiscreteFunction> time_average(const DdfvMesh& m, const SpaceTimeFn& s, double dt, int N, int degree,
                                           int time_points) {
  return time_average(m, s, dt, N, degree, time_points, {});
}

std::vector<DiscreteFunction> time_average(const DdfvMesh& m, const SpaceTimeFn& s, double dt, int N, int degree,
                                           int time_points, const std::vector<double>& breaks) {
  std::vector<DiscreteFunction> out(N + 1, zeros(m));
  for (int n = 1; n <= N; ++n) {
    DiscreteFunction& acc = out[n];
    slab_points((n - 1) * dt, n * dt, breaks, time_points, [&](double t, double w) {
      const DiscreteFunction p = project_cells(m, [&](const Vec3& x) { return s(t, x); }, degree);
      for (std::size_t k = 0; k < p.primal.size(); ++k) acc.primal[k] += w * p.primal[k];
      for (std::size_t k = 0; k < p.dual.size(); ++k) acc.dual[k] += w * p.dual[k];
    });
  }
  return out;
}

std::vector<ProjectedTest> project_space_time(const DdfvMesh& m, const SpaceTimeFn& psi, double dt, int N, int degree,
                                              int time_points) {
  std::vector<ProjectedTest> out(N + 1);
  for (int n = 1; n <= N; ++n) {
    bool first = true;
    ProjectedTest& acc = out[n];
    slab_points((n - 1) * dt, n * dt, {}, time_points, [&](double t, double w) {
      const ProjectedTest p = project_bar(m, [&](const Vec3& x) { return psi(t, x); }, degree);
      if (first) {
        acc = p;
        auto scale = [w](auto& v) {
          for (auto& x : v) x *= w;
        };
        scale(acc.values.primal);
        scale(acc.values.dual);
        scale(acc.interface_avg);
        scale(acc.dual_interface_avg);
        scale(acc.grad_primal);
        scale(acc.grad_dual);
        first = false;
        return;
      }
      auto add = [w](auto& a, const auto& b) {
        for (std::size_t i = 0; i < a.size(); ++i) a[i] += w * b[i];
      };
      add(acc.values.primal, p.values.primal);
      add(acc.values.dual, p.values.dual);
      add(acc.interface_avg, p.interface_avg);
      add(acc.dual_interface_avg, p.dual_interface_avg);
      add(acc.grad_primal, p.grad_primal);
      add(acc.grad_dual, p.grad_dual);
    });
  }
  return out;
}

DiscreteFunctionBar compose(const DiscreteFunctionBar& u, const ScalarFn1& g) {
  DiscreteFunctionBar r = u;
  for (double& x : r.primal) x = g(x);
  for (double& x : r.dual) x = g(x);
  return r;
}

DiscreteFunction compose(const DiscreteFunction& u, const ScalarFn1& g) {
  DiscreteFunction r = u;
  for (double& x : r.primal) x = g(x);
  for (double& x : r.dual) x = g(x);
  return r;
}

int Lift::slab(double t) const {
  if (!(t >= 0.0)) throw std::out_of_range("lift: time before 0");
  const int n = static_cast<int>(std::floor(t / u_.dt)) + 1;
  return std::clamp(n, 1, u_.N);
}

LiftValue lift_at(const DdfvMesh& m, const DiscreteFunctionBar& u, const Vec3& x) {
  const auto [K, Ks] = m.locate_cells(x);
  if (K < 0) throw std::out_of_range("lift: point outside the domain");
  LiftValue v;
  v.primal = u.primal[K];
  v.dual = Ks < m.n_dual_interior ? u.dual[Ks] : 0.0;
  v.combined = (v.primal + (m.dim - 1.0) * v.dual) / m.dim;
  return v;
}

LiftValue Lift::operator()(double t, const Vec3& x) const { return lift_at(m_, u_.slices[slab(t)], x); }

double lift_norm(const DdfvMesh& m, const DiscreteFunctionBar& u, LiftKind kind, double q) {
  const bool sup = std::isinf(q);
  double acc = 0.0;
  auto add = [&](double meas, double v) {
    if (meas <= 0.0) return;
    acc = sup ? std::max(acc, std::abs(v)) : acc + meas * powq(v, q);
  };
  if (kind == LiftKind::Primal) {
    for (int k = 0; k < m.n_primal_interior; ++k) add(m.primal[k].measure, u.primal[k]);
  } else if (kind == LiftKind::Dual) {
    for (int k = 0; k < m.n_dual_interior; ++k) add(m.dual[k].measure, u.dual[k]);
  } else {
    for (const auto& o : m.overlaps) {
      const double ud = o.Ks < m.n_dual_interior ? u.dual[o.Ks] : 0.0;
      add(o.measure, (u.primal[o.K] + (m.dim - 1.0) * ud) / m.dim);
    }
  }
  return sup ? acc : std::pow(acc, 1.0 / q);
}

double lift_norm(const DdfvMesh& m, const SpaceTimeFunction& u, LiftKind kind, double q) {
  const bool sup = std::isinf(q);
  double acc = 0.0;
  for (int n = 1; n <= u.N; ++n) {
    const double v = lift_norm(m, u.slices[n], kind, q);
    acc = sup ? std::max(acc, v) : acc + u.dt * std::pow(v, q);
  }
  return sup ? acc : std::pow(acc, 1.0 / q);
}

namespace {

double slice_error_sum(const DdfvMesh& m, const DiscreteFunctionBar& u, const SpaceFn& exact, LiftKind kind, double q,
                       const SimplexRule& r, const std::vector<std::vector<int>>& cand) {
  double acc = 0.0;
  if (kind == LiftKind::Dual) {
    for (int k = 0; k < m.n_dual(); ++k) {
      const double v = k < m.n_dual_interior ? u.dual[k] : 0.0;
      for (const auto& pc : m.dual[k].pieces)
        acc += integrate_simplex(piece_points(m, pc), r, [&](const Vec3& x) { return powq(v - exact(x), q); });
    }
    return acc;
  }
  for (int k = 0; k < m.n_primal_interior; ++k)
    for (int s : m.primal[k].simplices) {
      acc += integrate_simplex(simplex_points(m, s), r, [&](const Vec3& x) {
        double v = u.primal[k];
        if (kind == LiftKind::Combined) {
          const int ks = nearest_dual(m, cand, k, x);
          const double ud = ks < m.n_dual_interior ? u.dual[ks] : 0.0;
          v = (v + (m.dim - 1.0) * ud) / m.dim;
        }
        return powq(v - exact(x), q);
      });
    }
  return acc;
}

}  // namespace

double lift_error(const DdfvMesh& m, const DiscreteFunctionBar& u, const SpaceFn& exact, LiftKind kind, double q,
                  int degree) {
  const SimplexRule r = grundmann_moller(m.dim, degree);
  const auto cand = overlap_candidates(m);
  return std::pow(slice_error_sum(m, u, exact, kind, q, r, cand), 1.0 / q);
}

double lift_error(const DdfvMesh& m, const SpaceTimeFunction& u, const SpaceTimeFn& exact, LiftKind kind, double q,
                  int degree, int time_points) {
  const SimplexRule r = grundmann_moller(m.dim, degree);
  const auto cand = overlap_candidates(m);
  double acc = 0.0;
  for (int n = 1; n <= u.N; ++n)
    slab_points((n - 1) * u.dt, n * u.dt, {}, time_points, [&](double t, double w) {
      acc += u.dt * w *
             slice_error_sum(m, u.slices[n], [&](const Vec3& x) { return exact(t, x); }, kind, q, r, cand);
    });
  return std::pow(acc, 1.0 / q);
}

namespace {

void csv_rows(std::ostream& os, const DdfvMesh& m, const DiscreteFunctionBar& u, const char* prefix) {
  char buf[64];
  for (int k = 0; k < m.n_primal(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g", u.primal[k]);
    os << prefix << (k < m.n_primal_interior ? "primal," : "boundary_primal,") << k << "," << buf << "\n";
  }
  for (int k = 0; k < m.n_dual(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g", u.dual[k]);
    os << prefix << (k < m.n_dual_interior ? "dual," : "boundary_dual,") << k << "," << buf << "\n";
  }
}

}  // namespace

void write_csv(std::ostream& os, const DdfvMesh& m, const DiscreteFunctionBar& u) {
  os << "entity_kind,id,value\n";
  csv_rows(os, m, u, "");
}

void write_csv(std::ostream& os, const DdfvMesh& m, const SpaceTimeFunction& u) {
  os << "n,t,entity_kind,id,value\n";
  char buf[64];
  for (int n = 0; n <= u.N; ++n) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,", n, n * u.dt);
    csv_rows(os, m, u.slices[n], buf);
  }
}

}  // namespace ddfv
