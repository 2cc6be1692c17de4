#include "ddfv/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>

namespace ddfv {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void header(std::ostream& os, const std::string& title) {
  os << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
}

void points(std::ostream& os, const std::vector<Vec3>& pts) {
  os << "POINTS " << pts.size() << " double\n";
  for (const Vec3& p : pts) os << num(p.x()) << ' ' << num(p.y()) << ' ' << num(p.z()) << '\n';
}

void cell_data(std::ostream& os, const std::string& name, const std::vector<double>& v, const std::vector<int>& ids,
               const std::string& id_name) {
  os << "CELL_DATA " << v.size() << "\nSCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
  for (double x : v) os << num(x) << '\n';
  os << "SCALARS " << id_name << " int 1\nLOOKUP_TABLE default\n";
  for (int i : ids) os << i << '\n';
}

// Corners of a convex 2D dual cell in counterclockwise order.
std::vector<Vec3> dual_polygon(const DualVolume& V, double tol) {
  std::vector<Vec3> pts;
  auto add = [&](const Vec3& p) {
    for (const Vec3& q : pts)
      if ((p - q).norm() <= tol) return;
    pts.push_back(p);
  };
  if (V.pieces.empty()) return pts;
  for (const DualPiece& piece : V.pieces)
    for (int i = V.is_boundary ? 0 : 1; i < 3; ++i) add(piece.pts[i]);
  Vec3 c = Vec3::Zero();
  for (const Vec3& p : pts) c += p;
  c /= static_cast<double>(pts.size());
  std::sort(pts.begin(), pts.end(), [&](const Vec3& a, const Vec3& b) {
    return std::atan2(a.y() - c.y(), a.x() - c.x()) < std::atan2(b.y() - c.y(), b.x() - c.x());
  });
  return pts;
}

}  // namespace

void write_vtk_primal(std::ostream& os, const DdfvMesh& m, const DiscreteFunctionBar& u, const std::string& name) {
  check_compatible(m, u);
  header(os, "primal " + name);
  points(os, m.points);
  const std::size_t nc = m.simplices.size();
  const int nv = m.dim + 1;
  os << "CELLS " << nc << ' ' << nc * (nv + 1) << '\n';
  for (const auto& s : m.simplices) {
    os << nv;
    for (int v : s) os << ' ' << v;
    os << '\n';
  }
  os << "CELL_TYPES " << nc << '\n';
  for (std::size_t i = 0; i < nc; ++i) os << (m.dim == 2 ? 5 : 10) << '\n';
  std::vector<double> vals(nc);
  std::vector<int> ids(nc);
  for (std::size_t i = 0; i < nc; ++i) {
    ids[i] = m.simplex_cluster[i];
    vals[i] = u.primal[ids[i]];
  }
  cell_data(os, name, vals, ids, "volume");
}

void write_vtk_dual(std::ostream& os, const DdfvMesh& m, const DiscreteFunctionBar& u, const std::string& name) {
  check_compatible(m, u);
  header(os, "dual " + name);
  std::vector<Vec3> pts;
  std::vector<std::vector<int>> cells;
  std::vector<int> ids;
  const double tol = 1e-10 * m.length_scale;
  for (int Ks = 0; Ks < m.n_dual(); ++Ks) {
    const DualVolume& V = m.dual[Ks];
    if (m.dim == 2) {
      const auto poly = dual_polygon(V, tol);
      if (poly.size() < 3) continue;
      std::vector<int> cell;
      for (const Vec3& p : poly) {
        cell.push_back(static_cast<int>(pts.size()));
        pts.push_back(p);
      }
      cells.push_back(std::move(cell));
      ids.push_back(Ks);
    } else {
      for (const DualPiece& piece : V.pieces) {
        std::vector<int> cell;
        for (int i = 0; i < 4; ++i) {
          cell.push_back(static_cast<int>(pts.size()));
          pts.push_back(piece.pts[i]);
        }
        cells.push_back(std::move(cell));
        ids.push_back(Ks);
      }
    }
  }
  points(os, pts);
  std::size_t total = 0;
  for (const auto& c : cells) total += c.size() + 1;
  os << "CELLS " << cells.size() << ' ' << total << '\n';
  for (const auto& c : cells) {
    os << c.size();
    for (int v : c) os << ' ' << v;
    os << '\n';
  }
  os << "CELL_TYPES " << cells.size() << '\n';
  for (std::size_t i = 0; i < cells.size(); ++i) os << (m.dim == 2 ? 7 : 10) << '\n';
  std::vector<double> vals(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) vals[i] = u.dual[ids[i]];
  cell_data(os, name, vals, ids, "volume");
}

void write_step_csv(std::ostream& os, const std::vector<StepReport>& steps) {
  os << "n,t,iterations,residual,strategy,rho,min_u,max_u,linf,mass\n";
  for (const StepReport& s : steps)
    os << s.n << ',' << num(s.t) << ',' << s.iterations << ',' << num(s.residual) << ',' << s.strategy << ','
       << num(s.rho) << ',' << num(s.umin) << ',' << num(s.umax) << ',' << num(s.linf) << ',' << num(s.mass) << '\n';
}

void write_diagnostics(std::ostream& os, const RunDiagnostics& d,
                       const std::vector<std::pair<std::string, double>>& extra) {
  os << "key,value\n";
  os << "M," << num(d.M) << '\n';
  os << "max_linf," << num(d.max_linf) << '\n';
  os << "energy," << num(d.energy) << '\n';
  os << "penalization_sum," << num(d.penalization_sum) << '\n';
  os << "weak_bv," << num(d.weak_bv) << '\n';
  os << "gap_l2," << num(d.gap_l2) << '\n';
  for (const auto& [k, v] : extra) os << k << ',' << num(v) << '\n';
}

void write_entropy_csv(std::ostream& os, const std::vector<EntropyResidual>& rows) {
  os << "test,kind,c,lhs,rhs,slack,solver_term,dissipation,penalization,remainder,gaps,identity_defect,scale,pass\n";
  for (const EntropyResidual& r : rows)
    os << r.test << ',' << to_string(r.kind) << ',' << num(r.c) << ',' << num(r.lhs) << ',' << num(r.rhs) << ','
       << num(r.slack) << ',' << num(r.solver_term) << ',' << num(r.dissipation) << ',' << num(r.penalization) << ','
       << num(r.remainder) << ',' << num(r.gaps) << ',' << num(r.identity_defect) << ',' << num(r.scale) << ','
       << (r.pass ? 1 : 0) << '\n';
}

std::string output_path(const std::string& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  return (std::filesystem::path(dir) / name).string();
}

}  // namespace ddfv
