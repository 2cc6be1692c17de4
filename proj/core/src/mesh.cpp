#include "ddfv/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace ddfv {

const char* to_string(MeshErrorKind k) {
  switch (k) {
    case MeshErrorKind::InvalidInput: return "InvalidInput";
    case MeshErrorKind::NonDelaunay: return "NonDelaunay";
    case MeshErrorKind::FaceCircumcenterOutside: return "FaceCircumcenterOutside";
    case MeshErrorKind::DegenerateCell: return "DegenerateCell";
    case MeshErrorKind::NonConforming: return "NonConforming";
    case MeshErrorKind::NegativeSubdiamond: return "NegativeSubdiamond";
    case MeshErrorKind::PartitionMismatch: return "PartitionMismatch";
  }
  return "MeshError";
}

struct DdfvMesh::Grid {
  Vec3 lo, hi;
  std::array<int, 3> n{1, 1, 1};
  Vec3 step;
  std::vector<std::vector<int>> simplex_bins;
  std::vector<std::vector<int>> vertex_bins;

  std::array<int, 3> cell_of(const Vec3& x) const {
    std::array<int, 3> c{};
    for (int a = 0; a < 3; ++a) {
      const int i = step[a] > 0 ? static_cast<int>(std::floor((x[a] - lo[a]) / step[a])) : 0;
      c[a] = std::clamp(i, 0, n[a] - 1);
    }
    return c;
  }
  int flat(int i, int j, int k) const { return (k * n[1] + j) * n[0] + i; }

  template <class F>
  void visit(const Vec3& blo, const Vec3& bhi, F&& f) const {
    const auto a = cell_of(blo);
    const auto b = cell_of(bhi);
    for (int k = a[2]; k <= b[2]; ++k)
      for (int j = a[1]; j <= b[1]; ++j)
        for (int i = a[0]; i <= b[0]; ++i) f(flat(i, j, k));
  }
};

namespace {

using Face = std::array<int, 3>;

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) p[std::max(a, b)] = std::min(a, b);
  }
};

std::vector<Vec3> gather(const std::vector<Vec3>& pts, const std::vector<int>& ids) {
  std::vector<Vec3> out;
  out.reserve(ids.size());
  for (int i : ids) out.push_back(pts[i]);
  return out;
}

std::shared_ptr<DdfvMesh::Grid> make_grid(const DdfvMesh& m) {
  auto g = std::make_shared<DdfvMesh::Grid>();
  g->lo = m.points[0];
  g->hi = m.points[0];
  for (const Vec3& p : m.points) {
    g->lo = g->lo.cwiseMin(p);
    g->hi = g->hi.cwiseMax(p);
  }
  const double target = std::max(1.0, std::pow(static_cast<double>(m.simplices.size()) / 2.0, 1.0 / m.dim));
  for (int a = 0; a < 3; ++a) {
    const double ext = g->hi[a] - g->lo[a];
    g->n[a] = (a < m.dim && ext > 0) ? std::max(1, static_cast<int>(target)) : 1;
    g->step[a] = ext > 0 ? ext / g->n[a] : 0.0;
  }
  const int nb = g->n[0] * g->n[1] * g->n[2];
  g->simplex_bins.assign(nb, {});
  g->vertex_bins.assign(nb, {});
  for (int s = 0; s < static_cast<int>(m.simplices.size()); ++s) {
    Vec3 lo = m.points[m.simplices[s][0]], hi = lo;
    for (int v : m.simplices[s]) {
      lo = lo.cwiseMin(m.points[v]);
      hi = hi.cwiseMax(m.points[v]);
    }
    g->visit(lo, hi, [&](int b) { g->simplex_bins[b].push_back(s); });
  }
  for (int v = 0; v < static_cast<int>(m.points.size()); ++v) {
    const auto c = g->cell_of(m.points[v]);
    g->vertex_bins[g->flat(c[0], c[1], c[2])].push_back(v);
  }
  return g;
}

Face face_key(const std::vector<int>& simplex, int skip) {
  Face f{-1, -1, -1};
  int k = 0;
  for (int i = 0; i < static_cast<int>(simplex.size()); ++i)
    if (i != skip) f[k++] = simplex[i];
  std::sort(f.begin(), f.begin() + k);
  return f;
}

std::vector<int> face_ids(const Face& f, int dim) { return std::vector<int>(f.begin(), f.begin() + dim); }

}  // namespace

int DdfvMesh::locate(const Vec3& x) const {
  if (!grid) return -1;
  const auto c = grid->cell_of(x);
  const double tol = 1e-12;
  for (int s : grid->simplex_bins[grid->flat(c[0], c[1], c[2])]) {
    const auto pts = gather(points, simplices[s]);
    const Eigen::VectorXd b = barycentric(pts, x, dim);
    if (b.minCoeff() >= -tol) return s;
  }
  return -1;
}

std::pair<int, int> DdfvMesh::locate_cells(const Vec3& x) const {
  const int s = locate(x);
  if (s < 0) return {-1, -1};
  const int K = simplex_cluster[s];
  auto lo = std::lower_bound(overlaps.begin(), overlaps.end(), K,
                             [](const Overlap& o, int k) { return o.K < k; });
  int best = -1;
  double bd = 0.0;
  for (auto it = lo; it != overlaps.end() && it->K == K; ++it) {
    const double d = (dual[it->Ks].center - x).squaredNorm();
    if (best < 0 || d < bd) {
      best = it->Ks;
      bd = d;
    }
  }
  return {K, best};
}

DdfvMesh build_from_simplicial(int dim, const std::vector<Vec3>& points,
                               const std::vector<std::vector<int>>& cells, const MeshOptions& opt) {
  if (dim != 2 && dim != 3) throw MeshError(MeshErrorKind::InvalidInput, "dimension must be 2 or 3");
  if (points.size() < static_cast<std::size_t>(dim + 1) || cells.empty())
    throw MeshError(MeshErrorKind::InvalidInput, "too few points or cells");
  for (const Vec3& p : points)
    if (!p.allFinite() || (dim == 2 && p.z() != 0.0))
      throw MeshError(MeshErrorKind::InvalidInput, "non-finite coordinate or nonzero z in 2D");

  DdfvMesh m;
  m.dim = dim;
  m.points = points;
  m.simplices = cells;
  const int np = static_cast<int>(points.size());
  const int ns = static_cast<int>(cells.size());

  Vec3 lo = points[0], hi = points[0];
  for (const Vec3& p : points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  m.length_scale = (hi - lo).norm();
  const double eps = opt.eps_geo * m.length_scale;
  m.eps_geo = eps;

  // simplex geometry
  std::vector<double> svol(ns);
  m.simplex_center.resize(ns);
  for (int s = 0; s < ns; ++s) {
    auto& c = m.simplices[s];
    if (static_cast<int>(c.size()) != dim + 1)
      throw MeshError(MeshErrorKind::InvalidInput, "cell " + std::to_string(s) + " has wrong arity");
    for (int v : c)
      if (v < 0 || v >= np) throw MeshError(MeshErrorKind::InvalidInput, "cell " + std::to_string(s) + " has bad vertex id");
    auto pts = gather(points, c);
    double sv = dim == 2 ? signed_area(pts[0], pts[1], pts[2]) : signed_volume(pts[0], pts[1], pts[2], pts[3]);
    const double dia = diameter(pts);
    if (std::abs(sv) <= 1e-12 * std::pow(dia, dim))
      throw MeshError(MeshErrorKind::DegenerateCell, "cell " + std::to_string(s) + " has zero measure");
    if (sv < 0) {
      std::swap(c[0], c[1]);
      sv = -sv;
    }
    svol[s] = sv;
    m.simplex_center[s] = circumcenter(gather(points, c));
  }

  auto grid = make_grid(m);
  m.grid = grid;

  // faces
  std::map<Face, std::vector<std::pair<int, int>>> faces;
  for (int s = 0; s < ns; ++s)
    for (int i = 0; i <= dim; ++i) faces[face_key(m.simplices[s], i)].push_back({s, i});
  for (const auto& [f, owners] : faces)
    if (owners.size() > 2) throw MeshError(MeshErrorKind::NonConforming, "face shared by more than two cells");

  // boundary faces form a closed manifold without hanging vertices
  {
    std::map<std::vector<int>, int> ridge_count;
    for (const auto& [f, owners] : faces) {
      if (owners.size() != 1) continue;
      const auto ids = face_ids(f, dim);
      for (int i = 0; i < dim; ++i) {
        std::vector<int> r;
        for (int j = 0; j < dim; ++j)
          if (j != i) r.push_back(ids[j]);
        ridge_count[r]++;
      }
      const auto [s, skip] = owners[0];
      const auto fp = gather(points, ids);
      const Vec3 n = face_normal(fp, points[m.simplices[s][skip]], dim);
      Vec3 c = Vec3::Zero();
      for (const Vec3& p : fp) c += p;
      c /= dim;
      const Vec3 probe = c + 1e-7 * diameter(fp) * n;
      const int hit = m.locate(probe);
      if (hit >= 0 && hit != s)
        throw MeshError(MeshErrorKind::NonConforming, "boundary face inside the domain (hanging vertex)");
    }
    for (const auto& [r, cnt] : ridge_count)
      if (cnt != 2) throw MeshError(MeshErrorKind::NonConforming, "boundary is not a closed manifold");
  }

  // Delaunay: no vertex strictly inside a circumball
  for (int s = 0; s < ns; ++s) {
    const Vec3& c = m.simplex_center[s];
    const double R = (points[m.simplices[s][0]] - c).norm();
    const Vec3 r = Vec3::Constant(R);
    std::set<int> seen;
    bool strict = false;
    int ties = 0;
    grid->visit(c - r, c + r, [&](int b) {
      for (int v : grid->vertex_bins[b]) {
        if (std::find(m.simplices[s].begin(), m.simplices[s].end(), v) != m.simplices[s].end()) continue;
        const double d = (points[v] - c).norm();
        if (d < R - eps) strict = true;
        else if (d <= R + eps) ++ties;
      }
    });
    if (strict && opt.check_delaunay)
      throw MeshError(MeshErrorKind::NonDelaunay, "vertex strictly inside the circumball of cell " + std::to_string(s));
    m.report.cocircular_ties += ties;
  }

  // merge simplices with coincident circumcenters
  UnionFind uf(ns);
  for (const auto& [f, owners] : faces)
    if (owners.size() == 2 && (m.simplex_center[owners[0].first] - m.simplex_center[owners[1].first]).norm() <= eps)
      uf.unite(owners[0].first, owners[1].first);
  std::vector<int> root_to_cluster(ns, -1);
  m.simplex_cluster.resize(ns);
  int ncl = 0;
  for (int s = 0; s < ns; ++s) {
    const int r = uf.find(s);
    if (root_to_cluster[r] < 0) root_to_cluster[r] = ncl++;
    m.simplex_cluster[s] = root_to_cluster[r];
  }
  m.n_primal_interior = ncl;
  m.primal.resize(ncl);
  for (int k = 0; k < ncl; ++k) {
    m.primal[k].id = k;
    m.primal[k].center = Vec3::Zero();
  }
  for (int s = 0; s < ns; ++s) {
    auto& K = m.primal[m.simplex_cluster[s]];
    K.simplices.push_back(s);
    K.measure += svol[s];
    K.center += m.simplex_center[s];
    for (int v : m.simplices[s]) K.vertices.push_back(v);
  }
  for (auto& K : m.primal) {
    K.center /= static_cast<double>(K.simplices.size());
    std::sort(K.vertices.begin(), K.vertices.end());
    K.vertices.erase(std::unique(K.vertices.begin(), K.vertices.end()), K.vertices.end());
    K.diameter = diameter(gather(points, K.vertices));
    if (K.simplices.size() > 1) {
      ++m.report.merged_clusters;
    } else {
      const auto b = barycentric(gather(points, m.simplices[K.simplices[0]]), K.center, dim);
      if (b.minCoeff() < -1e-12) ++m.report.circumcenters_outside_cell;
    }
    m.domain_measure += K.measure;
  }

  // vertex adjacency and boundary flags
  m.vertex_neighbors.assign(np, {});
  std::vector<char> used(np, 0), on_boundary(np, 0);
  for (const auto& c : m.simplices)
    for (int a : c) {
      used[a] = 1;
      for (int b : c)
        if (a != b) m.vertex_neighbors[a].push_back(b);
    }
  for (auto& nb : m.vertex_neighbors) {
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }
  for (const auto& [f, owners] : faces)
    if (owners.size() == 1)
      for (int v : face_ids(f, dim)) on_boundary[v] = 1;
  for (int v = 0; v < np; ++v)
    if (!used[v]) throw MeshError(MeshErrorKind::InvalidInput, "vertex " + std::to_string(v) + " is not used by any cell");

  // dual numbering: interior vertices first
  m.vertex_to_dual.assign(np, -1);
  for (int pass = 0; pass < 2; ++pass)
    for (int v = 0; v < np; ++v)
      if (on_boundary[v] == pass) {
        DualVolume d;
        d.id = static_cast<int>(m.dual.size());
        d.vertex = v;
        d.center = points[v];
        d.is_boundary = pass == 1;
        m.vertex_to_dual[v] = d.id;
        m.dual.push_back(d);
      }
  m.n_dual_interior = 0;
  for (const auto& d : m.dual) m.n_dual_interior += d.is_boundary ? 0 : 1;

  // interfaces, boundary volumes, diamonds, subdiamonds
  const double len_tol = 1e-8 * m.length_scale;
  for (const auto& [f, owners] : faces) {
    int K, L;
    int sK, skip;
    if (owners.size() == 2) {
      const int ca = m.simplex_cluster[owners[0].first];
      const int cb = m.simplex_cluster[owners[1].first];
      if (ca == cb) continue;
      K = std::min(ca, cb);
      L = std::max(ca, cb);
      const auto& own = (ca == K) ? owners[0] : owners[1];
      sK = own.first;
      skip = own.second;
    } else {
      K = m.simplex_cluster[owners[0].first];
      sK = owners[0].first;
      skip = owners[0].second;
      PrimalVolume b;
      b.id = static_cast<int>(m.primal.size());
      b.is_boundary = true;
      b.vertices = face_ids(f, dim);
      const auto fp = gather(points, b.vertices);
      b.center = circumcenter(fp);
      b.measure = simplex_measure(fp);
      b.diameter = diameter(fp);
      L = b.id;
      m.primal.push_back(b);
    }
    Interface itf;
    itf.K = K;
    itf.L = L;
    const auto ids = face_ids(f, dim);
    itf.face = gather(points, ids);
    itf.measure = simplex_measure(itf.face);
    itf.face_center = circumcenter(itf.face);
    itf.normal = face_normal(itf.face, points[m.simplices[sK][skip]], dim);
    for (int v : ids) itf.duals.push_back(m.vertex_to_dual[v]);
    const Vec3 xK = m.primal[K].center;
    const Vec3 xL = m.primal[L].center;
    itf.dist = itf.normal.dot(xL - xK);
    const bool bnd = m.primal[L].is_boundary;
    if (itf.dist < -eps)
      throw MeshError(bnd ? MeshErrorKind::FaceCircumcenterOutside : MeshErrorKind::NegativeSubdiamond,
                      bnd ? "circumcenter of a boundary cell lies outside the domain"
                          : "centers of neighbouring cells are in reverse order across their interface");
    if (itf.dist <= eps)
      throw MeshError(MeshErrorKind::DegenerateCell,
                      bnd ? "circumcenter of a boundary cell lies on the boundary (zero-measure diamond)"
                          : "zero-measure diamond");
    if ((xL - xK - itf.dist * itf.normal).norm() > len_tol)
      throw MeshError(MeshErrorKind::NonConforming, "segment between centers is not orthogonal to the interface");

    const int iid = static_cast<int>(m.interfaces.size());
    Diamond D;
    D.id = iid;
    D.K = K;
    D.L = L;
    D.duals = itf.duals;
    std::vector<Vec3> dpts = itf.face;
    dpts.push_back(xK);
    dpts.push_back(xL);
    D.diameter = diameter(dpts);

    std::vector<std::pair<int, int>> edges;
    if (dim == 2) edges = {{0, 1}};
    else edges = {{0, 1}, {1, 2}, {0, 2}};
    for (auto [a, b] : edges) {
      Subdiamond S;
      S.diamond = iid;
      int va = ids[a], vb = ids[b];
      int third = dim == 3 ? ids[3 - a - b] : -1;
      if (m.vertex_to_dual[va] > m.vertex_to_dual[vb]) std::swap(va, vb);
      S.Ks = m.vertex_to_dual[va];
      S.Ls = m.vertex_to_dual[vb];
      const Vec3 pa = points[va], pb = points[vb];
      S.dist_star = (pb - pa).norm();
      S.nu_star = (pb - pa) / S.dist_star;
      S.edge_mid = 0.5 * (pa + pb);
      if (dim == 2) {
        S.sigma = itf.measure;
        S.sigma_star = itf.dist;
        S.measure = 0.5 * itf.measure * itf.dist;
      } else {
        const Vec3& p = itf.face_center;
        const Vec3& pc = points[third];
        const double s1 = (pa - p).cross(pb - p).dot(itf.normal);
        const double s2 = (pa - pc).cross(pb - pc).dot(itf.normal);
        double sig = 0.5 * (s2 >= 0 ? s1 : -s1);
        if (sig < -eps * m.length_scale) {
          m.report.face_condition = false;
          throw MeshError(MeshErrorKind::FaceCircumcenterOutside,
                          "face circumcenter outside its face at interface " + std::to_string(iid));
        }
        sig = std::max(0.0, sig);
        S.sigma = sig;
        S.sigma_star = 0.5 * (xL - xK).cross(S.edge_mid - xK).norm();
        S.measure = sig * itf.dist / 3.0;
        if (std::abs(S.measure - S.sigma_star * S.dist_star / 3.0) > 1e-8 * std::pow(m.length_scale, 3))
          throw MeshError(MeshErrorKind::NonConforming, "subdiamond measures disagree");
      }
      D.measure += S.measure;
      D.subdiamonds.push_back(static_cast<int>(m.subdiamonds.size()));
      m.subdiamonds.push_back(S);
    }
    m.interfaces.push_back(itf);
    m.diamonds.push_back(D);
    m.primal[K].interfaces.push_back(iid);
    m.primal[L].interfaces.push_back(iid);
    m.primal[K].neighbors.push_back(L);
    m.primal[L].neighbors.push_back(K);
  }

  // dual cells from half-subdiamond pieces; dual interfaces
  std::map<std::pair<int, int>, int> dual_itf;
  for (int si = 0; si < static_cast<int>(m.subdiamonds.size()); ++si) {
    const Subdiamond& S = m.subdiamonds[si];
    const Diamond& D = m.diamonds[S.diamond];
    const Vec3 xK = m.primal[D.K].center, xL = m.primal[D.L].center;
    for (int side = 0; side < 2; ++side) {
      DualVolume& v = m.dual[side == 0 ? S.Ks : S.Ls];
      v.subdiamonds.push_back({si, side == 0 ? 1.0 : -1.0});
      if (S.measure > 0.0) {
        DualPiece piece;
        piece.pts = {v.center, xK, xL, S.edge_mid};
        piece.measure = 0.5 * S.measure;
        v.pieces.push_back(piece);
        v.measure += piece.measure;
      }
    }
    if (S.sigma_star > 0.0) {
      auto key = std::make_pair(S.Ks, S.Ls);
      auto it = dual_itf.find(key);
      if (it == dual_itf.end()) {
        DualInterface di;
        di.Ks = S.Ks;
        di.Ls = S.Ls;
        di.normal = S.nu_star;
        di.dist = S.dist_star;
        it = dual_itf.emplace(key, static_cast<int>(m.dual_interfaces.size())).first;
        m.dual_interfaces.push_back(di);
      }
      m.dual_interfaces[it->second].measure += S.sigma_star;
      m.dual_interfaces[it->second].subdiamonds.push_back(si);
    }
  }
  for (int i = 0; i < static_cast<int>(m.dual_interfaces.size()); ++i) {
    const auto& di = m.dual_interfaces[i];
    m.dual[di.Ks].interfaces.push_back(i);
    m.dual[di.Ls].interfaces.push_back(i);
    m.dual[di.Ks].neighbors.push_back(di.Ls);
    m.dual[di.Ls].neighbors.push_back(di.Ks);
  }
  double dual_sum = 0.0, diamond_sum = 0.0;
  for (auto& v : m.dual) {
    if (v.measure <= 0.0) throw MeshError(MeshErrorKind::DegenerateCell, "dual cell of vertex " + std::to_string(v.vertex) + " is empty");
    std::vector<Vec3> pts;
    for (const auto& pc : v.pieces)
      for (int i = 0; i <= dim; ++i) pts.push_back(pc.pts[i]);
    v.diameter = diameter(pts);
    dual_sum += v.measure;
  }
  for (const auto& D : m.diamonds) diamond_sum += D.measure;
  const double perr = std::max(std::abs(dual_sum - m.domain_measure), std::abs(diamond_sum - m.domain_measure));
  if (perr > 1e-9 * m.domain_measure)
    throw MeshError(MeshErrorKind::PartitionMismatch, "dual cells or diamonds do not tile the domain");

  m.overlaps = overlap_measures(m);
  std::vector<double> sumK(m.n_primal_interior, 0.0), sumKs(m.n_dual(), 0.0);
  for (const auto& o : m.overlaps) {
    sumK[o.K] += o.measure;
    sumKs[o.Ks] += o.measure;
  }
  double maxerr = perr;
  for (int k = 0; k < m.n_primal_interior; ++k) maxerr = std::max(maxerr, std::abs(sumK[k] - m.primal[k].measure));
  for (int k = 0; k < m.n_dual(); ++k) maxerr = std::max(maxerr, std::abs(sumKs[k] - m.dual[k].measure));
  m.report.max_partition_error = maxerr;
  if (maxerr > 1e-9 * m.domain_measure)
    throw MeshError(MeshErrorKind::PartitionMismatch, "primal/dual overlaps do not partition the cells (non-convex Voronoi cell?)");

  m.size = mesh_size(m);
  m.reg = regularity_constant(m);
  return m;
}

std::vector<Overlap> overlap_measures(const DdfvMesh& m) {
  const int dim = m.dim;
  // bounding boxes of dual cells
  std::vector<Vec3> blo(m.n_dual()), bhi(m.n_dual());
  double rmax = 0.0;
  for (const auto& v : m.dual) {
    blo[v.id] = v.center;
    bhi[v.id] = v.center;
    for (const auto& pc : v.pieces)
      for (int i = 0; i <= dim; ++i) {
        blo[v.id] = blo[v.id].cwiseMin(pc.pts[i]);
        bhi[v.id] = bhi[v.id].cwiseMax(pc.pts[i]);
        rmax = std::max(rmax, (pc.pts[i] - v.center).norm());
      }
  }
  std::map<std::pair<int, int>, double> acc;
  const double slack = 1e-12 * m.length_scale;
  for (int s = 0; s < static_cast<int>(m.simplices.size()); ++s) {
    const auto pts = gather(m.points, m.simplices[s]);
    Vec3 lo = pts[0], hi = pts[0];
    for (const Vec3& p : pts) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
    const Vec3 r = Vec3::Constant(rmax);
    std::vector<int> cand;
    m.grid->visit(lo - r, hi + r, [&](int b) {
      for (int vtx : m.grid->vertex_bins[b]) {
        const int ks = m.vertex_to_dual[vtx];
        if ((blo[ks].array() <= hi.array() + slack).all() && (bhi[ks].array() >= lo.array() - slack).all())
          cand.push_back(vtx);
      }
    });
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    const int K = m.simplex_cluster[s];
    for (int vtx : cand) {
      std::vector<HalfSpace> cuts;
      for (int w : m.vertex_neighbors[vtx]) cuts.push_back(bisector(m.points[vtx], m.points[w]));
      const double meas = dim == 2 ? clipped_triangle_area(pts, cuts) : clipped_tetra_volume(pts, cuts);
      if (meas > 0.0) acc[{K, m.vertex_to_dual[vtx]}] += meas;
    }
  }
  std::vector<Overlap> out;
  out.reserve(acc.size());
  for (const auto& [key, v] : acc) out.push_back({key.first, key.second, v});
  return out;
}

double mesh_size(const DdfvMesh& m) {
  double s = 0.0;
  for (const auto& K : m.primal) s = std::max(s, K.diameter);
  for (const auto& v : m.dual) s = std::max(s, v.diameter);
  for (const auto& D : m.diamonds) s = std::max(s, D.diameter);
  return s;
}

double regularity_constant(const DdfvMesh& m) {
  double r = 0.0;
  for (const auto& v : m.dual) {
    std::vector<int> nb = v.neighbors;
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    r = std::max(r, static_cast<double>(nb.size()));
    r = std::max(r, std::pow(v.diameter, m.dim) / v.measure);
  }
  for (int k = 0; k < m.n_primal_interior; ++k)
    r = std::max(r, std::pow(m.primal[k].diameter, m.dim) / m.primal[k].measure);
  for (const auto& D : m.diamonds) {
    for (int k : {D.K, D.L}) {
      const double a = m.primal[k].diameter / D.diameter;
      r = std::max(r, a + 1.0 / a);
    }
    for (int ks : D.duals) {
      const double a = m.dual[ks].diameter / D.diameter;
      r = std::max(r, a + 1.0 / a);
    }
  }
  return r;
}

DdfvMesh build_structured_2d(int nx, int ny, std::array<double, 4> rect, Pattern2d pattern, const MeshOptions& opt) {
  if (nx < 2 || ny < 2) throw MeshError(MeshErrorKind::InvalidInput, "structured 2D mesh needs nx, ny >= 2");
  std::vector<Vec3> pts;
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      pts.emplace_back(rect[0] + (rect[1] - rect[0]) * i / nx, rect[2] + (rect[3] - rect[2]) * j / ny, 0.0);
  auto id = [&](int i, int j) { return j * (nx + 1) + i; };
  std::vector<std::vector<int>> cells;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
      const bool main = pattern == Pattern2d::Uniform || (i + j) % 2 == 0;
      if (main) {
        cells.push_back({a, b, c});
        cells.push_back({a, c, d});
      } else {
        cells.push_back({a, b, d});
        cells.push_back({b, c, d});
      }
    }
  return build_from_simplicial(2, pts, cells, opt);
}

DdfvMesh build_structured_3d(int nx, int ny, int nz, std::array<double, 6> box, const MeshOptions& opt) {
  if (nx < 2 || ny < 2 || nz < 2) throw MeshError(MeshErrorKind::InvalidInput, "structured 3D mesh needs nx, ny, nz >= 2");
  std::vector<Vec3> pts;
  for (int k = 0; k <= nz; ++k)
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i <= nx; ++i)
        pts.emplace_back(box[0] + (box[1] - box[0]) * i / nx, box[2] + (box[3] - box[2]) * j / ny,
                         box[4] + (box[5] - box[4]) * k / nz);
  auto id = [&](int i, int j, int k) { return (k * (ny + 1) + j) * (nx + 1) + i; };
  std::vector<std::vector<int>> cells;
  std::array<int, 3> perm{0, 1, 2};
  std::vector<std::array<int, 3>> perms;
  do perms.push_back(perm);
  while (std::next_permutation(perm.begin(), perm.end()));
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i)
        for (const auto& p : perms) {
          std::array<int, 3> c{i, j, k};
          std::vector<int> tet{id(c[0], c[1], c[2])};
          for (int a : p) {
            c[a] += 1;
            tet.push_back(id(c[0], c[1], c[2]));
          }
          cells.push_back(tet);
        }
  return build_from_simplicial(3, pts, cells, opt);
}

std::string mesh_report(const DdfvMesh& m) {
  std::ostringstream os;
  os.precision(12);
  int nbp = m.n_primal() - m.n_primal_interior;
  os << "dimension: " << m.dim << "\n"
     << "points: " << m.points.size() << "\n"
     << "simplices: " << m.simplices.size() << "\n"
     << "primal_volumes: " << m.n_primal_interior << "\n"
     << "boundary_primal_volumes: " << nbp << "\n"
     << "dual_volumes: " << m.n_dual_interior << "\n"
     << "boundary_dual_volumes: " << m.n_dual() - m.n_dual_interior << "\n"
     << "diamonds: " << m.diamonds.size() << "\n"
     << "subdiamonds: " << m.subdiamonds.size() << "\n"
     << "dual_interfaces: " << m.dual_interfaces.size() << "\n"
     << "domain_measure: " << m.domain_measure << "\n"
     << "size: " << m.size << "\n"
     << "reg: " << m.reg << "\n"
     << "delaunay: pass (cocircular ties " << m.report.cocircular_ties << ")\n"
     << "merged_clusters: " << m.report.merged_clusters << "\n"
     << "circumcenters_outside_cell: " << m.report.circumcenters_outside_cell << "\n";
  if (m.dim == 3) os << "face_circumcenter_condition: " << (m.report.face_condition ? "pass" : "fail") << "\n";
  os << "max_partition_error: " << m.report.max_partition_error << "\n";
  for (const auto& w : m.report.warnings) os << "warning: " << w << "\n";
  return os.str();
}

}  // namespace ddfv
