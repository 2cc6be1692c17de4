#include "ddfv/mesh.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>

namespace ddfv {

namespace {

struct LineReader {
  std::istringstream in;
  std::string origin;
  int line_no = 0;

  bool next(std::istringstream& ls) {
    std::string line;
    while (std::getline(in, line)) {
      ++line_no;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      ls.clear();
      ls.str(line);
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw MeshError(MeshErrorKind::InvalidInput, origin + ":" + std::to_string(line_no) + ": " + msg);
  }
};

}  // namespace

SimplicialData parse_mesh_text(const std::string& text, const std::string& origin) {
  LineReader r{std::istringstream(text), origin, 0};
  std::istringstream ls;
  SimplicialData out;
  int np = 0, nc = 0;
  if (!r.next(ls) || !(ls >> out.dim >> np >> nc)) r.fail("expected header 'd npoints ncells'");
  if (out.dim != 2 && out.dim != 3) r.fail("dimension must be 2 or 3");
  if (np <= 0 || nc <= 0) r.fail("counts must be positive");
  std::unordered_map<long, int> index;
  for (int i = 0; i < np; ++i) {
    if (!r.next(ls)) r.fail("unexpected end of file in point section");
    long id;
    Vec3 p = Vec3::Zero();
    if (!(ls >> id >> p.x() >> p.y())) r.fail("bad point line");
    if (out.dim == 3 && !(ls >> p.z())) r.fail("missing z coordinate");
    if (!index.emplace(id, i).second) r.fail("duplicate point id " + std::to_string(id));
    out.points.push_back(p);
  }
  for (int c = 0; c < nc; ++c) {
    if (!r.next(ls)) r.fail("unexpected end of file in cell section");
    long id;
    if (!(ls >> id)) r.fail("bad cell line");
    std::vector<int> cell;
    for (int k = 0; k <= out.dim; ++k) {
      long v;
      if (!(ls >> v)) r.fail("cell needs " + std::to_string(out.dim + 1) + " vertices");
      auto it = index.find(v);
      if (it == index.end()) r.fail("unknown vertex id " + std::to_string(v));
      cell.push_back(it->second);
    }
    out.cells.push_back(cell);
  }
  // an optional trailing boundary-mark section is accepted and ignored: the
  // boundary is recovered from the cell connectivity
  return out;
}

DdfvMesh read_mesh_file(const std::string& path, const MeshOptions& opt) {
  std::ifstream f(path);
  if (!f) throw MeshError(MeshErrorKind::InvalidInput, "cannot open mesh file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  const auto data = parse_mesh_text(ss.str(), path);
  try {
    return build_from_simplicial(data.dim, data.points, data.cells, opt);
  } catch (const MeshError& e) {
    throw MeshError(e.kind(), path + ": " + std::string(e.what()).substr(std::string(to_string(e.kind())).size() + 2));
  }
}

void write_mesh_file(const std::string& path, const SimplicialData& data) {
  std::ofstream f(path);
  if (!f) throw MeshError(MeshErrorKind::InvalidInput, "cannot write mesh file " + path);
  f.precision(17);
  f << data.dim << " " << data.points.size() << " " << data.cells.size() << "\n";
  for (std::size_t i = 0; i < data.points.size(); ++i) {
    f << i << " " << data.points[i].x() << " " << data.points[i].y();
    if (data.dim == 3) f << " " << data.points[i].z();
    f << "\n";
  }
  for (std::size_t c = 0; c < data.cells.size(); ++c) {
    f << c;
    for (int v : data.cells[c]) f << " " << v;
    f << "\n";
  }
}

}  // namespace ddfv
