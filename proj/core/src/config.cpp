#include "ddfv/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace ddfv {

namespace {

const std::map<std::string, std::set<std::string>>& allowed_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"mesh", {"builder", "n", "nx", "ny", "nz", "pattern", "file", "box", "eps_geo", "check_delaunay"}},
      {"problem",
       {"name", "initial", "amplitude", "riemann_left", "riemann_right", "riemann_at", "source", "source_amp",
        "source_until", "direction", "f_linear", "f_quadratic", "A_linear", "A_power", "A_exponent"}},
      {"scheme",
       {"dt", "T", "flux", "penalization", "rho", "tol", "max_newton", "max_halvings", "armijo", "continuation",
        "rho_sequence", "picard", "picard_relaxation", "max_picard", "delta", "quad_degree", "time_points",
        "threads"}},
      {"verify",
       {"seed", "duality_pairs", "reconstruction_vectors", "triangles", "dissipation_samples", "convection_samples",
        "evolution_samples", "schemes"}},
      {"output", {"dir", "vtk", "csv", "space_time"}},
      {"convergence", {"levels", "dt", "dt_rule", "reference", "oracle_n", "oracle_eps", "norms"}},
  };
  return keys;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_words(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string w;
  while (is >> w) {
    w.erase(std::remove(w.begin(), w.end(), ','), w.end());
    if (!w.empty()) out.push_back(w);
  }
  return out;
}

double to_number(const std::string& s, const std::string& ctx) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(ctx + ": expected a number, got '" + s + "'");
  }
}

}  // namespace

Config Config::parse(const std::string& text, const std::string& origin) {
  Config c;
  c.origin_ = origin;
  std::istringstream is(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string ctx = origin + ":" + std::to_string(lineno);
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(ctx + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!allowed_keys().count(section)) throw ConfigError(ctx + ": unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(ctx + ": expected key = value");
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(ctx + ": empty key");
    if (section.empty()) throw ConfigError(ctx + ": key '" + key + "' outside any section");
    if (!allowed_keys().at(section).count(key))
      throw ConfigError(ctx + ": unknown key '" + key + "' in [" + section + "]");
    const std::string full = section + "." + key;
    if (c.values_.count(full)) throw ConfigError(ctx + ": duplicate key '" + full + "'");
    c.values_[full] = value;
    c.lines_[full] = lineno;
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

std::string Config::where(const std::string& key) const {
  auto it = lines_.find(key);
  if (it == lines_.end()) return origin_ + ": " + key;
  return origin_ + ":" + std::to_string(it->second) + ": " + key;
}

std::string Config::get(const std::string& key, const std::string& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

std::string Config::require(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError(origin_ + ": missing required key '" + key + "'");
  return it->second;
}

double Config::number(const std::string& key, double fallback) const {
  return has(key) ? to_number(values_.at(key), where(key)) : fallback;
}

int Config::integer(const std::string& key, int fallback) const {
  if (!has(key)) return fallback;
  const double v = number(key, 0.0);
  if (v != static_cast<int>(v)) throw ConfigError(where(key) + ": expected an integer");
  return static_cast<int>(v);
}

bool Config::flag(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string v = values_.at(key);
  if (v == "true" || v == "on" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "off" || v == "no" || v == "0") return false;
  throw ConfigError(where(key) + ": expected true or false, got '" + v + "'");
}

std::vector<double> Config::numbers(const std::string& key, const std::vector<double>& fallback) const {
  if (!has(key)) return fallback;
  std::vector<double> out;
  for (const auto& w : split_words(values_.at(key))) out.push_back(to_number(w, where(key)));
  return out;
}

std::vector<std::string> Config::words(const std::string& key, const std::vector<std::string>& fallback) const {
  return has(key) ? split_words(values_.at(key)) : fallback;
}

void Config::set(const std::string& key, const std::string& value) {
  const auto dot = key.find('.');
  if (dot == std::string::npos) throw ConfigError("config key must be section.key: " + key);
  const std::string section = key.substr(0, dot), name = key.substr(dot + 1);
  auto it = allowed_keys().find(section);
  if (it == allowed_keys().end() || !it->second.count(name)) throw ConfigError("unknown config key " + key);
  values_[key] = value;
}

DdfvMesh make_mesh(const Config& cfg) {
  MeshOptions mo;
  mo.eps_geo = cfg.number("mesh.eps_geo", mo.eps_geo);
  mo.check_delaunay = cfg.flag("mesh.check_delaunay", mo.check_delaunay);
  const std::string builder = cfg.get("mesh.builder", "structured2d");
  const int n = cfg.integer("mesh.n", 8);
  if (builder == "structured2d") {
    const auto box = cfg.numbers("mesh.box", {0, 1, 0, 1});
    if (box.size() != 4) throw ConfigError(cfg.origin() + ": mesh.box needs 4 numbers in 2D");
    const std::string pat = cfg.get("mesh.pattern", "unionjack");
    Pattern2d p;
    if (pat == "unionjack")
      p = Pattern2d::UnionJack;
    else if (pat == "uniform")
      p = Pattern2d::Uniform;
    else
      throw ConfigError(cfg.origin() + ": unknown mesh.pattern '" + pat + "'");
    return build_structured_2d(cfg.integer("mesh.nx", n), cfg.integer("mesh.ny", cfg.integer("mesh.nx", n)),
                               {box[0], box[1], box[2], box[3]}, p, mo);
  }
  if (builder == "structured3d") {
    const auto box = cfg.numbers("mesh.box", {0, 1, 0, 1, 0, 1});
    if (box.size() != 6) throw ConfigError(cfg.origin() + ": mesh.box needs 6 numbers in 3D");
    const int nx = cfg.integer("mesh.nx", n);
    return build_structured_3d(nx, cfg.integer("mesh.ny", nx), cfg.integer("mesh.nz", nx),
                               {box[0], box[1], box[2], box[3], box[4], box[5]}, mo);
  }
  if (builder == "file") {
    // relative mesh paths are looked up next to the config file first
    std::filesystem::path file = cfg.require("mesh.file");
    const std::filesystem::path beside = std::filesystem::path(cfg.origin()).parent_path() / file;
    if (file.is_relative() && std::filesystem::exists(beside)) file = beside;
    return read_mesh_file(file.string(), mo);
  }
  throw ConfigError(cfg.origin() + ": unknown mesh.builder '" + builder + "'");
}

namespace {

std::array<double, 6> bounding_box_of(const DdfvMesh& m) {
  std::array<double, 6> box{0, 0, 0, 0, 0, 0};
  for (int i = 0; i < 3; ++i) {
    box[2 * i] = std::numeric_limits<double>::infinity();
    box[2 * i + 1] = -std::numeric_limits<double>::infinity();
  }
  for (const Vec3& p : m.points)
    for (int i = 0; i < 3; ++i) {
      box[2 * i] = std::min(box[2 * i], p[i]);
      box[2 * i + 1] = std::max(box[2 * i + 1], p[i]);
    }
  if (m.dim == 2) {
    box[4] = 0.0;
    box[5] = 1.0;
  }
  return box;
}

}  // namespace

ProblemSpec make_problem(const Config& cfg, const DdfvMesh& mesh) {
  ProblemOptions po;
  po.dim = mesh.dim;
  po.box = bounding_box_of(mesh);
  po.initial = cfg.get("problem.initial", po.initial);
  po.amplitude = cfg.number("problem.amplitude", po.amplitude);
  po.riemann_left = cfg.number("problem.riemann_left", po.riemann_left);
  po.riemann_right = cfg.number("problem.riemann_right", po.riemann_right);
  po.riemann_at = cfg.number("problem.riemann_at", po.riemann_at);
  po.source = cfg.get("problem.source", po.source);
  po.source_amp = cfg.number("problem.source_amp", po.source_amp);
  po.source_until = cfg.number("problem.source_until", po.source_until);
  const auto dir = cfg.numbers("problem.direction", {1, 0, 0});
  if (dir.empty() || dir.size() > 3) throw ConfigError(cfg.origin() + ": problem.direction needs 1 to 3 numbers");
  po.direction = Vec3::Zero();
  for (std::size_t i = 0; i < dir.size(); ++i) po.direction[static_cast<int>(i)] = dir[i];
  if (po.direction.norm() == 0.0) throw ConfigError(cfg.origin() + ": problem.direction must be nonzero");
  po.f_linear = cfg.number("problem.f_linear", po.f_linear);
  po.f_quadratic = cfg.number("problem.f_quadratic", po.f_quadratic);
  po.A_linear = cfg.number("problem.A_linear", po.A_linear);
  po.A_power = cfg.number("problem.A_power", po.A_power);
  po.A_exponent = cfg.number("problem.A_exponent", po.A_exponent);
  try {
    return builtin_problem(cfg.get("problem.name", "heat"), po);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(cfg.origin() + ": " + e.what());
  }
}

SchemeConfig make_scheme(const Config& cfg) {
  SchemeConfig s;
  s.dt = cfg.number("scheme.dt", s.dt);
  s.T = cfg.number("scheme.T", s.T);
  try {
    s.flux = parse_flux_scheme(cfg.get("scheme.flux", to_string(s.flux)));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(cfg.origin() + ": " + e.what());
  }
  s.penalization = cfg.flag("scheme.penalization", s.penalization);
  s.rho = cfg.number("scheme.rho", s.rho);
  s.tol = cfg.number("scheme.tol", s.tol);
  s.max_newton = cfg.integer("scheme.max_newton", s.max_newton);
  s.max_halvings = cfg.integer("scheme.max_halvings", s.max_halvings);
  s.armijo = cfg.number("scheme.armijo", s.armijo);
  s.continuation = cfg.flag("scheme.continuation", s.continuation);
  s.rho_sequence = cfg.numbers("scheme.rho_sequence", s.rho_sequence);
  s.picard = cfg.flag("scheme.picard", s.picard);
  s.picard_relaxation = cfg.number("scheme.picard_relaxation", s.picard_relaxation);
  s.max_picard = cfg.integer("scheme.max_picard", s.max_picard);
  s.delta = cfg.number("scheme.delta", s.delta);
  s.quad_degree = cfg.integer("scheme.quad_degree", s.quad_degree);
  s.time_points = cfg.integer("scheme.time_points", s.time_points);
  s.threads = cfg.integer("scheme.threads", s.threads);
  try {
    validate(s);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(cfg.origin() + ": " + e.what());
  }
  return s;
}

VerifyOptions make_verify_options(const Config& cfg) {
  VerifyOptions v;
  const int seed = cfg.integer("verify.seed", static_cast<int>(v.seed));
  if (seed < 0) throw ConfigError(cfg.origin() + ": verify.seed must be nonnegative");
  v.seed = static_cast<std::uint64_t>(seed);
  v.duality_pairs = cfg.integer("verify.duality_pairs", v.duality_pairs);
  v.reconstruction_vectors = cfg.integer("verify.reconstruction_vectors", v.reconstruction_vectors);
  v.triangles = cfg.integer("verify.triangles", v.triangles);
  v.dissipation_samples = cfg.integer("verify.dissipation_samples", v.dissipation_samples);
  v.convection_samples = cfg.integer("verify.convection_samples", v.convection_samples);
  v.evolution_samples = cfg.integer("verify.evolution_samples", v.evolution_samples);
  if (cfg.has("verify.schemes")) {
    v.schemes.clear();
    for (const auto& w : cfg.words("verify.schemes", {})) {
      try {
        v.schemes.push_back(parse_flux_scheme(w));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(cfg.origin() + ": " + e.what());
      }
    }
  }
  return v;
}

std::string output_dir(const Config& cfg) {
  if (const char* env = std::getenv("OUTPUT_DIR"); env && *env) return env;
  return cfg.get("output.dir", "out");
}

std::vector<LadderLevel> make_ladder(const Config& cfg) {
  const auto levels = cfg.numbers("convergence.levels", {8, 16, 32});
  if (levels.size() < 2) throw ConfigError(cfg.origin() + ": convergence.levels needs at least two entries");
  const double dt0 = cfg.number("convergence.dt", cfg.number("scheme.dt", 0.01));
  const std::string rule = cfg.get("convergence.dt_rule", "linear");
  std::vector<LadderLevel> out;
  for (double l : levels) {
    if (l < 1 || l != static_cast<int>(l)) throw ConfigError(cfg.origin() + ": convergence.levels must be integers");
    const double r = levels.front() / l;
    LadderLevel lv;
    lv.n = static_cast<int>(l);
    if (rule == "linear")
      lv.dt = dt0 * r;
    else if (rule == "quadratic")
      lv.dt = dt0 * r * r;
    else if (rule == "fixed")
      lv.dt = dt0;
    else
      throw ConfigError(cfg.origin() + ": unknown convergence.dt_rule '" + rule + "'");
    out.push_back(lv);
  }
  return out;
}

}  // namespace ddfv
