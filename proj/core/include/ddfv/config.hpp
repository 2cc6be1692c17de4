#pragma once

#include "ddfv/checks.hpp"
#include "ddfv/mesh.hpp"
#include "ddfv/physics.hpp"
#include "ddfv/solver.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ddfv {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Flat key/value document with [section] headers.
///
///   # comment
///   [mesh]
///   builder = structured2d
///   n = 16
///
/// Keys are addressed as "section.key"; keys before the first header live in section "".
/// Unknown sections or keys are rejected with file and line context.
class Config {
 public:
  static Config parse(const std::string& text, const std::string& origin = "<string>");
  static Config load(const std::string& path);

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  std::string get(const std::string& key, const std::string& fallback) const;
  std::string require(const std::string& key) const;
  double number(const std::string& key, double fallback) const;
  int integer(const std::string& key, int fallback) const;
  bool flag(const std::string& key, bool fallback) const;
  std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback) const;
  std::vector<std::string> words(const std::string& key, const std::vector<std::string>& fallback) const;

  void set(const std::string& key, const std::string& value);
  const std::map<std::string, std::string>& values() const { return values_; }
  const std::string& origin() const { return origin_; }

 private:
  std::string where(const std::string& key) const;

  std::map<std::string, std::string> values_;
  std::map<std::string, int> lines_;
  std::string origin_;
};

DdfvMesh make_mesh(const Config& cfg);
/// Problem from the [problem] section; dimension and box follow the mesh.
ProblemSpec make_problem(const Config& cfg, const DdfvMesh& mesh);
SchemeConfig make_scheme(const Config& cfg);
VerifyOptions make_verify_options(const Config& cfg);
/// [output] dir, overridden by the OUTPUT_DIR environment variable.
std::string output_dir(const Config& cfg);

/// Refinement ladder from [convergence]; mesh.n (or nx) is replaced per level.
struct LadderLevel {
  int n = 0;
  double dt = 0.0;
};
std::vector<LadderLevel> make_ladder(const Config& cfg);

}  // namespace ddfv
