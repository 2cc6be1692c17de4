#pragma once

#include "ddfv/config.hpp"

#include <cstdint>
#include <optional>
#include <ostream>

namespace ddfv::cli {

enum ExitCode : int { Ok = 0, InputError = 2, SolverFailure = 3, VerifyFailure = 4 };

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  bool exact_reductions = false;
};

/// Applies command-line overrides to a parsed config.
void apply(Config& cfg, const Overrides& o);

int cmd_mesh_info(const Config& cfg, std::ostream& out);
int cmd_verify(const Config& cfg, std::ostream& out);
int cmd_run(const Config& cfg, std::ostream& out);
int cmd_convergence(const Config& cfg, std::ostream& out);

}  // namespace ddfv::cli
