#include "commands.hpp"

#include "ddfv/solver.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace ddfv;

int main(int argc, char** argv) {
  CLI::App app{"Discrete duality finite volume solver for degenerate convection-diffusion problems"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  cli::Overrides ov;
  std::uint64_t seed = 0;
  int threads = 0;
  app.add_option("--config", config_path, "Configuration file")->check(CLI::ExistingFile);
  auto* seed_opt = app.add_option("--seed", seed, "Seed for the randomized checks");
  auto* threads_opt = app.add_option("--threads", threads, "Worker threads for Jacobian assembly")->check(CLI::PositiveNumber);
  app.add_flag("--exact-reductions", ov.exact_reductions, "Evaluate every reduction sequentially");

  auto* mesh_info = app.add_subcommand("mesh-info", "Mesh counts, size, regularity and validation");
  auto* verify = app.add_subcommand("verify", "Discrete identity suite");
  auto* run = app.add_subcommand("run", "Time integration with solution and diagnostics output");
  auto* conv = app.add_subcommand("convergence", "Refinement ladder with error table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::InputError;
  }
  if (*seed_opt) ov.seed = seed;
  if (*threads_opt) ov.threads = threads;

  try {
    Config cfg = config_path.empty() ? Config::parse("", "<defaults>") : Config::load(config_path);
    cli::apply(cfg, ov);
    if (*mesh_info) return cli::cmd_mesh_info(cfg, std::cout);
    if (*verify) return cli::cmd_verify(cfg, std::cout);
    if (*run) return cli::cmd_run(cfg, std::cout);
    if (*conv) return cli::cmd_convergence(cfg, std::cout);
  } catch (const NonConvergence& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return cli::SolverFailure;
  } catch (const MeshError& e) {
    std::cerr << "mesh error: " << e.what() << '\n';
    return cli::InputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return cli::InputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return cli::InputError;
}
