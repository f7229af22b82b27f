#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>

#include "gpwtdg/harness.hpp"

namespace {

constexpr int kExitSolverFailure = 2;
constexpr int kExitConfigError = 3;

void print_study(const gpwtdg::RunConfig& config, const gpwtdg::ConvergenceStudy& study) {
  std::printf("# %s\n", config.label.c_str());
  std::printf("%5s %12s %8s %10s %12s %12s %10s\n", "level", "h", "ndof", "C/h", "rel_l2",
              "dg_err", "cond");
  for (const auto& r : study.records)
    std::printf("%5d %12.5e %8d %10.2f %12.5e %12.5e %10.2e\n", r.level, r.h, r.ndof, r.c_over_h,
                r.rel_l2, r.dg_error, r.condition);
  for (const auto& [level, why] : study.skipped_levels)
    std::printf("level %d skipped: %s\n", level, why.c_str());
  if (std::isnan(study.fitted_rate))
    std::printf("fitted rate: n/a (too few usable levels)\n");
  else
    std::printf("fitted rate: %.3f\n", study.fitted_rate);
  if (study.solver_failed) std::printf("solver failed: %s\n", study.failure.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trefftz DG solver for variable-coefficient Helmholtz problems"};
  app.require_subcommand(1);

  gpwtdg::RunConfig config;
  std::string problem = "airy";
  std::string boundary = "robin";
  std::string out_dir = "out";

  CLI::App* solve = app.add_subcommand("solve", "run one convergence study");
  solve->add_option("--problem", problem, "airy|weber|constant")
      ->check(CLI::IsMember({"airy", "weber", "constant"}));
  solve->add_option("--kappa", config.kappa, "wavenumber");
  solve->add_option("--n", config.n, "directions parameter, p = 2n+1");
  solve->add_option("--q", config.q, "order of approximation of the equation");
  solve->add_option("--gamma0", config.gamma0, "stabilization constant");
  solve->add_option("--gamma-exp", config.gamma_exponent, "exponent r in gamma = gamma0 h_K^r");
  solve->add_option("--levels", config.levels, "refinement levels");
  solve->add_option("--quad-order", config.quad_order,
                    "edge quadrature points (triangle degree scales with it)");
  solve->add_option("--mesh", config.mesh_file, "initial mesh file (plain text)");
  solve->add_option("--cells", config.initial_cells, "initial structured mesh cells per side");
  solve->add_option("--boundary", boundary, "robin|dirichlet")
      ->check(CLI::IsMember({"robin", "dirichlet"}));
  solve->add_option("--weber-a", config.weber_a, "parameter a of the Weber problem");
  solve->add_option("--theta", config.theta, "plane-wave direction (constant problem)");
  solve->add_option("--out", out_dir, "output directory");

  std::string preset_name;
  CLI::App* sweep = app.add_subcommand("sweep", "run a named experiment preset");
  sweep->add_option("--preset", preset_name, "airy-gh3|airy-gh1|airy-g0|weber-gh3|airy-small")
      ->required();
  sweep->add_option("--out", out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    std::vector<std::pair<gpwtdg::RunConfig, gpwtdg::ConvergenceStudy>> results;
    std::string name;

    if (solve->parsed()) {
      if (problem == "airy") config.problem = gpwtdg::ProblemKind::Airy;
      if (problem == "weber") config.problem = gpwtdg::ProblemKind::Weber;
      if (problem == "constant") config.problem = gpwtdg::ProblemKind::Constant;
      config.boundary = boundary == "dirichlet" ? gpwtdg::BoundaryMode::Dirichlet
                                                : gpwtdg::BoundaryMode::Robin;
      config.validate();
      if (config.label.empty()) name = "solve";
      results.emplace_back(config, gpwtdg::run_convergence(config));
    } else {
      name = preset_name;
      for (const auto& c : gpwtdg::preset_sweep(preset_name)) {
        std::fprintf(stderr, "running %s...\n", c.label.c_str());
        results.emplace_back(c, gpwtdg::run_convergence(c));
      }
    }

    for (const auto& [c, study] : results) print_study(c, study);
    gpwtdg::emit_outputs(results, out_dir, name.empty() ? "solve" : name);

    for (const auto& [c, study] : results)
      if (study.solver_failed) return kExitSolverFailure;
    return 0;
  } catch (const gpwtdg::ConfigError& err) {
    std::cerr << "config error: " << err.what() << '\n';
    return kExitConfigError;
  } catch (const gpwtdg::SolverError& err) {
    std::cerr << "solver error: " << err.what() << '\n';
    return kExitSolverFailure;
  } catch (const std::invalid_argument& err) {
    std::cerr << "config error: " << err.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  }
}
