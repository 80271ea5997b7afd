#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stokesdpg/study.hpp"

namespace {

using stokesdpg::RunConfig;
using stokesdpg::SolverMethod;

void add_common_flags(CLI::App* cmd, RunConfig* cfg, std::string* solver) {
  cmd->add_option("--levels", cfg->levels, "number of uniform refinements")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--solver", *solver, "linear solver: direct | pcg")
      ->check(CLI::IsMember({"direct", "pcg"}));
  cmd->add_option("--gamma", cfg->gamma, "zeroth-order coefficient")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--out", cfg->out_dir, "output directory for CSV/VTK files");
  cmd->add_option("--seed", cfg->seed, "seed for randomized checks");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DPG solver for the 2D Stokes problem in stream-function form"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string solver = "direct";

  CLI::App* conv = app.add_subcommand(
      "convergence", "uniform-refinement study with CSV table and VTK dumps");
  conv->add_option("--problem", cfg.problem,
                   "problem id: smooth | cavity | channel | plate")
      ->check(CLI::IsMember({"smooth", "cavity", "channel", "plate"}));
  add_common_flags(conv, &cfg, &solver);

  CLI::App* flux = app.add_subcommand(
      "flux", "cross-section flux report for the channel problem");
  flux->add_option("--flux", cfg.flux_sections,
                   "comma-separated section positions x1,x2,...")
      ->delimiter(',')
      ->required();
  add_common_flags(flux, &cfg, &solver);

  CLI::App* oracles = app.add_subcommand(
      "oracles", "run cross-module identity checks and report defects");
  oracles->add_option("--seed", cfg.seed, "seed for randomized checks");

  CLI11_PARSE(app, argc, argv);
  cfg.method = solver == "pcg" ? SolverMethod::pcg : SolverMethod::direct;

  try {
    if (conv->parsed()) {
      const auto rec = stokesdpg::run_convergence(cfg);
      std::fputs(rec.csv().c_str(), stdout);
      return 0;
    }
    if (flux->parsed()) {
      cfg.problem = "channel";
      const std::string csv = stokesdpg::run_flux_csv(cfg);
      std::fputs(csv.c_str(), stdout);
      return 0;
    }
    const auto rep = stokesdpg::run_oracles(cfg.seed);
    std::fputs(rep.text().c_str(), stdout);
    return rep.all_pass() ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
