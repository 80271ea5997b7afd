#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stokesdpg/dpg.hpp"

namespace stokesdpg {

struct RunConfig {
  std::string problem = "smooth";
  int levels = 3;
  SolverMethod method = SolverMethod::direct;
  double gamma = 0.0;
  std::string out_dir;  // empty: no file output
  std::uint64_t seed = 1;
  std::vector<double> flux_sections;
};

struct LevelRecord {
  int level = 0;
  int n_triangles = 0;
  int dofs = 0;
  double eta = 0.0;
  std::optional<double> err_u, err_vel, err_P;
  std::optional<double> eoc_u, eoc_vel, eoc_P, eoc_eta;
};

struct ConvergenceRecord {
  std::vector<LevelRecord> levels;
  std::string csv() const;
};

// Uniform refinement study on the problem's base mesh; level l is the base
// refined l times.  When out_dir is set, writes <problem>.csv and one
// fields_level<l>.vtk per level.  Solver failures abort with the level
// reported in the exception message.
ConvergenceRecord run_convergence(const RunConfig& cfg);

// Flux rows "x,flux,deviation" for the channel problem at the given sections;
// deviation is against the inflow integral 1/6.
std::string run_flux_csv(const RunConfig& cfg);

struct OracleReport {
  struct Item {
    std::string name;
    bool pass = false;
    double defect = 0.0;
    std::string detail;
  };
  std::vector<Item> items;
  bool all_pass() const;
  std::string text() const;
};

// Cross-module identity checks (integration-by-parts sweep, biorthogonality,
// dimension formulas, mixed-form equivalence, Gram SPD).
OracleReport run_oracles(std::uint64_t seed);

// Reference route for the condensed normal equations: dense solve of the
// saddle-point system [G B; B' 0] (eps; x) = (l_eff; 0) with essential data
// lifted into l_eff.  Returns the trial unknown vector.
std::vector<double> saddle_point_solution(const Mesh& m, const TrialDofMap& dofs,
                                          const ProblemSpec& problem,
                                          const DiscreteLoad& load);

// Global trial unknown vector of a solved state (inverse of the scatter).
std::vector<double> gather_unknowns(const Mesh& m, const TrialDofMap& dofs,
                                    const Solution& sol);

}  // namespace stokesdpg
