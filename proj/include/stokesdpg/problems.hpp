#pragma once

#include <functional>
#include <optional>
#include <string>

#include "stokesdpg/mesh.hpp"
#include "stokesdpg/tracespace.hpp"

namespace stokesdpg {

enum class LoadMode { zero, vector_rot, scalar_l2 };

struct ExactSolution {
  std::function<double(Vec2)> u;
  std::function<Vec2(Vec2)> grad;
  std::function<SymTensor(Vec2)> hess;  // equals the exact P field
};

struct ProblemSpec {
  std::string name;
  Domain domain = Domain::unit_square;
  double gamma = 0.0;
  LoadMode mode = LoadMode::zero;
  std::function<Vec2(Vec2)> f;    // vector load (vector_rot mode)
  std::function<double(Vec2)> g;  // scalar load (scalar_l2 mode)
  BoundaryData bc;
  std::optional<ExactSolution> exact;
};

// Manufactured Stokes flow, u = sin^2(pi x) sin^2(pi y) on the unit square,
// vector load f = -Delta curl u.
ProblemSpec smooth_problem();

// Lid-driven cavity with regularized lid profile, zero load.
ProblemSpec cavity_problem();

// Backward-facing-step channel with parabolic in/outflow, zero load.
ProblemSpec channel_problem();

// Bi-Laplacian with the L2 load g = Delta^2 u of the smooth stream function.
ProblemSpec plate_problem();

ProblemSpec problem_by_name(const std::string& name);

// Regularized lid profile of the cavity benchmark.
double cavity_lid_profile(double x);

}  // namespace stokesdpg
