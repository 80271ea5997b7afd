#include "stokesdpg/problems.hpp"

#include <cmath>

#include "stokesdpg/errors.hpp"

namespace stokesdpg {

namespace {

constexpr double kPi = 3.14159265358979323846;

// u = sin^2(pi x) sin^2(pi y) = (1 - cos 2pi x)(1 - cos 2pi y)/4 and its
// derivatives in closed form.
double smooth_u(Vec2 p) {
  const double sx = std::sin(kPi * p.x), sy = std::sin(kPi * p.y);
  return sx * sx * sy * sy;
}

Vec2 smooth_grad(Vec2 p) {
  const double a = std::cos(2.0 * kPi * p.x), b = std::cos(2.0 * kPi * p.y);
  const double s2x = std::sin(2.0 * kPi * p.x), s2y = std::sin(2.0 * kPi * p.y);
  return {0.5 * kPi * s2x * (1.0 - b), 0.5 * kPi * s2y * (1.0 - a)};
}

SymTensor smooth_hess(Vec2 p) {
  const double a = std::cos(2.0 * kPi * p.x), b = std::cos(2.0 * kPi * p.y);
  const double s2x = std::sin(2.0 * kPi * p.x), s2y = std::sin(2.0 * kPi * p.y);
  return {kPi * kPi * a * (1.0 - b), kPi * kPi * b * (1.0 - a),
          kPi * kPi * s2x * s2y};
}

// f = -Delta curl u, so that curl u solves the Stokes system with p = 0.
Vec2 smooth_f(Vec2 p) {
  const double a = std::cos(2.0 * kPi * p.x), b = std::cos(2.0 * kPi * p.y);
  const double s2x = std::sin(2.0 * kPi * p.x), s2y = std::sin(2.0 * kPi * p.y);
  const double pi3 = kPi * kPi * kPi;
  const double lap_uy = 2.0 * pi3 * s2y * (2.0 * a - 1.0);
  const double lap_ux = 2.0 * pi3 * s2x * (2.0 * b - 1.0);
  return {-lap_uy, lap_ux};
}

// Delta^2 u = rot f.
double smooth_bilap(Vec2 p) {
  const double a = std::cos(2.0 * kPi * p.x), b = std::cos(2.0 * kPi * p.y);
  const double pi4 = kPi * kPi * kPi * kPi;
  return 4.0 * pi4 * (4.0 * a * b - a - b);
}

ExactSolution smooth_exact() {
  return {smooth_u, smooth_grad, smooth_hess};
}

BoundaryData homogeneous_bc() {
  return {[](Vec2) { return 0.0; }, [](Vec2, Vec2) { return Vec2{0.0, 0.0}; }};
}

}  // namespace

double cavity_lid_profile(double x) {
  if (x <= 0.1) {
    const double c = std::cos((0.1 - x) / 0.1 * kPi);
    const double w = 1.0 - c;
    return 1.0 - 0.25 * w * w;
  }
  if (x >= 0.9) {
    const double c = std::cos((x - 0.9) / 0.1 * kPi);
    const double w = 1.0 - c;
    return 1.0 - 0.25 * w * w;
  }
  return 1.0;
}

ProblemSpec smooth_problem() {
  ProblemSpec s;
  s.name = "smooth";
  s.domain = Domain::unit_square;
  s.mode = LoadMode::vector_rot;
  s.f = smooth_f;
  s.bc = homogeneous_bc();
  s.exact = smooth_exact();
  return s;
}

ProblemSpec plate_problem() {
  ProblemSpec s;
  s.name = "plate";
  s.domain = Domain::unit_square;
  s.mode = LoadMode::scalar_l2;
  s.g = smooth_bilap;
  s.bc = homogeneous_bc();
  s.exact = smooth_exact();
  return s;
}

ProblemSpec cavity_problem() {
  ProblemSpec s;
  s.name = "cavity";
  s.domain = Domain::unit_square;
  s.mode = LoadMode::zero;
  s.bc.value = [](Vec2) { return 0.0; };
  s.bc.gradient = [](Vec2 p, Vec2 edge_mid) {
    if (edge_mid.y > 1.0 - 1e-9) return Vec2{0.0, cavity_lid_profile(p.x)};
    return Vec2{0.0, 0.0};
  };
  return s;
}

ProblemSpec channel_problem() {
  ProblemSpec s;
  s.name = "channel";
  s.domain = Domain::channel_step;
  s.mode = LoadMode::zero;
  s.bc.value = [](Vec2 p) {
    const double y = p.y;
    if (p.x < 1e-9) return -(2.0 * y + 1.0) * (y - 1.0) * (y - 1.0) / 6.0;
    if (p.x > 10.0 - 1e-9) return -(y - 1.0) * (y - 1.0) * (y + 2.0) / 24.0;
    if (y > 1.0 - 1e-9) return 0.0;
    return -1.0 / 6.0;
  };
  s.bc.gradient = [](Vec2 p, Vec2 edge_mid) {
    const double y = p.y;
    if (edge_mid.x < 1e-9) return Vec2{0.0, y * (1.0 - y)};
    if (edge_mid.x > 10.0 - 1e-9) return Vec2{0.0, (1.0 - y) * (1.0 + y) / 8.0};
    return Vec2{0.0, 0.0};
  };
  return s;
}

ProblemSpec problem_by_name(const std::string& name) {
  if (name == "smooth") return smooth_problem();
  if (name == "cavity") return cavity_problem();
  if (name == "channel") return channel_problem();
  if (name == "plate") return plate_problem();
  throw std::invalid_argument("unknown problem id: " + name);
}

}  // namespace stokesdpg
