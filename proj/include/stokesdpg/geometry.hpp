#pragma once

#include <array>
#include <cmath>

namespace stokesdpg {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::sqrt(dot(a, a)); }

// Rotation v -> (v2, -v1); maps a CCW edge tangent to the outward normal.
inline Vec2 perp(Vec2 a) { return {a.y, -a.x}; }

using Triangle = std::array<Vec2, 3>;

inline double signed_area(const Triangle& t) {
  return 0.5 * cross(t[1] - t[0], t[2] - t[0]);
}

// Symmetric 2x2 tensor, components (t11, t22, t12).
struct SymTensor {
  double t11 = 0.0;
  double t22 = 0.0;
  double t12 = 0.0;
};

inline Vec2 apply(const SymTensor& m, Vec2 v) {
  return {m.t11 * v.x + m.t12 * v.y, m.t12 * v.x + m.t22 * v.y};
}

// Frobenius product; the off-diagonal component counts twice.
inline double frobenius(const SymTensor& a, const SymTensor& b) {
  return a.t11 * b.t11 + a.t22 * b.t22 + 2.0 * a.t12 * b.t12;
}

// Unit symmetric tensors in the fixed component order (e11, e22, e12).
inline constexpr int kNumSymUnits = 3;
inline SymTensor sym_unit(int alpha) {
  switch (alpha) {
    case 0: return {1.0, 0.0, 0.0};
    case 1: return {0.0, 1.0, 0.0};
    default: return {0.0, 0.0, 1.0};
  }
}

}  // namespace stokesdpg
