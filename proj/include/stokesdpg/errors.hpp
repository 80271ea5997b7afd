#pragma once

#include <stdexcept>
#include <string>

namespace stokesdpg {

struct TopologyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnsupportedDegreeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Raised when a matrix expected to be SPD fails to factorize.
struct SpdError : std::runtime_error {
  explicit SpdError(const std::string& what, int pivot_index = -1)
      : std::runtime_error(what), pivot(pivot_index) {}
  int pivot;
};

struct SolveError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DataCompatibilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace stokesdpg
