#pragma once

#include <ostream>

#include "stokesdpg/dpg.hpp"
#include "stokesdpg/mesh.hpp"

namespace stokesdpg {

// Legacy-VTK ASCII dump with cell data: stream function at the centroid,
// velocity vector, velocity magnitude, and the local error indicator.
void write_vtk_fields(const Mesh& m, const Solution& sol, std::ostream& os,
                      const char* title = "fields");

}  // namespace stokesdpg
