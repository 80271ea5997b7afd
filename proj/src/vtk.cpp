#include "stokesdpg/vtk.hpp"

#include <cmath>
#include <cstdio>

namespace stokesdpg {

void write_vtk_fields(const Mesh& m, const Solution& sol, std::ostream& os,
                      const char* title) {
  write_vtk_mesh(m, os, title);
  const std::vector<Vec2> vel = postprocess_velocity(m, sol);
  const int nt = m.num_triangles();
  char buf[128];

  os << "CELL_DATA " << nt << "\n";
  os << "SCALARS stream_function double 1\nLOOKUP_TABLE default\n";
  for (int t = 0; t < nt; ++t) {
    const double c = (sol.u[3 * t] + sol.u[3 * t + 1] + sol.u[3 * t + 2]) / 3.0;
    std::snprintf(buf, sizeof(buf), "%.12g\n", c);
    os << buf;
  }
  os << "VECTORS velocity double\n";
  for (int t = 0; t < nt; ++t) {
    // + 0.0 normalizes negative zeros out of the output
    std::snprintf(buf, sizeof(buf), "%.12g %.12g 0\n", vel[t].x + 0.0,
                  vel[t].y + 0.0);
    os << buf;
  }
  os << "SCALARS speed double 1\nLOOKUP_TABLE default\n";
  for (int t = 0; t < nt; ++t) {
    std::snprintf(buf, sizeof(buf), "%.12g\n", norm(vel[t]));
    os << buf;
  }
  os << "SCALARS eta double 1\nLOOKUP_TABLE default\n";
  for (int t = 0; t < nt; ++t) {
    const double e = sol.eta_elem.empty() ? 0.0 : sol.eta_elem[t];
    std::snprintf(buf, sizeof(buf), "%.12g\n", e);
    os << buf;
  }
}

}  // namespace stokesdpg
