#include "stokesdpg/mesh.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <string>

#include "stokesdpg/errors.hpp"

namespace stokesdpg {

int Mesh::num_interior_vertices() const {
  int n = 0;
  for (std::uint8_t b : boundary_vertex) n += (b == 0);
  return n;
}

double Mesh::h_max() const {
  double m = 0.0;
  for (double v : h) m = std::max(m, v);
  return m;
}

double Mesh::total_area() const {
  double a = 0.0;
  for (int t = 0; t < num_triangles(); ++t) a += area(t);
  return a;
}

void build_topology(Mesh& m) {
  const int nt = m.num_triangles();
  for (int t = 0; t < nt; ++t) {
    if (!(m.area(t) > 0.0)) {
      throw GeometryError("build_topology: triangle " + std::to_string(t) +
                          " is degenerate or not CCW");
    }
  }

  std::map<std::array<int, 2>, int> edge_id;
  for (const auto& tr : m.triangles) {
    for (int k = 0; k < 3; ++k) {
      int a = tr[k], b = tr[(k + 1) % 3];
      if (a > b) std::swap(a, b);
      edge_id.emplace(std::array<int, 2>{a, b}, 0);
    }
  }
  m.edges.clear();
  m.edges.reserve(edge_id.size());
  for (auto& [key, id] : edge_id) {
    id = static_cast<int>(m.edges.size());
    m.edges.push_back(key);
  }

  std::vector<int> incidence(m.edges.size(), 0);
  m.elem_edges.assign(nt, {});
  m.elem_edge_sign.assign(nt, {});
  for (int t = 0; t < nt; ++t) {
    const auto& tr = m.triangles[t];
    for (int k = 0; k < 3; ++k) {
      const int a = tr[k], b = tr[(k + 1) % 3];
      const std::array<int, 2> key{std::min(a, b), std::max(a, b)};
      const int e = edge_id.at(key);
      m.elem_edges[t][k] = e;
      m.elem_edge_sign[t][k] = (a < b) ? 1 : -1;
      ++incidence[e];
    }
  }
  for (size_t e = 0; e < incidence.size(); ++e) {
    if (incidence[e] > 2) {
      throw TopologyError("build_topology: edge " + std::to_string(e) +
                          " has " + std::to_string(incidence[e]) +
                          " incident triangles");
    }
  }

  m.boundary_edge.assign(m.edges.size(), 0);
  m.boundary_vertex.assign(m.vertices.size(), 0);
  for (size_t e = 0; e < m.edges.size(); ++e) {
    if (incidence[e] == 1) {
      m.boundary_edge[e] = 1;
      m.boundary_vertex[m.edges[e][0]] = 1;
      m.boundary_vertex[m.edges[e][1]] = 1;
    }
  }

  m.h.assign(nt, 0.0);
  for (int t = 0; t < nt; ++t) {
    const Triangle tri = m.triangle(t);
    for (int k = 0; k < 3; ++k) {
      m.h[t] = std::max(m.h[t], norm(tri[(k + 1) % 3] - tri[k]));
    }
  }
}

namespace {

// Appends the four criss-cross triangles of a unit cell with corner indices
// (sw, se, ne, nw) and center c.
void add_cell(std::vector<std::array<int, 3>>& tris, int sw, int se, int ne,
              int nw, int c) {
  tris.push_back({sw, se, c});
  tris.push_back({se, ne, c});
  tris.push_back({ne, nw, c});
  tris.push_back({nw, sw, c});
}

}  // namespace

Mesh unit_square_mesh(int n) {
  if (n < 1) throw GeometryError("unit_square_mesh: n must be >= 1");
  Mesh m;
  const double hstep = 1.0 / n;
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) m.vertices.push_back({i * hstep, j * hstep});
  const int ncorner = (n + 1) * (n + 1);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      m.vertices.push_back({(i + 0.5) * hstep, (j + 0.5) * hstep});
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int sw = j * (n + 1) + i;
      const int se = sw + 1;
      const int nw = sw + (n + 1);
      const int ne = nw + 1;
      const int c = ncorner + j * n + i;
      add_cell(m.triangles, sw, se, ne, nw, c);
    }
  }
  build_topology(m);
  return m;
}

Mesh channel_step_mesh() {
  // (0,10) x (-1,1) minus [0,2] x [-1,0]: 18 unit cells, criss-cross split.
  Mesh m;
  std::map<std::array<int, 2>, int> grid;  // integer (x,y) -> vertex id
  auto add_grid = [&](int x, int y) {
    grid.emplace(std::array<int, 2>{x, y},
                 static_cast<int>(grid.size()));
  };
  for (int x = 2; x <= 10; ++x) add_grid(x, -1);
  for (int x = 0; x <= 10; ++x) add_grid(x, 0);
  for (int x = 0; x <= 10; ++x) add_grid(x, 1);
  m.vertices.resize(grid.size());
  for (const auto& [xy, id] : grid) {
    m.vertices[id] = {static_cast<double>(xy[0]), static_cast<double>(xy[1])};
  }

  struct Cell {
    int x, y;  // lower-left corner
  };
  std::vector<Cell> cells;
  for (int x = 2; x < 10; ++x) cells.push_back({x, -1});
  for (int x = 0; x < 10; ++x) cells.push_back({x, 0});

  for (const Cell& c : cells) {
    m.vertices.push_back({c.x + 0.5, c.y + 0.5});
    const int center = static_cast<int>(m.vertices.size()) - 1;
    const int sw = grid.at({c.x, c.y});
    const int se = grid.at({c.x + 1, c.y});
    const int ne = grid.at({c.x + 1, c.y + 1});
    const int nw = grid.at({c.x, c.y + 1});
    add_cell(m.triangles, sw, se, ne, nw, center);
  }
  build_topology(m);
  return m;
}

namespace {

// Both benchmark domains are simply connected.
void check_euler(const Mesh& m) {
  const long long chi = static_cast<long long>(m.num_vertices()) -
                        m.num_edges() + m.num_triangles();
  if (chi != 1) {
    throw TopologyError("mesh fails the Euler relation: V - E + T = " +
                        std::to_string(chi));
  }
}

}  // namespace

Mesh generate(Domain d, int n) {
  Mesh m;
  switch (d) {
    case Domain::unit_square: m = unit_square_mesh(n); break;
    case Domain::channel_step: m = channel_step_mesh(); break;
  }
  check_euler(m);
  return m;
}

Mesh refine_red(const Mesh& m) {
  Mesh r;
  r.vertices = m.vertices;
  const int nv = m.num_vertices();
  for (const auto& e : m.edges) {
    r.vertices.push_back(0.5 * (m.vertices[e[0]] + m.vertices[e[1]]));
  }
  r.triangles.reserve(4 * m.triangles.size());
  for (int t = 0; t < m.num_triangles(); ++t) {
    const auto& tr = m.triangles[t];
    const int m01 = nv + m.elem_edges[t][0];
    const int m12 = nv + m.elem_edges[t][1];
    const int m20 = nv + m.elem_edges[t][2];
    r.triangles.push_back({tr[0], m01, m20});
    r.triangles.push_back({m01, tr[1], m12});
    r.triangles.push_back({m20, m12, tr[2]});
    r.triangles.push_back({m01, m12, m20});
  }
  build_topology(r);
  check_euler(r);
  return r;
}

void write_vtk_mesh(const Mesh& m, std::ostream& os, const char* title) {
  char buf[128];
  os << "# vtk DataFile Version 3.0\n" << title << "\nASCII\n";
  os << "DATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << m.num_vertices() << " double\n";
  for (const Vec2& v : m.vertices) {
    std::snprintf(buf, sizeof(buf), "%.12g %.12g 0\n", v.x, v.y);
    os << buf;
  }
  os << "CELLS " << m.num_triangles() << " " << 4 * m.num_triangles() << "\n";
  for (const auto& t : m.triangles) {
    os << "3 " << t[0] << " " << t[1] << " " << t[2] << "\n";
  }
  os << "CELL_TYPES " << m.num_triangles() << "\n";
  for (int t = 0; t < m.num_triangles(); ++t) os << "5\n";
}

}  // namespace stokesdpg
