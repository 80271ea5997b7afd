#pragma once

#include <array>
#include <cstdint>
#include <ostream>
#include <vector>

#include "stokesdpg/geometry.hpp"

namespace stokesdpg {

enum class Domain { unit_square, channel_step };

// Conforming triangulation with oriented edge topology.
//
// Edges are stored as (v_lo, v_hi) with v_lo < v_hi and enumerated in
// lexicographic order; the edge tangent runs lo -> hi and the edge normal is
// the tangent rotated by -90 degrees.  elem_edge_sign is +1 when the
// element's outward normal on that edge coincides with the global edge
// normal, i.e. when the CCW traversal of the element runs lo -> hi.
struct Mesh {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;  // CCW
  std::vector<std::array<int, 2>> edges;
  std::vector<std::array<int, 3>> elem_edges;     // local edge k = (k, k+1 mod 3)
  std::vector<std::array<int, 3>> elem_edge_sign;
  std::vector<std::uint8_t> boundary_vertex;
  std::vector<std::uint8_t> boundary_edge;
  std::vector<double> h;  // per-element diameter (longest edge)

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_triangles() const { return static_cast<int>(triangles.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }
  int num_interior_vertices() const;

  Triangle triangle(int t) const {
    const auto& tr = triangles[t];
    return {vertices[tr[0]], vertices[tr[1]], vertices[tr[2]]};
  }
  double area(int t) const { return signed_area(triangle(t)); }
  double edge_length(int e) const {
    return norm(vertices[edges[e][1]] - vertices[edges[e][0]]);
  }
  double h_max() const;
  double total_area() const;
};

Mesh generate(Domain d, int n = 1);
Mesh unit_square_mesh(int n);
Mesh channel_step_mesh();

// Uniform red refinement: each triangle is split into 4 congruent children via
// edge midpoints.  Parent vertices keep their indices.
Mesh refine_red(const Mesh& m);

// (Re)builds edges, incidence signs and boundary flags from the triangle list.
// Throws TopologyError when an edge has more than two incident triangles and
// GeometryError when a triangle is not CCW.
void build_topology(Mesh& m);

// Legacy-VTK ASCII dump of the triangulation (cell type 5).
void write_vtk_mesh(const Mesh& m, std::ostream& os, const char* title = "mesh");

}  // namespace stokesdpg
