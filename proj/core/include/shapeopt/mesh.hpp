#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "shapeopt/geometry.hpp"

namespace shapeopt {

/// Conforming P1 triangulation of a convex polygon. The boundary node
/// chain traverses the polygon counterclockwise and reproduces it exactly.
struct TriangleMesh {
  std::vector<Vec2> nodes;
  std::vector<std::array<std::uint32_t, 3>> triangles;  // CCW index triples
  std::vector<std::uint32_t> boundary_chain;            // ordered boundary node ids
  std::vector<double> boundary_arclength;               // cumulative, same order
  std::vector<std::uint8_t> is_boundary;                // per node
  double h_max = 0.0;

  std::size_t n_nodes() const { return nodes.size(); }
  std::size_t n_triangles() const { return triangles.size(); }
  std::size_t n_boundary() const { return boundary_chain.size(); }

  double triangle_area(std::size_t t) const {
    const auto& tri = triangles[t];
    return 0.5 * cross(nodes[tri[1]] - nodes[tri[0]], nodes[tri[2]] - nodes[tri[0]]);
  }
  double total_area() const;
  double min_angle() const;  // radians, over all triangles
};

struct MeshOptions {
  double corner_grading = 0.7;   // geometric ratio toward corners, 1 = off
  int grading_layers = 4;
  double corner_angle_min = 0.35;  // rad; grade only corners turning more than this
  double interior_clearance = 0.55;  // drop lattice points closer than this * h to the boundary
};

/// Boundary subdivision + interior triangular lattice + Delaunay.
/// Throws ResolutionTooCoarse when fewer than 6 boundary nodes would result.
TriangleMesh triangulate(const ConvexDomain& dom, double h_target,
                         const MeshOptions& opts = {});

/// Uniform red refinement (each triangle into four). Coarse nodes keep
/// their ids and coordinates; boundary midpoints fall on the polygon.
TriangleMesh refine(const TriangleMesh& mesh);

/// Index of a triangle containing p (within tol), or npos.
std::size_t locate_triangle(const TriangleMesh& mesh, const Vec2& p, double tol = 1e-12);

/// P1 interpolation of nodal data at p. Throws Error when p is outside.
double interpolate(const TriangleMesh& mesh, const std::vector<double>& nodal, const Vec2& p);

}  // namespace shapeopt
