#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "shapeopt/vec2.hpp"

namespace shapeopt {

/// Convex polygon with counterclockwise vertices, an interior reference
/// origin (area centroid) and support-function samples on a uniform angle
/// grid. Immutable after construction; build through make_domain().
struct ConvexDomain {
  std::vector<Vec2> vertices;       // CCW, simple, collinear runs merged
  std::vector<double> support_angles;  // uniform grid in [0, 2pi)
  std::vector<double> support_values;  // h(theta_i) about `origin`
  Vec2 origin;                        // area centroid, strictly interior
  bool collinear_merged = false;      // some input vertices were collapsed

  std::size_t size() const { return vertices.size(); }
  const Vec2& vertex(std::size_t i) const { return vertices[i % vertices.size()]; }
};

/// Boundary arc seen as the graph of a convex piecewise-linear function:
/// chart coordinates place the first edge along the +x axis so that
/// u0(0) = 0 and u0'(0+) = 0, with the domain on the side u0 >= 0.
struct LocalGraph {
  Vec2 chart_origin;     // world position of chart x = 0
  Vec2 tangent;          // world direction of chart +x (unit)
  Vec2 normal;           // world direction of chart +y (unit, into domain side)
  std::vector<double> node_x;   // abscissas of covered polygon vertices, node_x[0] = 0
  std::vector<double> node_u;   // u0 at the nodes, node_u[0] = 0
  std::size_t start_vertex = 0; // index into the domain's vertex list
  std::size_t span = 0;         // number of edges covered

  double sigma() const { return node_x.back(); }
  double u0(double x) const;        // piecewise-linear evaluation
  double slope(std::size_t seg) const;  // u0' on segment seg
  Vec2 to_world(double x, double y) const {
    return chart_origin + tangent * x + normal * y;
  }
  /// Chart abscissa of a world point (projection on the tangent axis).
  double to_chart_x(const Vec2& p) const { return dot(p - chart_origin, tangent); }
};

/// Admissible band D1 subset Omega subset D2 of (e:Sad)-type constraints.
/// Either side may be absent (empty D1 / unbounded D2).
struct InclusionPair {
  std::optional<ConvexDomain> inner;
  std::optional<ConvexDomain> outer;  // nullopt means unbounded
};

ConvexDomain make_domain(std::vector<Vec2> points, std::size_t support_grid = 256);

double support_function(const ConvexDomain& dom, double theta);

/// Polygon realizing the support vector h (about `center`) on a uniform
/// angle grid: boundary of the intersection of the half planes
/// { x . e_i <= h_i }. Throws InfeasibleSupport when the discrete
/// convexity inequality h_{i-1} - 2 cos(dtheta) h_i + h_{i+1} >= -tol fails.
ConvexDomain reconstruct_from_support(const std::vector<double>& h,
                                      Vec2 center = {0.0, 0.0},
                                      double tol = 1e-9);

double area(const ConvexDomain& dom);
double perimeter(const ConvexDomain& dom);

bool inclusion_ok(const ConvexDomain& dom, const InclusionPair& pair, double tol = 1e-9);

/// True when p is inside the polygon or within tol of its boundary.
bool contains_point(const ConvexDomain& dom, const Vec2& p, double tol = 1e-12);

/// Distance from p to the boundary polyline of dom.
double boundary_distance(const ConvexDomain& dom, const Vec2& p);

/// Radial function about dom.origin: the r > 0 with origin + r e_theta
/// on the boundary. Defined for every theta since origin is interior.
double radial_function(const ConvexDomain& dom, double theta);

/// Graph chart covering `span` consecutive edges starting at start_vertex.
/// Throws ChartTooLong when the covered arc turns by >= pi/2.
LocalGraph local_graph(const ConvexDomain& dom, std::size_t start_vertex, std::size_t span);

/// Signed area of the (not necessarily convex) polygon given by `pts`.
double polygon_area(const std::vector<Vec2>& pts);

Vec2 polygon_centroid(const std::vector<Vec2>& pts);

/// Regular n-gon with circumradius r centered at c (vertex at angle phase).
ConvexDomain regular_polygon(std::size_t n, double r, Vec2 c = {0, 0}, double phase = 0.0);

/// Axis-aligned square of side `side` centered at c.
ConvexDomain square_domain(double side, Vec2 c = {0, 0});

}  // namespace shapeopt
