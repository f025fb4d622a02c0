#include "shapeopt/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "shapeopt/errors.hpp"

namespace shapeopt {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double squared_scale(const std::vector<Vec2>& pts) {
  double s = 0.0;
  for (const auto& p : pts) s = std::max(s, p.squared_norm());
  return std::max(s, 1e-300);
}

}  // namespace

double polygon_area(const std::vector<Vec2>& pts) {
  double a = 0.0;
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i) a += cross(pts[i], pts[(i + 1) % n]);
  return 0.5 * a;
}

Vec2 polygon_centroid(const std::vector<Vec2>& pts) {
  double a = 0.0;
  Vec2 c{0, 0};
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double w = cross(pts[i], pts[(i + 1) % n]);
    a += w;
    c += (pts[i] + pts[(i + 1) % n]) * w;
  }
  return c / (3.0 * a);
}

ConvexDomain make_domain(std::vector<Vec2> points, std::size_t support_grid) {
  if (points.size() < 3) throw DegenerateInput("make_domain: fewer than 3 points");

  const double scale2 = squared_scale(points);
  const double cross_tol = 1e-12 * scale2;

  double a = polygon_area(points);
  if (a < 0) {  // accept clockwise input, normalize to CCW
    std::reverse(points.begin(), points.end());
    a = -a;
  }
  if (a < 1e-12 * scale2) throw DegenerateInput("make_domain: area below tolerance");

  bool merged = false;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Vec2& prev = points[(i + points.size() - 1) % points.size()];
    const Vec2& cur = points[i];
    const Vec2& next = points[(i + 1) % points.size()];
    const double c = cross(cur - prev, next - cur);
    if (c < -cross_tol)
      throw NonConvexInput("make_domain: reflex vertex (cross product " + std::to_string(c) + ")");
  }

  // collapse collinear runs and duplicate points
  std::vector<Vec2> verts;
  verts.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Vec2& prev = points[(i + points.size() - 1) % points.size()];
    const Vec2& cur = points[i];
    const Vec2& next = points[(i + 1) % points.size()];
    if ((cur - prev).squared_norm() < 1e-24 * scale2) {
      merged = true;
      continue;
    }
    if (std::abs(cross(cur - prev, next - cur)) <= cross_tol) {
      merged = true;
      continue;
    }
    verts.push_back(cur);
  }
  if (verts.size() < 3) throw DegenerateInput("make_domain: degenerate after collinear merge");

  ConvexDomain dom;
  dom.vertices = std::move(verts);
  dom.collinear_merged = merged;
  dom.origin = polygon_centroid(dom.vertices);

  dom.support_angles.resize(support_grid);
  dom.support_values.resize(support_grid);
  for (std::size_t i = 0; i < support_grid; ++i) {
    const double th = kTwoPi * static_cast<double>(i) / static_cast<double>(support_grid);
    dom.support_angles[i] = th;
    dom.support_values[i] = support_function(dom, th);
  }
  return dom;
}

double support_function(const ConvexDomain& dom, double theta) {
  const Vec2 d = unit_dir(theta);
  double h = -std::numeric_limits<double>::infinity();
  for (const auto& v : dom.vertices) h = std::max(h, dot(v - dom.origin, d));
  return h;
}

ConvexDomain reconstruct_from_support(const std::vector<double>& h, Vec2 center, double tol) {
  const std::size_t n = h.size();
  if (n < 3) throw InfeasibleSupport("reconstruct_from_support: need >= 3 samples");
  const double dtheta = kTwoPi / static_cast<double>(n);
  const double c2 = 2.0 * std::cos(dtheta);

  double hscale = 0.0;
  for (double v : h) hscale = std::max(hscale, std::abs(v));
  const double ctol = tol * std::max(1.0, hscale);

  for (std::size_t i = 0; i < n; ++i) {
    const double lhs = h[(i + n - 1) % n] - c2 * h[i] + h[(i + 1) % n];
    if (lhs < -ctol)
      throw InfeasibleSupport("reconstruct_from_support: discrete convexity violated at index " +
                              std::to_string(i));
  }

  // vertex i = intersection of the support lines for angles i and i+1
  std::vector<Vec2> pts;
  pts.reserve(n);
  const double sd = std::sin(dtheta);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = (i + 1) % n;
    const double thi = dtheta * static_cast<double>(i);
    const Vec2 ei = unit_dir(thi);
    const Vec2 ej = unit_dir(thi + dtheta);
    // solve x.ei = h_i, x.ej = h_j
    const Vec2 p{(h[i] * ej.y - h[j] * ei.y) / sd, (h[j] * ei.x - h[i] * ej.x) / sd};
    pts.push_back(center + p);
  }

  // drop zero-length edges (support line touching at a single vertex)
  std::vector<Vec2> dedup;
  const double merge_tol2 = 1e-20 * std::max(1.0, hscale * hscale);
  for (const auto& p : pts) {
    if (dedup.empty() || (p - dedup.back()).squared_norm() > merge_tol2) dedup.push_back(p);
  }
  while (dedup.size() > 1 && (dedup.front() - dedup.back()).squared_norm() <= merge_tol2)
    dedup.pop_back();
  if (dedup.size() < 3) throw DegenerateInput("reconstruct_from_support: degenerate body");

  return make_domain(std::move(dedup), n);
}

double area(const ConvexDomain& dom) { return polygon_area(dom.vertices); }

double perimeter(const ConvexDomain& dom) {
  double p = 0.0;
  const std::size_t n = dom.size();
  for (std::size_t i = 0; i < n; ++i) p += (dom.vertex(i + 1) - dom.vertex(i)).norm();
  return p;
}

bool contains_point(const ConvexDomain& dom, const Vec2& p, double tol) {
  const std::size_t n = dom.size();
  const double scale = std::sqrt(squared_scale(dom.vertices));
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 e = dom.vertex(i + 1) - dom.vertex(i);
    if (cross(e, p - dom.vertex(i)) < -tol * std::max(1.0, scale) * e.norm()) return false;
  }
  return true;
}

double boundary_distance(const ConvexDomain& dom, const Vec2& p) {
  double d2 = std::numeric_limits<double>::infinity();
  const std::size_t n = dom.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = dom.vertex(i), b = dom.vertex(i + 1);
    const Vec2 e = b - a;
    const double t = std::clamp(dot(p - a, e) / e.squared_norm(), 0.0, 1.0);
    d2 = std::min(d2, (p - (a + e * t)).squared_norm());
  }
  return std::sqrt(d2);
}

bool inclusion_ok(const ConvexDomain& dom, const InclusionPair& pair, double tol) {
  if (pair.inner) {
    for (const auto& v : pair.inner->vertices)
      if (!contains_point(dom, v, tol)) return false;
  }
  if (pair.outer) {
    for (const auto& v : dom.vertices)
      if (!contains_point(*pair.outer, v, tol)) return false;
  }
  return true;
}

double radial_function(const ConvexDomain& dom, double theta) {
  const Vec2 d = unit_dir(theta);
  const std::size_t n = dom.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = dom.vertex(i) - dom.origin;
    const Vec2 b = dom.vertex(i + 1) - dom.origin;
    const double ca = cross(d, a);
    const double cb = cross(d, b);
    if (ca >= 0.0 && cb < 0.0) {  // ray crosses edge a->b
      // origin + r d = a + t (b - a); solve with cross products
      const double denom = cross(d, b - a);
      const double t = ca / denom;
      const Vec2 q = a + (b - a) * t;
      return dot(q, d);
    }
  }
  // fall back (theta aligned with a vertex): max over vertices of projection along d
  double r = 0.0;
  for (const auto& v : dom.vertices) {
    const Vec2 a = v - dom.origin;
    if (std::abs(cross(d, a)) < 1e-12 * a.norm() && dot(d, a) > 0) r = std::max(r, a.norm());
  }
  if (r > 0) return r;
  throw Error("radial_function: no boundary intersection (origin not interior?)");
}

double LocalGraph::u0(double x) const {
  if (x <= node_x.front()) return node_u.front();
  if (x >= node_x.back()) return node_u.back();
  const auto it = std::upper_bound(node_x.begin(), node_x.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - node_x.begin()) - 1;
  const double t = (x - node_x[i]) / (node_x[i + 1] - node_x[i]);
  return node_u[i] + t * (node_u[i + 1] - node_u[i]);
}

double LocalGraph::slope(std::size_t seg) const {
  return (node_u[seg + 1] - node_u[seg]) / (node_x[seg + 1] - node_x[seg]);
}

LocalGraph local_graph(const ConvexDomain& dom, std::size_t start_vertex, std::size_t span) {
  const std::size_t n = dom.size();
  if (span < 2 || span >= n)
    throw ChartMismatch("local_graph: span must cover >= 3 boundary vertices");

  const Vec2 p0 = dom.vertex(start_vertex);
  const Vec2 first_edge = dom.vertex(start_vertex + 1) - p0;
  const Vec2 t = first_edge / first_edge.norm();
  // interior lies to the left of the CCW boundary: chart +y = inward
  const Vec2 nrm = t.perp();

  // graph property: total turning of the covered arc must stay below pi/2
  double turn = 0.0;
  for (std::size_t k = 1; k < span; ++k) {
    const Vec2 e0 = dom.vertex(start_vertex + k) - dom.vertex(start_vertex + k - 1);
    const Vec2 e1 = dom.vertex(start_vertex + k + 1) - dom.vertex(start_vertex + k);
    turn += std::atan2(cross(e0, e1), dot(e0, e1));
    if (turn >= 0.5 * std::numbers::pi - 1e-12)
      throw ChartTooLong("local_graph: arc turns by >= pi/2");
  }

  LocalGraph g;
  g.chart_origin = p0;
  g.tangent = t;
  g.normal = nrm;
  g.start_vertex = start_vertex;
  g.span = span;
  g.node_x.reserve(span + 1);
  g.node_u.reserve(span + 1);
  for (std::size_t k = 0; k <= span; ++k) {
    const Vec2 d = dom.vertex(start_vertex + k) - p0;
    g.node_x.push_back(dot(d, t));
    g.node_u.push_back(dot(d, nrm));
  }
  // convexity of u0 in chart coordinates (slopes nondecreasing)
  for (std::size_t k = 1; k + 1 <= span; ++k) {
    if (g.slope(k) < g.slope(k - 1) - 1e-12)
      throw NonConvexInput("local_graph: chart function not convex");
  }
  return g;
}

ConvexDomain regular_polygon(std::size_t n, double r, Vec2 c, double phase) {
  std::vector<Vec2> pts;
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double th = phase + kTwoPi * static_cast<double>(i) / static_cast<double>(n);
    pts.push_back(c + unit_dir(th) * r);
  }
  return make_domain(std::move(pts), std::max<std::size_t>(n, 64));
}

ConvexDomain square_domain(double side, Vec2 c) {
  const double s = 0.5 * side;
  return make_domain({{c.x - s, c.y - s}, {c.x + s, c.y - s}, {c.x + s, c.y + s}, {c.x - s, c.y + s}});
}

}  // namespace shapeopt
