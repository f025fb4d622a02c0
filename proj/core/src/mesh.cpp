#include "shapeopt/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <vector>

#include "shapeopt/errors.hpp"

namespace shapeopt {

namespace {

double orient(const Vec2& a, const Vec2& b, const Vec2& c) {
  const long double acx = static_cast<long double>(a.x) - c.x;
  const long double acy = static_cast<long double>(a.y) - c.y;
  const long double bcx = static_cast<long double>(b.x) - c.x;
  const long double bcy = static_cast<long double>(b.y) - c.y;
  return static_cast<double>(acx * bcy - acy * bcx);
}

// > 0 when d lies strictly inside the circumcircle of CCW triangle (a,b,c)
double incircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  const long double adx = static_cast<long double>(a.x) - d.x;
  const long double ady = static_cast<long double>(a.y) - d.y;
  const long double bdx = static_cast<long double>(b.x) - d.x;
  const long double bdy = static_cast<long double>(b.y) - d.y;
  const long double cdx = static_cast<long double>(c.x) - d.x;
  const long double cdy = static_cast<long double>(c.y) - d.y;
  const long double ad2 = adx * adx + ady * ady;
  const long double bd2 = bdx * bdx + bdy * bdy;
  const long double cd2 = cdx * cdx + cdy * cdy;
  const long double det = adx * (bdy * cd2 - cdy * bd2) - ady * (bdx * cd2 - cdx * bd2) +
                          ad2 * (bdx * cdy - cdx * bdy);
  return static_cast<double>(det);
}

// Incremental Delaunay with Lawson flips; triangles stay CCW throughout.
struct DelaunayMesh {
  std::vector<Vec2> pts;
  std::vector<std::array<std::int32_t, 3>> tri;
  std::vector<std::array<std::int32_t, 3>> adj;  // adj[t][i] across edge opposite vertex i
  double eps = 0.0;                              // absolute predicate tolerance

  void replace_adj(std::int32_t t, std::int32_t old_t, std::int32_t new_t) {
    if (t < 0) return;
    for (int i = 0; i < 3; ++i)
      if (adj[t][i] == old_t) {
        adj[t][i] = new_t;
        return;
      }
  }

  // Delaunay check of the edge opposite slot si of triangle t; flips when
  // strictly illegal. On flip both triangles keep the apex at slot 0.
  bool flip_if_illegal(std::int32_t t, std::int32_t si) {
    const std::int32_t ot = adj[t][si];
    if (ot < 0) return false;
    const std::int32_t a = tri[t][si];
    const std::int32_t b = tri[t][(si + 1) % 3];
    const std::int32_t c = tri[t][(si + 2) % 3];
    std::int32_t oslot = -1;
    for (int k = 0; k < 3; ++k)
      if (tri[ot][k] != b && tri[ot][k] != c) oslot = k;
    const std::int32_t d = tri[ot][oslot];
    if (incircle(pts[a], pts[b], pts[c], pts[d]) <= eps) return false;
    // convexity of the quad a,b,d,c is implied by the incircle violation
    const std::int32_t t_ca = adj[t][(si + 1) % 3];
    const std::int32_t t_ab = adj[t][(si + 2) % 3];
    std::int32_t sb = -1, sc = -1;
    for (int k = 0; k < 3; ++k) {
      if (tri[ot][k] == b) sb = k;
      if (tri[ot][k] == c) sc = k;
    }
    const std::int32_t t_db = adj[ot][sc];
    const std::int32_t t_cd = adj[ot][sb];
    tri[t] = {a, b, d};
    adj[t] = {t_db, ot, t_ab};
    tri[ot] = {a, d, c};
    adj[ot] = {t_cd, t_ca, t};
    replace_adj(t_db, ot, t);
    replace_adj(t_ca, t, ot);
    return true;
  }

  // restore Delaunay around a newly inserted vertex sitting at slot 0... the
  // stack carries (triangle, slot of the inserted vertex's opposite edge)
  void legalize(std::int32_t t0, std::int32_t s0) {
    std::vector<std::pair<std::int32_t, std::int32_t>> stack{{t0, s0}};
    while (!stack.empty()) {
      auto [t, s] = stack.back();
      stack.pop_back();
      const std::int32_t ot = adj[t][s];
      if (flip_if_illegal(t, s)) {
        stack.push_back({t, 0});
        stack.push_back({ot, 0});
      }
    }
  }

  void lawson_pass_until_delaunay() {
    for (std::size_t sweep = 0; sweep < 64; ++sweep) {
      bool any = false;
      for (std::int32_t t = 0; t < static_cast<std::int32_t>(tri.size()); ++t)
        for (std::int32_t s = 0; s < 3; ++s)
          if (adj[t][s] > t && flip_if_illegal(t, s)) any = true;
      if (!any) return;
    }
    throw Error("delaunay: lawson sweeps did not converge");
  }

  std::int32_t locate(const Vec2& p, std::int32_t hint) const {
    std::int32_t t = hint;
    for (std::size_t guard = 0; guard < 4 * tri.size() + 16; ++guard) {
      std::int32_t next = -1;
      for (int i = 0; i < 3; ++i) {
        const Vec2& a = pts[tri[t][(i + 1) % 3]];
        const Vec2& b = pts[tri[t][(i + 2) % 3]];
        if (orient(a, b, p) < -eps) {
          next = adj[t][i];
          break;
        }
      }
      if (next < 0) return t;
      t = next;
    }
    return t;
  }

  void insert_point(std::int32_t v, std::int32_t& hint) {
    const Vec2& p = pts[v];
    const std::int32_t t = locate(p, hint);
    int edge_slot = -1;
    for (int i = 0; i < 3; ++i) {
      const Vec2& a = pts[tri[t][(i + 1) % 3]];
      const Vec2& b = pts[tri[t][(i + 2) % 3]];
      if (std::abs(orient(a, b, p)) <= eps) edge_slot = i;
    }
    if (edge_slot >= 0 && adj[t][edge_slot] >= 0) {
      split_edge(t, edge_slot, v);
    } else {
      split_triangle(t, v);
    }
    hint = static_cast<std::int32_t>(tri.size()) - 1;
  }

  void split_triangle(std::int32_t t, std::int32_t v) {
    const auto [a, b, c] = tri[t];
    const auto [na, nb, nc] = adj[t];
    const std::int32_t t1 = static_cast<std::int32_t>(tri.size());
    const std::int32_t t2 = t1 + 1;
    tri[t] = {a, b, v};
    adj[t] = {t1, t2, nc};
    tri.push_back({b, c, v});
    adj.push_back({t2, t, na});
    tri.push_back({c, a, v});
    adj.push_back({t, t1, nb});
    replace_adj(na, t, t1);
    replace_adj(nb, t, t2);
    legalize(t, 2);
    legalize(t1, 2);
    legalize(t2, 2);
  }

  // v lies on the interior edge opposite slot i of triangle t
  void split_edge(std::int32_t t, std::int32_t i, std::int32_t v) {
    const std::int32_t ot = adj[t][i];
    const std::int32_t a = tri[t][i];
    const std::int32_t b = tri[t][(i + 1) % 3];
    const std::int32_t c = tri[t][(i + 2) % 3];
    std::int32_t oslot = -1;
    for (int k = 0; k < 3; ++k)
      if (tri[ot][k] != b && tri[ot][k] != c) oslot = k;
    const std::int32_t d = tri[ot][oslot];
    const std::int32_t t_ca = adj[t][(i + 1) % 3];
    const std::int32_t t_ab = adj[t][(i + 2) % 3];
    std::int32_t sb = -1, sc = -1;
    for (int k = 0; k < 3; ++k) {
      if (tri[ot][k] == b) sb = k;
      if (tri[ot][k] == c) sc = k;
    }
    const std::int32_t t_db = adj[ot][sc];
    const std::int32_t t_cd = adj[ot][sb];
    const std::int32_t t1 = static_cast<std::int32_t>(tri.size());
    const std::int32_t t2 = t1 + 1;
    tri[t] = {a, b, v};
    adj[t] = {ot, t1, t_ab};
    tri.push_back({a, v, c});  // t1
    adj.push_back({t2, t_ca, t});
    tri[ot] = {b, d, v};
    adj[ot] = {t2, t, t_db};
    tri.push_back({d, c, v});  // t2
    adj.push_back({t1, ot, t_cd});
    replace_adj(t_ca, t, t1);
    replace_adj(t_cd, ot, t2);
    legalize(t, 2);
    legalize(t1, 1);
    legalize(ot, 2);
    legalize(t2, 2);
  }
};

// subdivision points of one polygon edge (excluding the end vertex),
// geometric grading toward graded corners
std::vector<Vec2> subdivide_edge(const Vec2& a, const Vec2& b, double h, bool grade_start,
                                 bool grade_end, const MeshOptions& opts) {
  const double len = (b - a).norm();
  const int n = std::max(1, static_cast<int>(std::ceil(len / h)));
  std::vector<double> ts;
  ts.reserve(static_cast<std::size_t>(n) + 8);
  for (int i = 0; i < n; ++i) ts.push_back(static_cast<double>(i) / n);
  const double g = opts.corner_grading;
  if (g < 1.0 && n >= 2) {
    const double seg = 1.0 / n;
    if (grade_start) {
      double t = seg;
      for (int l = 0; l < opts.grading_layers; ++l) {
        t *= g;
        ts.push_back(t);
      }
    }
    if (grade_end) {
      double t = seg;
      for (int l = 0; l < opts.grading_layers; ++l) {
        t *= g;
        ts.push_back(1.0 - t);
      }
    }
    std::sort(ts.begin(), ts.end());
  }
  std::vector<Vec2> out;
  out.reserve(ts.size());
  for (double t : ts) out.push_back(a + (b - a) * t);
  return out;
}

}  // namespace

double TriangleMesh::total_area() const {
  double a = 0.0;
  for (std::size_t t = 0; t < triangles.size(); ++t) a += triangle_area(t);
  return a;
}

double TriangleMesh::min_angle() const {
  double m = std::numbers::pi;
  for (const auto& t : triangles) {
    for (int i = 0; i < 3; ++i) {
      const Vec2 u = nodes[t[(i + 1) % 3]] - nodes[t[i]];
      const Vec2 v = nodes[t[(i + 2) % 3]] - nodes[t[i]];
      m = std::min(m, std::atan2(std::abs(cross(u, v)), dot(u, v)));
    }
  }
  return m;
}

TriangleMesh triangulate(const ConvexDomain& dom, double h_target, const MeshOptions& opts) {
  if (h_target <= 0) throw Error("triangulate: h_target must be positive");
  const std::size_t nv = dom.size();

  // exterior turn per vertex decides corner grading
  std::vector<bool> graded(nv, false);
  for (std::size_t i = 0; i < nv; ++i) {
    const Vec2 e0 = dom.vertex(i) - dom.vertex(i + nv - 1);
    const Vec2 e1 = dom.vertex(i + 1) - dom.vertex(i);
    const double turn = std::atan2(cross(e0, e1), dot(e0, e1));
    graded[i] = opts.corner_grading < 1.0 && turn > opts.corner_angle_min;
  }

  TriangleMesh mesh;
  mesh.h_max = h_target;
  for (std::size_t i = 0; i < nv; ++i) {
    const auto pts = subdivide_edge(dom.vertex(i), dom.vertex(i + 1), h_target, graded[i],
                                    graded[(i + 1) % nv], opts);
    for (const auto& p : pts) mesh.nodes.push_back(p);
  }
  const std::size_t nb = mesh.nodes.size();
  if (nb < 6)
    throw ResolutionTooCoarse("triangulate: fewer than 6 boundary nodes at h = " +
                              std::to_string(h_target));

  // interior lattice anchored at the centroid
  std::vector<Vec2> interior;
  const double row_h = h_target * std::numbers::sqrt3 / 2.0;
  double min_x = dom.vertices[0].x, max_x = min_x, min_y = dom.vertices[0].y, max_y = min_y;
  for (const auto& v : dom.vertices) {
    min_x = std::min(min_x, v.x);
    max_x = std::max(max_x, v.x);
    min_y = std::min(min_y, v.y);
    max_y = std::max(max_y, v.y);
  }
  const double clearance = opts.interior_clearance * h_target;
  const int j0 = static_cast<int>(std::floor((min_y - dom.origin.y) / row_h)) - 1;
  const int j1 = static_cast<int>(std::ceil((max_y - dom.origin.y) / row_h)) + 1;
  for (int j = j0; j <= j1; ++j) {
    const double y = dom.origin.y + j * row_h;
    const double x_off = (j % 2 == 0) ? 0.0 : 0.5 * h_target;
    const int i0 = static_cast<int>(std::floor((min_x - dom.origin.x - x_off) / h_target)) - 1;
    const int i1 = static_cast<int>(std::ceil((max_x - dom.origin.x - x_off) / h_target)) + 1;
    for (int i = i0; i <= i1; ++i) {
      const Vec2 p{dom.origin.x + x_off + i * h_target, y};
      if (!contains_point(dom, p, 0.0)) continue;
      if (boundary_distance(dom, p) < clearance) continue;
      interior.push_back(p);
    }
  }

  DelaunayMesh dt;
  dt.pts = mesh.nodes;
  double scale2 = 1e-30;
  for (const auto& p : dt.pts) scale2 = std::max(scale2, p.squared_norm());
  dt.eps = 1e-14 * std::max(scale2, 1.0);

  // seed fan from the centroid
  const std::int32_t seed = static_cast<std::int32_t>(dt.pts.size());
  const bool seed_from_lattice =
      !interior.empty() && (interior.front() - dom.origin).squared_norm() < 1e-24;
  dt.pts.push_back(seed_from_lattice ? interior.front() : dom.origin);
  for (std::size_t i = 0; i < nb; ++i) {
    const std::int32_t a = static_cast<std::int32_t>(i);
    const std::int32_t b = static_cast<std::int32_t>((i + 1) % nb);
    dt.tri.push_back({seed, a, b});
  }
  const std::int32_t ntf = static_cast<std::int32_t>(dt.tri.size());
  dt.adj.resize(dt.tri.size());
  for (std::int32_t i = 0; i < ntf; ++i) dt.adj[i] = {-1, (i + 1) % ntf, (i + ntf - 1) % ntf};
  dt.lawson_pass_until_delaunay();

  std::int32_t hint = 0;
  for (std::size_t k = seed_from_lattice ? 1 : 0; k < interior.size(); ++k) {
    const std::int32_t v = static_cast<std::int32_t>(dt.pts.size());
    dt.pts.push_back(interior[k]);
    dt.insert_point(v, hint);
  }

  mesh.nodes = dt.pts;
  mesh.triangles.reserve(dt.tri.size());
  for (const auto& t : dt.tri) {
    mesh.triangles.push_back({static_cast<std::uint32_t>(t[0]), static_cast<std::uint32_t>(t[1]),
                              static_cast<std::uint32_t>(t[2])});
  }

  mesh.is_boundary.assign(mesh.nodes.size(), 0);
  mesh.boundary_chain.resize(nb);
  mesh.boundary_arclength.resize(nb);
  double s = 0.0;
  for (std::size_t i = 0; i < nb; ++i) {
    mesh.boundary_chain[i] = static_cast<std::uint32_t>(i);
    mesh.is_boundary[i] = 1;
    mesh.boundary_arclength[i] = s;
    s += (mesh.nodes[(i + 1) % nb] - mesh.nodes[i]).norm();
  }

  for (std::size_t t = 0; t < mesh.n_triangles(); ++t) {
    if (mesh.triangle_area(t) <= 0.0)
      throw Error("triangulate: nonpositive triangle area (internal)");
  }
  return mesh;
}

TriangleMesh refine(const TriangleMesh& mesh) {
  TriangleMesh out;
  out.h_max = 0.5 * mesh.h_max;
  out.nodes = mesh.nodes;
  out.is_boundary.assign(mesh.nodes.size(), 0);

  const std::size_t nb = mesh.boundary_chain.size();
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> midpoint;
  auto mid_id = [&](std::uint32_t a, std::uint32_t b) {
    const auto key = std::minmax(a, b);
    auto it = midpoint.find({key.first, key.second});
    if (it != midpoint.end()) return it->second;
    const std::uint32_t id = static_cast<std::uint32_t>(out.nodes.size());
    out.nodes.push_back((mesh.nodes[a] + mesh.nodes[b]) * 0.5);
    out.is_boundary.push_back(0);
    midpoint[{key.first, key.second}] = id;
    return id;
  };

  out.triangles.reserve(4 * mesh.n_triangles());
  for (const auto& t : mesh.triangles) {
    const std::uint32_t m01 = mid_id(t[0], t[1]);
    const std::uint32_t m12 = mid_id(t[1], t[2]);
    const std::uint32_t m20 = mid_id(t[2], t[0]);
    out.triangles.push_back({t[0], m01, m20});
    out.triangles.push_back({t[1], m12, m01});
    out.triangles.push_back({t[2], m20, m12});
    out.triangles.push_back({m01, m12, m20});
  }

  out.boundary_chain.reserve(2 * nb);
  for (std::size_t i = 0; i < nb; ++i) {
    const std::uint32_t a = mesh.boundary_chain[i];
    const std::uint32_t b = mesh.boundary_chain[(i + 1) % nb];
    out.boundary_chain.push_back(a);
    out.boundary_chain.push_back(mid_id(a, b));
  }
  out.boundary_arclength.resize(out.boundary_chain.size());
  double s = 0.0;
  for (std::size_t i = 0; i < out.boundary_chain.size(); ++i) {
    out.boundary_arclength[i] = s;
    const Vec2 a = out.nodes[out.boundary_chain[i]];
    const Vec2 b = out.nodes[out.boundary_chain[(i + 1) % out.boundary_chain.size()]];
    s += (b - a).norm();
  }
  for (const auto id : out.boundary_chain) out.is_boundary[id] = 1;
  return out;
}

std::size_t locate_triangle(const TriangleMesh& mesh, const Vec2& p, double tol) {
  for (std::size_t t = 0; t < mesh.n_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    const Vec2& a = mesh.nodes[tri[0]];
    const Vec2& b = mesh.nodes[tri[1]];
    const Vec2& c = mesh.nodes[tri[2]];
    const double A = cross(b - a, c - a);
    const double w0 = cross(b - p, c - p) / A;
    const double w1 = cross(c - p, a - p) / A;
    const double w2 = cross(a - p, b - p) / A;
    if (w0 >= -tol && w1 >= -tol && w2 >= -tol) return t;
  }
  return static_cast<std::size_t>(-1);
}

double interpolate(const TriangleMesh& mesh, const std::vector<double>& nodal, const Vec2& p) {
  const std::size_t t = locate_triangle(mesh, p, 1e-10);
  if (t == static_cast<std::size_t>(-1)) throw Error("interpolate: point outside mesh");
  const auto& tri = mesh.triangles[t];
  const Vec2& a = mesh.nodes[tri[0]];
  const Vec2& b = mesh.nodes[tri[1]];
  const Vec2& c = mesh.nodes[tri[2]];
  const double A = cross(b - a, c - a);
  const double w0 = cross(b - p, c - p) / A;
  const double w1 = cross(c - p, a - p) / A;
  const double w2 = cross(a - p, b - p) / A;
  return w0 * nodal[tri[0]] + w1 * nodal[tri[1]] + w2 * nodal[tri[2]];
}

}  // namespace shapeopt
