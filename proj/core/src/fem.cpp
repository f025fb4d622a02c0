#include "shapeopt/fem.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>

#include "shapeopt/errors.hpp"

namespace shapeopt {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

struct Assembly {
  SpMat K;               // stiffness, all nodes
  SpMat M;               // consistent mass, all nodes
  Eigen::VectorXd F;     // load, all nodes
  std::vector<int> interior_of_node;  // -1 for boundary nodes
  std::vector<std::uint32_t> interior_nodes;
};

void element_gradients(const TriangleMesh& mesh, std::size_t t, Vec2 grad[3], double& area) {
  const auto& tri = mesh.triangles[t];
  const Vec2& a = mesh.nodes[tri[0]];
  const Vec2& b = mesh.nodes[tri[1]];
  const Vec2& c = mesh.nodes[tri[2]];
  const double two_a = cross(b - a, c - a);
  area = 0.5 * two_a;
  grad[0] = Vec2{b.y - c.y, c.x - b.x} / two_a;
  grad[1] = Vec2{c.y - a.y, a.x - c.x} / two_a;
  grad[2] = Vec2{a.y - b.y, b.x - a.x} / two_a;
}

Assembly assemble(const TriangleMesh& mesh, const SourceSpec& f) {
  const std::size_t n = mesh.n_nodes();
  std::vector<Triplet> kt, mt;
  kt.reserve(9 * mesh.n_triangles());
  mt.reserve(9 * mesh.n_triangles());
  Eigen::VectorXd F = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));

  for (std::size_t t = 0; t < mesh.n_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    Vec2 g[3];
    double area;
    element_gradients(mesh, t, g, area);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        kt.emplace_back(tri[i], tri[j], area * dot(g[i], g[j]));
        mt.emplace_back(tri[i], tri[j], area / 12.0 * (i == j ? 2.0 : 1.0));
      }
    }
    if (f.kind == SourceSpec::Kind::Constant) {
      for (int i = 0; i < 3; ++i) F[tri[i]] += area * f.value / 3.0;
    } else {
      // midedge rule, exact for quadratic sources against P1 bases
      const Vec2 m01 = (mesh.nodes[tri[0]] + mesh.nodes[tri[1]]) * 0.5;
      const Vec2 m12 = (mesh.nodes[tri[1]] + mesh.nodes[tri[2]]) * 0.5;
      const Vec2 m20 = (mesh.nodes[tri[2]] + mesh.nodes[tri[0]]) * 0.5;
      const double f01 = f(m01), f12 = f(m12), f20 = f(m20);
      F[tri[0]] += area / 3.0 * 0.5 * (f01 + f20);
      F[tri[1]] += area / 3.0 * 0.5 * (f01 + f12);
      F[tri[2]] += area / 3.0 * 0.5 * (f12 + f20);
    }
  }

  Assembly out;
  out.K.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  out.K.setFromTriplets(kt.begin(), kt.end());
  out.M.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  out.M.setFromTriplets(mt.begin(), mt.end());
  out.F = std::move(F);

  out.interior_of_node.assign(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    if (!mesh.is_boundary[i]) {
      out.interior_of_node[i] = static_cast<int>(out.interior_nodes.size());
      out.interior_nodes.push_back(static_cast<std::uint32_t>(i));
    }
  }
  return out;
}

SpMat restrict_interior(const SpMat& A, const Assembly& asmb) {
  std::vector<Triplet> tr;
  tr.reserve(static_cast<std::size_t>(A.nonZeros()));
  for (int k = 0; k < A.outerSize(); ++k) {
    for (SpMat::InnerIterator it(A, k); it; ++it) {
      const int i = asmb.interior_of_node[static_cast<std::size_t>(it.row())];
      const int j = asmb.interior_of_node[static_cast<std::size_t>(it.col())];
      if (i >= 0 && j >= 0) tr.emplace_back(i, j, it.value());
    }
  }
  SpMat out(static_cast<Eigen::Index>(asmb.interior_nodes.size()),
            static_cast<Eigen::Index>(asmb.interior_nodes.size()));
  out.setFromTriplets(tr.begin(), tr.end());
  return out;
}

// least-squares linear fit of per-element samples (value at centroid) around
// each node; exact on globally linear fields
std::vector<Vec2> recover_gradient(const TriangleMesh& mesh, const std::vector<double>& u) {
  const std::size_t n = mesh.n_nodes();
  std::vector<std::vector<std::uint32_t>> patches(n);
  for (std::uint32_t t = 0; t < mesh.n_triangles(); ++t)
    for (int i = 0; i < 3; ++i) patches[mesh.triangles[t][i]].push_back(t);

  std::vector<Vec2> eg(mesh.n_triangles());
  std::vector<Vec2> ec(mesh.n_triangles());
  std::vector<double> ea(mesh.n_triangles());
  for (std::size_t t = 0; t < mesh.n_triangles(); ++t) {
    Vec2 g[3];
    double area;
    element_gradients(mesh, t, g, area);
    const auto& tri = mesh.triangles[t];
    eg[t] = g[0] * u[tri[0]] + g[1] * u[tri[1]] + g[2] * u[tri[2]];
    ec[t] = (mesh.nodes[tri[0]] + mesh.nodes[tri[1]] + mesh.nodes[tri[2]]) / 3.0;
    ea[t] = area;
  }

  std::vector<Vec2> out(n);
  for (std::size_t v = 0; v < n; ++v) {
    // grow to the 2-ring when the 1-ring has too few elements for a plane fit
    std::vector<std::uint32_t> patch = patches[v];
    if (patch.size() < 3) {
      std::vector<std::uint32_t> grown = patch;
      for (auto t : patch) {
        for (int i = 0; i < 3; ++i)
          for (auto t2 : patches[mesh.triangles[t][i]]) grown.push_back(t2);
      }
      std::sort(grown.begin(), grown.end());
      grown.erase(std::unique(grown.begin(), grown.end()), grown.end());
      patch = std::move(grown);
    }

    Eigen::Matrix3d A = Eigen::Matrix3d::Zero();
    Eigen::Vector3d bx = Eigen::Vector3d::Zero(), by = Eigen::Vector3d::Zero();
    const Vec2 p0 = mesh.nodes[v];
    for (auto t : patch) {
      const double w = ea[t];
      const Vec2 d = ec[t] - p0;
      const Eigen::Vector3d row(1.0, d.x, d.y);
      A += w * row * row.transpose();
      bx += w * row * eg[t].x;
      by += w * row * eg[t].y;
    }
    if (std::abs(A.determinant()) > 1e-30) {
      const Eigen::Vector3d cx = A.ldlt().solve(bx);
      const Eigen::Vector3d cy = A.ldlt().solve(by);
      out[v] = Vec2{cx[0], cy[0]};
    } else {  // fall back to the area-weighted average
      double wsum = 0.0;
      Vec2 g{0, 0};
      for (auto t : patch) {
        g += eg[t] * ea[t];
        wsum += ea[t];
      }
      out[v] = g / wsum;
    }
  }
  return out;
}

std::vector<std::array<double, 3>> recover_hessian(const TriangleMesh& mesh,
                                                   const std::vector<Vec2>& grad) {
  const std::size_t n = mesh.n_nodes();
  std::vector<std::vector<std::uint32_t>> nbr(n);
  for (const auto& tri : mesh.triangles) {
    for (int i = 0; i < 3; ++i) {
      nbr[tri[i]].push_back(tri[(i + 1) % 3]);
      nbr[tri[i]].push_back(tri[(i + 2) % 3]);
    }
  }
  for (auto& v : nbr) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }

  std::vector<std::array<double, 3>> out(n);
  for (std::size_t v = 0; v < n; ++v) {
    std::vector<std::uint32_t> patch = nbr[v];
    patch.push_back(static_cast<std::uint32_t>(v));
    if (patch.size() < 5) {
      std::vector<std::uint32_t> grown = patch;
      for (auto w : patch)
        for (auto w2 : nbr[w]) grown.push_back(w2);
      std::sort(grown.begin(), grown.end());
      grown.erase(std::unique(grown.begin(), grown.end()), grown.end());
      patch = std::move(grown);
    }
    Eigen::Matrix3d A = Eigen::Matrix3d::Zero();
    Eigen::Vector3d bx = Eigen::Vector3d::Zero(), by = Eigen::Vector3d::Zero();
    const Vec2 p0 = mesh.nodes[v];
    for (auto w : patch) {
      const Vec2 d = mesh.nodes[w] - p0;
      const Eigen::Vector3d row(1.0, d.x, d.y);
      A += row * row.transpose();
      bx += row * grad[w].x;
      by += row * grad[w].y;
    }
    const Eigen::Vector3d cx = A.ldlt().solve(bx);
    const Eigen::Vector3d cy = A.ldlt().solve(by);
    out[v] = {cx[1], 0.5 * (cx[2] + cy[1]), cy[2]};
  }
  return out;
}

// variational flux: solve the boundary mass system M_b q = (K u - F)|_B
std::vector<double> variational_flux(const TriangleMesh& mesh, const Assembly& asmb,
                                     const Eigen::VectorXd& u) {
  const std::size_t nb = mesh.boundary_chain.size();
  const Eigen::VectorXd residual = asmb.K * u - asmb.F;

  std::vector<int> pos_of_node(mesh.n_nodes(), -1);
  for (std::size_t i = 0; i < nb; ++i) pos_of_node[mesh.boundary_chain[i]] = static_cast<int>(i);

  std::vector<Triplet> mt;
  mt.reserve(4 * nb);
  for (std::size_t i = 0; i < nb; ++i) {
    const std::size_t j = (i + 1) % nb;
    const double L =
        (mesh.nodes[mesh.boundary_chain[j]] - mesh.nodes[mesh.boundary_chain[i]]).norm();
    mt.emplace_back(static_cast<int>(i), static_cast<int>(i), L / 3.0);
    mt.emplace_back(static_cast<int>(j), static_cast<int>(j), L / 3.0);
    mt.emplace_back(static_cast<int>(i), static_cast<int>(j), L / 6.0);
    mt.emplace_back(static_cast<int>(j), static_cast<int>(i), L / 6.0);
  }
  SpMat Mb(static_cast<Eigen::Index>(nb), static_cast<Eigen::Index>(nb));
  Mb.setFromTriplets(mt.begin(), mt.end());

  Eigen::VectorXd rhs(static_cast<Eigen::Index>(nb));
  for (std::size_t i = 0; i < nb; ++i) rhs[static_cast<Eigen::Index>(i)] = residual[mesh.boundary_chain[i]];

  Eigen::SimplicialLDLT<SpMat> solver(Mb);
  if (solver.info() != Eigen::Success)
    throw SolverFailure("variational_flux: boundary mass factorization failed");
  const Eigen::VectorXd q = solver.solve(rhs);
  std::vector<double> out(nb);
  for (std::size_t i = 0; i < nb; ++i) out[i] = q[static_cast<Eigen::Index>(i)];
  return out;
}

FemField postprocess(const TriangleMesh& mesh, const Assembly& asmb, const Eigen::VectorXd& u,
                     bool with_flux) {
  FemField field;
  field.mesh = &mesh;
  field.nodal_values.assign(u.data(), u.data() + u.size());
  field.recovered_gradient = recover_gradient(mesh, field.nodal_values);
  field.recovered_hessian = recover_hessian(mesh, field.recovered_gradient);
  if (with_flux) field.boundary_flux = variational_flux(mesh, asmb, u);
  return field;
}

}  // namespace

double FemField::max_value() const {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : nodal_values) m = std::max(m, v);
  return m;
}

FemField solve_poisson(const TriangleMesh& mesh, const SourceSpec& f) {
  Assembly asmb = assemble(mesh, f);
  const std::size_t ni = asmb.interior_nodes.size();
  if (ni == 0) throw SolverFailure("solve_poisson: no interior nodes");

  const SpMat Kii = restrict_interior(asmb.K, asmb);
  Eigen::VectorXd Fi(static_cast<Eigen::Index>(ni));
  for (std::size_t i = 0; i < ni; ++i) Fi[static_cast<Eigen::Index>(i)] = asmb.F[asmb.interior_nodes[i]];

  Eigen::SimplicialLDLT<SpMat> solver(Kii);
  if (solver.info() != Eigen::Success)
    throw SolverFailure("solve_poisson: factorization failed");
  const Eigen::VectorXd ui = solver.solve(Fi);

  const double fnorm = Fi.norm();
  const double res = fnorm > 0 ? (Kii * ui - Fi).norm() / fnorm : 0.0;
  if (res > 1e-10 && fnorm > 0)
    throw SolverFailure("solve_poisson: relative residual " + std::to_string(res));

  Eigen::VectorXd u = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh.n_nodes()));
  for (std::size_t i = 0; i < ni; ++i) u[asmb.interior_nodes[i]] = ui[static_cast<Eigen::Index>(i)];

  FemField field = postprocess(mesh, asmb, u, true);
  field.solver_residual = res;
  return field;
}

EigenResult solve_eigen(const TriangleMesh& mesh, bool check_gap, double rayleigh_tol) {
  Assembly asmb = assemble(mesh, SourceSpec::zero());
  const std::size_t ni = asmb.interior_nodes.size();
  if (ni == 0) throw SolverFailure("solve_eigen: no interior nodes");
  const SpMat Kii = restrict_interior(asmb.K, asmb);
  const SpMat Mii = restrict_interior(asmb.M, asmb);

  Eigen::SimplicialLDLT<SpMat> solver(Kii);
  if (solver.info() != Eigen::Success)
    throw SolverFailure("solve_eigen: stiffness factorization failed");

  // inverse power iteration, shift 0; the factorization is reused across solves
  Eigen::VectorXd x = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(ni));
  x /= std::sqrt(x.dot(Mii * x));
  double lambda = 0.0;
  int iterations = 0;
  for (; iterations < 2000; ++iterations) {
    const Eigen::VectorXd y = solver.solve(Mii * x);
    const double mnorm = std::sqrt(y.dot(Mii * y));
    x = y / mnorm;
    lambda = x.dot(Kii * x);
    const double res = (Kii * x - lambda * (Mii * x)).norm() / (lambda * (Mii * x).norm());
    if (res < rayleigh_tol) break;
  }
  {
    const double res = (Kii * x - lambda * (Mii * x)).norm() / (lambda * (Mii * x).norm());
    if (res >= rayleigh_tol)
      throw SolverFailure("solve_eigen: inverse iteration stalled, residual " +
                          std::to_string(res));
  }
  if (x.sum() < 0) x = -x;

  EigenResult out;
  out.lambda1 = lambda;
  out.iterations = iterations + 1;
  out.rayleigh_residual = (Kii * x - lambda * (Mii * x)).norm() / (lambda * (Mii * x).norm());

  if (check_gap) {
    Eigen::VectorXd z(static_cast<Eigen::Index>(ni));
    for (std::size_t i = 0; i < ni; ++i)
      z[static_cast<Eigen::Index>(i)] = mesh.nodes[asmb.interior_nodes[i]].x;
    for (int it = 0; it < 60; ++it) {
      z -= x * (x.dot(Mii * z));
      const Eigen::VectorXd y = solver.solve(Mii * z);
      z = y / std::sqrt(y.dot(Mii * y));
    }
    z -= x * (x.dot(Mii * z));
    z /= std::sqrt(z.dot(Mii * z));
    out.lambda2 = z.dot(Kii * z);
    out.nonsimple_warning = (out.lambda2 - out.lambda1) < 1e-6 * out.lambda1;
  }

  Eigen::VectorXd u = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh.n_nodes()));
  for (std::size_t i = 0; i < ni; ++i) u[asmb.interior_nodes[i]] = x[static_cast<Eigen::Index>(i)];
  // the flux system needs F = lambda M u for the eigenproblem residual
  asmb.F = lambda * (asmb.M * u);
  out.mode = postprocess(mesh, asmb, u, true);
  out.mode.solver_residual = out.rayleigh_residual;
  return out;
}

double dirichlet_energy(const FemField& field, const SourceSpec& f, double* audit) {
  const TriangleMesh& mesh = *field.mesh;
  Assembly asmb = assemble(mesh, f);
  Eigen::Map<const Eigen::VectorXd> u(field.nodal_values.data(),
                                      static_cast<Eigen::Index>(field.nodal_values.size()));
  const double fu = asmb.F.dot(u);
  if (audit) *audit = 0.5 * u.dot(asmb.K * u) - fu;
  return -0.5 * fu;
}

ConvexDomain level_set_domain(const FemField& field, double eps) {
  const TriangleMesh& mesh = *field.mesh;
  const double umax = field.max_value();
  if (eps >= umax) throw EmptyLevelSet("level_set_domain: eps >= max U");
  if (eps <= 0.0) throw Error("level_set_domain: eps must be positive");

  const auto& u = field.nodal_values;
  std::vector<Vec2> pts;
  for (const auto& tri : mesh.triangles) {
    for (int i = 0; i < 3; ++i) {
      const std::uint32_t a = tri[i], b = tri[(i + 1) % 3];
      if (a > b) continue;  // visit each edge once
      const double ua = u[a] - eps, ub = u[b] - eps;
      if (ua * ub < 0.0) {
        const double t = ua / (ua - ub);
        pts.push_back(mesh.nodes[a] + (mesh.nodes[b] - mesh.nodes[a]) * t);
      }
    }
  }
  if (pts.size() < 3) throw EmptyLevelSet("level_set_domain: contour has fewer than 3 points");

  // convex-hull repair (Andrew's monotone chain)
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  std::vector<Vec2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0) --k;
    hull[k++] = p;
  }
  const std::size_t lower = k + 1;
  for (auto it = pts.rbegin() + 1; it != pts.rend(); ++it) {
    while (k >= lower && cross(hull[k - 1] - hull[k - 2], *it - hull[k - 2]) <= 0) --k;
    hull[k++] = *it;
  }
  hull.resize(k - 1);
  if (hull.size() < 3) throw EmptyLevelSet("level_set_domain: degenerate contour");
  return make_domain(std::move(hull));
}

FemField solve_dirichlet(const TriangleMesh& mesh, const std::vector<double>& boundary_data,
                         const std::vector<double>* interior_load) {
  if (boundary_data.size() != mesh.boundary_chain.size())
    throw Error("solve_dirichlet: boundary data size mismatch");
  Assembly asmb = assemble(mesh, SourceSpec::zero());
  const std::size_t ni = asmb.interior_nodes.size();

  Eigen::VectorXd u = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh.n_nodes()));
  for (std::size_t i = 0; i < mesh.boundary_chain.size(); ++i)
    u[mesh.boundary_chain[i]] = boundary_data[i];

  Eigen::VectorXd rhs = -(asmb.K * u);
  if (interior_load) {
    Eigen::Map<const Eigen::VectorXd> load(interior_load->data(),
                                           static_cast<Eigen::Index>(interior_load->size()));
    rhs += asmb.M * load;
  }
  Eigen::VectorXd rhs_i(static_cast<Eigen::Index>(ni));
  for (std::size_t i = 0; i < ni; ++i) rhs_i[static_cast<Eigen::Index>(i)] = rhs[asmb.interior_nodes[i]];

  const SpMat Kii = restrict_interior(asmb.K, asmb);
  Eigen::SimplicialLDLT<SpMat> solver(Kii);
  if (solver.info() != Eigen::Success)
    throw SolverFailure("solve_dirichlet: factorization failed");
  const Eigen::VectorXd ui = solver.solve(rhs_i);
  const double scale = std::max(rhs_i.norm(), 1e-300);
  const double res = (Kii * ui - rhs_i).norm() / scale;

  for (std::size_t i = 0; i < ni; ++i) u[asmb.interior_nodes[i]] = ui[static_cast<Eigen::Index>(i)];
  FemField field = postprocess(mesh, asmb, u, false);
  field.solver_residual = res;
  return field;
}

FemField solve_eigen_derived(const TriangleMesh& mesh, const EigenResult& eig, double lam_d1,
                             const std::vector<double>& boundary_data) {
  if (boundary_data.size() != mesh.boundary_chain.size())
    throw Error("solve_eigen_derived: boundary data size mismatch");
  Assembly asmb = assemble(mesh, SourceSpec::zero());
  const std::size_t ni = asmb.interior_nodes.size();
  const std::size_t n = mesh.n_nodes();

  Eigen::Map<const Eigen::VectorXd> u1(eig.mode.nodal_values.data(), static_cast<Eigen::Index>(n));
  const Eigen::VectorXd Mu1 = asmb.M * u1;

  Eigen::VectorXd g = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < mesh.boundary_chain.size(); ++i)
    g[mesh.boundary_chain[i]] = boundary_data[i];

  const SpMat A_full = asmb.K - eig.lambda1 * asmb.M;
  const Eigen::VectorXd rhs_full = lam_d1 * Mu1 - A_full * g;

  // saddle system: [A, Mu1; Mu1^T, 0] enforcing int U1 U1' = 0
  std::vector<Triplet> st;
  const SpMat Aii = restrict_interior(A_full, asmb);
  for (int k = 0; k < Aii.outerSize(); ++k)
    for (SpMat::InnerIterator it(Aii, k); it; ++it)
      st.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
  for (std::size_t i = 0; i < ni; ++i) {
    const double v = Mu1[asmb.interior_nodes[i]];
    st.emplace_back(static_cast<int>(i), static_cast<int>(ni), v);
    st.emplace_back(static_cast<int>(ni), static_cast<int>(i), v);
  }
  SpMat S(static_cast<Eigen::Index>(ni + 1), static_cast<Eigen::Index>(ni + 1));
  S.setFromTriplets(st.begin(), st.end());

  Eigen::VectorXd rhs(static_cast<Eigen::Index>(ni + 1));
  for (std::size_t i = 0; i < ni; ++i) rhs[static_cast<Eigen::Index>(i)] = rhs_full[asmb.interior_nodes[i]];
  double c0 = 0.0;  // constraint: (Mu1 . u_int) = -(Mu1 . g)
  for (std::size_t i = 0; i < mesh.boundary_chain.size(); ++i)
    c0 -= Mu1[mesh.boundary_chain[i]] * boundary_data[i];
  rhs[static_cast<Eigen::Index>(ni)] = c0;

  Eigen::SparseLU<SpMat> solver;
  solver.analyzePattern(S);
  solver.factorize(S);
  if (solver.info() != Eigen::Success)
    throw SolverFailure("solve_eigen_derived: saddle factorization failed");
  const Eigen::VectorXd sol = solver.solve(rhs);
  const double res = (S * sol - rhs).norm() / std::max(rhs.norm(), 1e-300);
  if (res > 1e-8)
    throw SolverFailure("solve_eigen_derived: residual " + std::to_string(res));

  Eigen::VectorXd u = g;
  for (std::size_t i = 0; i < ni; ++i) u[asmb.interior_nodes[i]] = sol[static_cast<Eigen::Index>(i)];
  FemField field = postprocess(mesh, asmb, u, false);
  field.solver_residual = res;
  return field;
}

double gradient_energy(const TriangleMesh& mesh, const std::vector<double>& nodal) {
  double e = 0.0;
  for (std::size_t t = 0; t < mesh.n_triangles(); ++t) {
    Vec2 g[3];
    double area;
    element_gradients(mesh, t, g, area);
    const auto& tri = mesh.triangles[t];
    const Vec2 gu = g[0] * nodal[tri[0]] + g[1] * nodal[tri[1]] + g[2] * nodal[tri[2]];
    e += area * gu.squared_norm();
  }
  return e;
}

double l2_inner(const TriangleMesh& mesh, const std::vector<double>& u,
                const std::vector<double>& v) {
  double e = 0.0;
  for (const auto& tri : mesh.triangles) {
    const Vec2& a = mesh.nodes[tri[0]];
    const Vec2& b = mesh.nodes[tri[1]];
    const Vec2& c = mesh.nodes[tri[2]];
    const double area = 0.5 * cross(b - a, c - a);
    const double su = u[tri[0]] + u[tri[1]] + u[tri[2]];
    const double sv = v[tri[0]] + v[tri[1]] + v[tri[2]];
    double dotv = 0.0;
    for (int i = 0; i < 3; ++i) dotv += u[tri[i]] * v[tri[i]];
    e += area / 12.0 * (su * sv + dotv);
  }
  return e;
}

double weak_residual(const FemField& field, const SourceSpec& f,
                     const std::vector<double>& test) {
  const TriangleMesh& mesh = *field.mesh;
  Assembly asmb = assemble(mesh, f);
  Eigen::Map<const Eigen::VectorXd> u(field.nodal_values.data(),
                                      static_cast<Eigen::Index>(field.nodal_values.size()));
  Eigen::Map<const Eigen::VectorXd> w(test.data(), static_cast<Eigen::Index>(test.size()));
  return (asmb.K * u - asmb.F).dot(w);
}

}  // namespace shapeopt
