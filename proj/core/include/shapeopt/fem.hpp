#pragma once

#include <array>
#include <vector>

#include "shapeopt/geometry.hpp"
#include "shapeopt/mesh.hpp"

namespace shapeopt {

/// Right-hand side of the Poisson state problem. f must be positive on the
/// outer box and, in the quadratic case, concave (coeff_r2 >= 0 removes
/// a - b |x - x0|^2 convexity violations).
struct SourceSpec {
  enum class Kind { Constant, ConcaveQuadratic };
  Kind kind = Kind::Constant;
  double value = 1.0;      // constant c > 0
  double coeff_r2 = 0.0;   // b >= 0 in a - b |x - x0|^2
  Vec2 center{0, 0};       // x0

  double operator()(const Vec2& p) const {
    if (kind == Kind::Constant) return value;
    return value - coeff_r2 * (p - center).squared_norm();
  }
  static SourceSpec constant(double c) { return {Kind::Constant, c, 0.0, {0, 0}}; }
  static SourceSpec concave_quadratic(double a, double b, Vec2 x0) {
    return {Kind::ConcaveQuadratic, a, b, x0};
  }
  static SourceSpec zero() { return constant(0.0); }
};

/// Scalar P1 field with zero Dirichlet trace, plus recovered derivatives
/// and the variationally consistent boundary flux.
struct FemField {
  const TriangleMesh* mesh = nullptr;
  std::vector<double> nodal_values;              // 0 at boundary nodes
  std::vector<Vec2> recovered_gradient;          // per node
  std::vector<std::array<double, 3>> recovered_hessian;  // (uxx, uxy, uyy) per node
  std::vector<double> boundary_flux;             // dnU per boundary-chain entry, signed
  double solver_residual = 0.0;

  double max_value() const;
  double value_at(const Vec2& p) const { return interpolate(*mesh, nodal_values, p); }
};

struct EigenResult {
  double lambda1 = 0.0;
  FemField mode;                 // positive, unit L2 norm
  double rayleigh_residual = 0.0;
  int iterations = 0;
  bool nonsimple_warning = false;  // lambda2 - lambda1 < 1e-6 lambda1
  double lambda2 = 0.0;            // populated when the gap check runs
};

/// P1 Galerkin solve of -Delta U = f, U = 0 on the boundary.
FemField solve_poisson(const TriangleMesh& mesh, const SourceSpec& f);

/// Smallest Dirichlet eigenpair by inverse power iteration on (K, M).
EigenResult solve_eigen(const TriangleMesh& mesh, bool check_gap = true,
                        double rayleigh_tol = 1e-8);

/// E_f = -1/2 int f U at the solution; `audit` receives the assembled
/// 1/2 int |grad U|^2 - int f U for the consistency check.
double dirichlet_energy(const FemField& field, const SourceSpec& f, double* audit = nullptr);

/// Polygonal approximation of the super-level set { U > eps } by
/// marching-triangles contouring followed by convex-hull repair.
ConvexDomain level_set_domain(const FemField& field, double eps);

/// Harmonic extension of Dirichlet data g given on boundary-chain nodes
/// (interior load optional): solves -Delta w = load, w = g on the boundary.
FemField solve_dirichlet(const TriangleMesh& mesh, const std::vector<double>& boundary_data,
                         const std::vector<double>* interior_load = nullptr);

/// Eigen-derived state U1' of the eigenvalue shape derivative: solves
/// (-Delta - lambda1) u = lam_d1 * U1 with Dirichlet data g, regularized by
/// the constraint int U1 u = 0.
FemField solve_eigen_derived(const TriangleMesh& mesh, const EigenResult& eig, double lam_d1,
                             const std::vector<double>& boundary_data);

/// int_Omega |grad u|^2 of a P1 field (values at all nodes).
double gradient_energy(const TriangleMesh& mesh, const std::vector<double>& nodal);

/// int_Omega u v through the consistent mass matrix.
double l2_inner(const TriangleMesh& mesh, const std::vector<double>& u,
                const std::vector<double>& v);

/// Residual of the discrete weak form against a test vector (zero on the
/// boundary); used by the Galerkin-orthogonality audit.
double weak_residual(const FemField& field, const SourceSpec& f,
                     const std::vector<double>& test);

}  // namespace shapeopt
