#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <functional>
#include <memory>
#include <optional>

#include "morsefield/mesh.hpp"

namespace morsefield {

/// Piecewise-linear finite-element function on a mesh.
struct ScalarField {
  std::shared_ptr<const Mesh> mesh;
  Eigen::VectorXd values;

  ScalarField() = default;
  ScalarField(std::shared_ptr<const Mesh> m, Eigen::VectorXd v)
      : mesh(std::move(m)), values(std::move(v)) {}
  /// Constant field.
  static ScalarField constant(std::shared_ptr<const Mesh> m, double c);
  /// Sample a function at the vertices.
  static ScalarField sample(std::shared_ptr<const Mesh> m,
                            const std::function<double(Vec2)>& f);

  /// Piecewise-linear interpolation; throws GeometryError outside the mesh.
  double eval(const Vec2& p) const;
  /// Interpolation through the nearest triangle (for points on the exact
  /// boundary curve just outside the inscribed polygon).
  double eval_clamped(const Vec2& p) const;
};

/// Conformal metric g = psi * (Euclidean), psi > 0 sampled at vertices.
/// An optional closed-form evaluator is used by quadratures when present.
struct ConformalMetric {
  ScalarField psi;
  std::function<double(Vec2)> analytic_psi;  // may be empty

  static ConformalMetric flat(std::shared_ptr<const Mesh> m);
  static ConformalMetric from_function(std::shared_ptr<const Mesh> m,
                                       std::function<double(Vec2)> f);
  static ConformalMetric from_values(std::shared_ptr<const Mesh> m,
                                     Eigen::VectorXd values);

  const Mesh& mesh() const { return *psi.mesh; }
  /// psi at an arbitrary point: analytic when available, else interpolated.
  double psi_at(const Vec2& p) const;
  void validate() const;  // psi > 0 everywhere
};

/// Discrete operators of the Neumann Laplace-Beltrami problem.  The
/// stiffness matrix is the Euclidean Dirichlet form (conformally invariant
/// in 2d); metric information enters only through the lumped mass vectors.
struct OperatorBundle {
  std::shared_ptr<const Mesh> mesh;
  ConformalMetric metric;
  Eigen::SparseMatrix<double> stiffness;  // n x n, SPSD, kernel = constants
  Eigen::VectorXd lumped_mass;            // dv_g weights (psi-weighted)
  Eigen::VectorXd euclidean_mass;         // dx weights (psi-independent)
  Eigen::VectorXd boundary_mass;          // ds_g weights (sqrt(psi)-weighted)
  double area_g = 0.0;                    // |Sigma|_g
};

OperatorBundle assemble(std::shared_ptr<const Mesh> mesh,
                        ConformalMetric metric);

/// integral of a field against dv_g via the lumped mass vector
double integrate(const ScalarField& field, const OperatorBundle& ops);
/// integral against ds_g via the lumped boundary mass vector
double integrate_boundary(const ScalarField& field, const OperatorBundle& ops);

struct SolveInfo {
  double multiplier = 0.0;           // Lagrange multiplier (0 for exact data)
  double compatibility_defect = 0.0; // 1^T F before orthogonalization
};

/// Factored solver for the mean-constrained Neumann problem
///   K u + lambda m = F,   m^T u = c,
/// where m is the lumped dv_g mass vector.  Factor once, then solve for many
/// right-hand sides; solves are const and safe to run concurrently.
class NeumannSolver {
 public:
  explicit NeumannSolver(OperatorBundle ops);

  const OperatorBundle& ops() const { return ops_; }
  const Mesh& mesh() const { return *ops_.mesh; }
  double area_g() const { return ops_.area_g; }

  /// Core solve: assembled load functional F plus the prescribed mean value
  /// of the solution.  F is orthogonalized against constants first.
  ScalarField solve_load(const Eigen::VectorXd& load, double mean_value,
                         SolveInfo* info = nullptr) const;

  /// Neumann problem -Delta_g u = f, d_nu_g u = flux, int u dv_g = mean.
  /// Checks the compatibility of (f, flux) before solving.
  ScalarField solve_neumann(const ScalarField& volume_rhs,
                            const ScalarField& boundary_flux,
                            double target_mean,
                            SolveInfo* info = nullptr) const;

 private:
  OperatorBundle ops_;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
};

}  // namespace morsefield
