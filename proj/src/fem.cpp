#include "morsefield/fem.hpp"

#include <cmath>
#include <vector>

namespace morsefield {

ScalarField ScalarField::constant(std::shared_ptr<const Mesh> m, double c) {
  Eigen::VectorXd v = Eigen::VectorXd::Constant(m->num_vertices(), c);
  return ScalarField(std::move(m), std::move(v));
}

ScalarField ScalarField::sample(std::shared_ptr<const Mesh> m,
                                const std::function<double(Vec2)>& f) {
  Eigen::VectorXd v(m->num_vertices());
  for (int i = 0; i < m->num_vertices(); ++i) v[i] = f(m->vertex(i));
  return ScalarField(std::move(m), std::move(v));
}

double ScalarField::eval(const Vec2& p) const {
  auto loc = mesh->locate(p);
  if (!loc) throw GeometryError("field evaluation outside the mesh");
  double u = 0.0;
  for (int e = 0; e < 3; ++e)
    u += loc->barycentric[e] * values[mesh->triangles()(loc->triangle, e)];
  return u;
}

double ScalarField::eval_clamped(const Vec2& p) const {
  const LocateResult loc = mesh->locate_clamped(p);
  double u = 0.0;
  for (int e = 0; e < 3; ++e)
    u += loc.barycentric[e] * values[mesh->triangles()(loc.triangle, e)];
  return u;
}

ConformalMetric ConformalMetric::flat(std::shared_ptr<const Mesh> m) {
  ConformalMetric g;
  g.psi = ScalarField::constant(std::move(m), 1.0);
  g.analytic_psi = [](Vec2) { return 1.0; };
  return g;
}

ConformalMetric ConformalMetric::from_function(std::shared_ptr<const Mesh> m,
                                               std::function<double(Vec2)> f) {
  ConformalMetric g;
  g.psi = ScalarField::sample(std::move(m), f);
  g.analytic_psi = std::move(f);
  g.validate();
  return g;
}

ConformalMetric ConformalMetric::from_values(std::shared_ptr<const Mesh> m,
                                             Eigen::VectorXd values) {
  ConformalMetric g;
  g.psi = ScalarField(std::move(m), std::move(values));
  g.validate();
  return g;
}

double ConformalMetric::psi_at(const Vec2& p) const {
  if (analytic_psi) return analytic_psi(p);
  return psi.eval(p);
}

void ConformalMetric::validate() const {
  if (psi.values.size() != psi.mesh->num_vertices())
    throw UsageError("psi sample count does not match the mesh");
  if ((psi.values.array() <= 0.0).any())
    throw NumericalError("conformal factor psi must be positive everywhere");
}

OperatorBundle assemble(std::shared_ptr<const Mesh> mesh,
                        ConformalMetric metric) {
  metric.validate();
  if (metric.psi.mesh.get() != mesh.get())
    throw UsageError("metric sampled on a different mesh");

  const int nv = mesh->num_vertices();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(mesh->num_triangles()) * 9);

  Eigen::VectorXd omega = Eigen::VectorXd::Zero(nv);  // Euclidean lumped areas
  for (int t = 0; t < mesh->num_triangles(); ++t) {
    const int i0 = mesh->triangles()(t, 0);
    const int i1 = mesh->triangles()(t, 1);
    const int i2 = mesh->triangles()(t, 2);
    const Vec2 a = mesh->vertex(i0), b = mesh->vertex(i1), c = mesh->vertex(i2);
    const double area = mesh->triangle_area(t);
    if (area <= 0.0) throw NumericalError("degenerate triangle in assembly");

    // constant gradients of the P1 basis on this triangle
    Eigen::Matrix<double, 2, 3> grad;
    grad.col(0) = Vec2(b.y() - c.y(), c.x() - b.x());
    grad.col(1) = Vec2(c.y() - a.y(), a.x() - c.x());
    grad.col(2) = Vec2(a.y() - b.y(), b.x() - a.x());
    grad /= 2.0 * area;

    const int idx[3] = {i0, i1, i2};
    for (int r = 0; r < 3; ++r)
      for (int s = 0; s < 3; ++s)
        trip.emplace_back(idx[r], idx[s],
                          area * grad.col(r).dot(grad.col(s)));
    for (int r = 0; r < 3; ++r) omega[idx[r]] += area / 3.0;
  }

  OperatorBundle ops;
  ops.mesh = mesh;
  ops.stiffness.resize(nv, nv);
  ops.stiffness.setFromTriplets(trip.begin(), trip.end());
  ops.euclidean_mass = omega;
  ops.lumped_mass = omega.cwiseProduct(metric.psi.values);
  ops.area_g = ops.lumped_mass.sum();

  ops.boundary_mass = Eigen::VectorXd::Zero(nv);
  for (int e = 0; e < mesh->num_boundary_edges(); ++e) {
    const int i = mesh->boundary_edges()(e, 0);
    const int j = mesh->boundary_edges()(e, 1);
    const double len = (mesh->vertex(i) - mesh->vertex(j)).norm();
    ops.boundary_mass[i] += 0.5 * len * std::sqrt(metric.psi.values[i]);
    ops.boundary_mass[j] += 0.5 * len * std::sqrt(metric.psi.values[j]);
  }
  ops.metric = std::move(metric);
  return ops;
}

double integrate(const ScalarField& field, const OperatorBundle& ops) {
  if (field.mesh.get() != ops.mesh.get())
    throw UsageError("field and operator bundle live on different meshes");
  return ops.lumped_mass.dot(field.values);
}

double integrate_boundary(const ScalarField& field, const OperatorBundle& ops) {
  if (field.mesh.get() != ops.mesh.get())
    throw UsageError("field and operator bundle live on different meshes");
  return ops.boundary_mass.dot(field.values);
}

NeumannSolver::NeumannSolver(OperatorBundle ops) : ops_(std::move(ops)) {
  const int n = ops_.mesh->num_vertices();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(ops_.stiffness.nonZeros() + 2 * n);
  for (int k = 0; k < ops_.stiffness.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(ops_.stiffness, k); it;
         ++it)
      trip.emplace_back(static_cast<int>(it.row()),
                        static_cast<int>(it.col()), it.value());
  for (int i = 0; i < n; ++i) {
    trip.emplace_back(i, n, ops_.lumped_mass[i]);
    trip.emplace_back(n, i, ops_.lumped_mass[i]);
  }
  Eigen::SparseMatrix<double> saddle(n + 1, n + 1);
  saddle.setFromTriplets(trip.begin(), trip.end());
  lu_.compute(saddle);
  if (lu_.info() != Eigen::Success)
    throw NumericalError("factorization of the constrained system failed");
}

ScalarField NeumannSolver::solve_load(const Eigen::VectorXd& load,
                                      double mean_value,
                                      SolveInfo* info) const {
  const int n = ops_.mesh->num_vertices();
  if (load.size() != n) throw UsageError("load vector size mismatch");

  const double defect = load.sum();
  Eigen::VectorXd rhs(n + 1);
  rhs.head(n) = load - (defect / ops_.area_g) * ops_.lumped_mass;
  rhs[n] = mean_value;

  Eigen::VectorXd sol = lu_.solve(rhs);
  if (lu_.info() != Eigen::Success)
    throw NumericalError("back substitution failed");
  if (info) {
    info->multiplier = sol[n];
    info->compatibility_defect = defect;
  }
  return ScalarField(ops_.mesh, sol.head(n));
}

ScalarField NeumannSolver::solve_neumann(const ScalarField& volume_rhs,
                                         const ScalarField& boundary_flux,
                                         double target_mean,
                                         SolveInfo* info) const {
  if (volume_rhs.mesh.get() != ops_.mesh.get() ||
      boundary_flux.mesh.get() != ops_.mesh.get())
    throw UsageError("data fields live on a different mesh");
  if (!std::isfinite(target_mean))
    throw UsageError("target mean must be finite");

  Eigen::VectorXd load = ops_.lumped_mass.cwiseProduct(volume_rhs.values) +
                         ops_.boundary_mass.cwiseProduct(boundary_flux.values);
  const double scale =
      (ops_.lumped_mass.cwiseProduct(volume_rhs.values)).lpNorm<1>() +
      (ops_.boundary_mass.cwiseProduct(boundary_flux.values)).lpNorm<1>();
  const double tol_compat = 1e-8 * std::max(scale, 1e-300);
  if (std::fabs(load.sum()) > tol_compat)
    throw NumericalError(
        "Neumann data violates the compatibility condition beyond tolerance");
  return solve_load(load, target_mean, info);
}

}  // namespace morsefield
