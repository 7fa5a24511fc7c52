#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "morsefield/fem.hpp"

using namespace morsefield;
namespace {
constexpr double kPi = std::numbers::pi;

// L2 norm of (field - exact) through the lumped mass
double l2_error(const ScalarField& u, const OperatorBundle& ops,
                const std::function<double(Vec2)>& exact) {
  double acc = 0.0;
  for (int i = 0; i < u.mesh->num_vertices(); ++i) {
    const double d = u.values[i] - exact(u.mesh->vertex(i));
    acc += ops.lumped_mass[i] * d * d;
  }
  return std::sqrt(acc);
}
}  // namespace

TEST_CASE("mass and stiffness sanity on the unit disk") {
  auto mesh = build_domain(BoundaryCurve::circle(1.0), 0.05);
  auto flat = assemble(mesh, ConformalMetric::flat(mesh));

  CHECK(flat.lumped_mass.sum() == doctest::Approx(kPi).epsilon(0.005));

  // stiffness row sums vanish (constants in the kernel)
  Eigen::VectorXd ones = Eigen::VectorXd::Ones(mesh->num_vertices());
  const Eigen::VectorXd k1 = flat.stiffness * ones;
  CHECK(k1.lpNorm<Eigen::Infinity>() < 1e-12 * flat.stiffness.coeffs().abs().maxCoeff());

  // psi == 4 scales the mass exactly, leaves the stiffness untouched
  auto scaled = assemble(
      mesh, ConformalMetric::from_function(mesh, [](Vec2) { return 4.0; }));
  CHECK((scaled.lumped_mass - 4.0 * flat.lumped_mass).lpNorm<Eigen::Infinity>() ==
        0.0);
  Eigen::SparseMatrix<double> kdiff = scaled.stiffness - flat.stiffness;
  CHECK(Eigen::Map<const Eigen::VectorXd>(kdiff.valuePtr(), kdiff.nonZeros())
            .lpNorm<Eigen::Infinity>() == 0.0);

  // harmonic coordinate: interior rows of K x vanish
  Eigen::VectorXd xs(mesh->num_vertices());
  for (int i = 0; i < mesh->num_vertices(); ++i) xs[i] = mesh->vertex(i).x();
  const Eigen::VectorXd r = flat.stiffness * xs;
  for (int i = 0; i < mesh->num_vertices(); ++i)
    if (!mesh->is_boundary_vertex(i)) CHECK(std::fabs(r[i]) < 1e-12);
}

TEST_CASE("integrate fields against dv_g") {
  auto mesh = build_domain(BoundaryCurve::circle(1.0), 0.05);
  auto flat = assemble(mesh, ConformalMetric::flat(mesh));

  CHECK(integrate(ScalarField::constant(mesh, 1.0), flat) ==
        doctest::Approx(kPi).epsilon(0.005));
  CHECK(std::fabs(integrate(
            ScalarField::sample(mesh, [](Vec2 p) { return p.x(); }), flat)) <
        1e-3);

  // psi = 1 + x^2: integral of 1 dv_g = pi + pi/4 (polar-coordinate oracle)
  auto curved = assemble(mesh, ConformalMetric::from_function(
                                   mesh, [](Vec2 p) { return 1.0 + p.x() * p.x(); }));
  CHECK(integrate(ScalarField::constant(mesh, 1.0), curved) ==
        doctest::Approx(kPi + kPi / 4.0).epsilon(0.01));

  auto other = build_domain(BoundaryCurve::circle(1.0), 0.4);
  CHECK_THROWS_AS(integrate(ScalarField::constant(other, 1.0), flat),
                  UsageError);
}

TEST_CASE("trivial Neumann solves") {
  auto mesh = build_domain(BoundaryCurve::circle(1.0), 0.1);
  NeumannSolver solver(assemble(mesh, ConformalMetric::flat(mesh)));
  const double area = solver.area_g();

  auto zero = ScalarField::constant(mesh, 0.0);
  auto u0 = solver.solve_neumann(zero, zero, 0.0);
  CHECK(u0.values.lpNorm<Eigen::Infinity>() < 1e-12);

  auto uc = solver.solve_neumann(zero, zero, 2.5 * area);
  CHECK((uc.values.array() - 2.5).abs().maxCoeff() < 1e-10);
}

TEST_CASE("manufactured solution u = x^2 + y^2 converges at second order") {
  auto exact = [](Vec2 p) { return p.squaredNorm(); };
  // -Delta u = -4 in the disk, d_nu u = 2 on the circle, mean pi/2
  double prev_l2 = -1.0;
  double prev_linf = -1.0;
  auto mesh = build_domain(BoundaryCurve::circle(1.0), 0.1);
  for (int level = 0; level < 3; ++level) {
    auto ops = assemble(mesh, ConformalMetric::flat(mesh));
    NeumannSolver solver(ops);
    auto u = solver.solve_neumann(ScalarField::constant(mesh, -4.0),
                                  ScalarField::constant(mesh, 2.0), kPi / 2.0);
    const double el2 = l2_error(u, ops, exact);
    double elinf = 0.0;
    for (int i = 0; i < mesh->num_vertices(); ++i)
      elinf = std::max(elinf,
                       std::fabs(u.values[i] - exact(mesh->vertex(i))));
    if (prev_l2 > 0.0) {
      const double factor = prev_l2 / el2;
      CHECK(factor >= 3.5);
      CHECK(factor <= 4.5);
      CHECK(elinf < prev_linf);
    }
    prev_l2 = el2;
    prev_linf = elinf;
    if (level < 2) mesh = refine(*mesh);
  }
  CHECK(prev_linf < 2e-3);  // O(h^2) at h ~ 0.025
}

TEST_CASE("mean constraint is exact and solves are self-adjoint") {
  auto mesh = build_domain(BoundaryCurve::circle(1.0), 0.1);
  auto ops = assemble(mesh, ConformalMetric::from_function(
                                mesh, [](Vec2 p) { return 1.0 + 0.3 * p.x(); }));
  NeumannSolver solver(ops);

  auto f1 = ScalarField::sample(mesh, [](Vec2 p) { return p.x(); });
  auto f2 = ScalarField::sample(mesh, [](Vec2 p) { return p.y() * p.x(); });
  // orthogonalization happens inside; prescribe zero means
  Eigen::VectorXd load1 = ops.lumped_mass.cwiseProduct(f1.values);
  Eigen::VectorXd load2 = ops.lumped_mass.cwiseProduct(f2.values);
  auto u1 = solver.solve_load(load1, 0.0);
  auto u2 = solver.solve_load(load2, 0.0);

  CHECK(std::fabs(integrate(u1, ops)) < 1e-10 * u1.values.lpNorm<Eigen::Infinity>());
  const double re_mean = integrate(solver.solve_load(load1, 3.7), ops);
  CHECK(re_mean == doctest::Approx(3.7).epsilon(1e-10));

  // <K u1, u2> == <K u2, u1>
  const double a12 = (ops.stiffness * u1.values).dot(u2.values);
  const double a21 = (ops.stiffness * u2.values).dot(u1.values);
  CHECK(a12 == doctest::Approx(a21).epsilon(1e-12));

  // discrete residual of the constrained system
  SolveInfo info;
  auto u = solver.solve_load(load1, 0.0, &info);
  Eigen::VectorXd resid = ops.stiffness * u.values +
                          info.multiplier * ops.lumped_mass -
                          (load1 - (load1.sum() / ops.area_g) * ops.lumped_mass);
  CHECK(resid.lpNorm<Eigen::Infinity>() <
        1e-10 * load1.lpNorm<Eigen::Infinity>());
}

TEST_CASE("incompatible data is rejected") {
  auto mesh = build_domain(BoundaryCurve::circle(1.0), 0.2);
  NeumannSolver solver(assemble(mesh, ConformalMetric::flat(mesh)));
  // volume integral 1 * pi with zero flux: incompatible
  CHECK_THROWS_AS(solver.solve_neumann(ScalarField::constant(mesh, 1.0),
                                       ScalarField::constant(mesh, 0.0), 0.0),
                  NumericalError);
  CHECK_THROWS_AS(solver.solve_neumann(ScalarField::constant(mesh, 0.0),
                                       ScalarField::constant(mesh, 0.0),
                                       std::nan("")),
                  UsageError);
}

TEST_CASE("psi must be positive") {
  auto mesh = build_domain(BoundaryCurve::circle(1.0), 0.3);
  CHECK_THROWS_AS(ConformalMetric::from_function(
                      mesh, [](Vec2 p) { return p.x(); }),
                  NumericalError);
}
