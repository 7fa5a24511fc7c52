#pragma once

#include <memory>
#include <optional>

#include "morsefield/cutoff.hpp"
#include "morsefield/fem.hpp"
#include "morsefield/source_quadrature.hpp"

namespace morsefield {

/// A Green-function source: interior point (kappa = 2 pi) or boundary point
/// (kappa = pi), with its cutoff radius delta.
struct SourcePoint {
  enum class Location { interior, boundary };

  Vec2 position = Vec2::Zero();
  Location location = Location::interior;
  double kappa = 0.0;
  double delta = 0.0;
  double boundary_param = 0.0;  // valid for boundary sources only

  bool is_boundary() const { return location == Location::boundary; }
};

/// -(1/kappa) chi(|x - xi|/delta) log|x - xi| in the identity chart.
double singular_part(const SourcePoint& source, const Vec2& x);
/// Gradient of the singular part in x.
Vec2 singular_part_gradient(const SourcePoint& source, const Vec2& x);

/// Green function split G(., xi) = singular_part + H(., xi); the regular
/// part H is the finite-element solution of the cutoff Neumann problem.
struct GreenBundle {
  SourcePoint source;
  ScalarField regular_part;       // H(., xi) at the vertices
  double constraint_value = 0.0;  // (1/kappa) int chi log |.-xi| dv_g
};

/// Quadratic least-squares recovery of a P1 field over the vertex patch
/// around p: returns the recovered value and gradient at p.
struct PatchRecovery {
  double value = 0.0;
  Vec2 gradient = Vec2::Zero();
};
PatchRecovery patch_recover(const ScalarField& field, const Vec2& p);

/// Factorize once per (mesh, metric) and construct Green bundles, Robin
/// values and Green evaluations for many sources.  All query methods are
/// const and safe to call concurrently.
class GreenSolver {
 public:
  GreenSolver(std::shared_ptr<const Mesh> mesh, ConformalMetric metric);

  const Mesh& mesh() const { return *mesh_; }
  std::shared_ptr<const Mesh> mesh_ptr() const { return mesh_; }
  const ConformalMetric& metric() const { return solver_.ops().metric; }
  const OperatorBundle& ops() const { return solver_.ops(); }
  const NeumannSolver& neumann() const { return solver_; }
  double r_domain() const { return mesh_->r_domain(); }
  double delta() const { return delta_; }

  /// Source factories; enforce the kappa dichotomy and the delta rule.
  SourcePoint interior_source(const Vec2& p) const;
  SourcePoint boundary_source(double t) const;

  /// Solve the cutoff Neumann problem for H(., xi).
  GreenBundle make_bundle(const SourcePoint& source) const;

  /// G(x, xi) = singular + interpolated regular part.
  double green_value(const GreenBundle& bundle, const Vec2& x) const;
  /// Gradient of G(., xi) at x: analytic singular gradient plus the patch
  /// recovered gradient of the regular part.
  Vec2 green_gradient(const GreenBundle& bundle, const Vec2& x) const;

  /// Robin function R(xi) = H(xi, xi) + log(psi(xi)) / (2 kappa).
  double robin(const SourcePoint& source) const;

  /// (1/kappa) int chi log|.-xi| w(.) dx with the pole-aware quadrature.
  double cutoff_log_integral(const SourcePoint& source,
                             const std::function<double(const Vec2&)>& w,
                             const QuadResolution& res) const;

  /// psi-weighted integral of the full singular part over the domain, i.e.
  /// int singular_part(., xi) dv_g (used by the mean-zero diagnostics).
  double singular_mean(const SourcePoint& source,
                       const QuadResolution& res) const;

 private:
  Eigen::VectorXd assemble_load(const SourcePoint& source) const;

  std::shared_ptr<const Mesh> mesh_;
  NeumannSolver solver_;
  double delta_ = 0.0;
};

}  // namespace morsefield
