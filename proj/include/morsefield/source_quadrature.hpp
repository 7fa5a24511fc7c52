#pragma once

#include <functional>
#include <vector>

#include "morsefield/geometry.hpp"

namespace morsefield {

/// Node budget of a SourceQuadrature.  Counts are fixed per resolution so
/// the rule varies smoothly with the source position.
struct QuadResolution {
  int radial_gauss = 12;    // Gauss points per radial panel
  int graded_levels = 26;   // dyadic panels grading into the log singularity
  int smooth_panels = 6;    // panels on smooth radial segments
  int angular_full = 44;    // uniform angles on full circles
  int angular_arc = 24;     // Gauss angles on clipped arcs

  static QuadResolution standard() { return {}; }
  /// Independent, finer rule used to cross-check the standard one.
  static QuadResolution refined() { return {16, 30, 10, 64, 36}; }
};

/// Quadrature of integrals
///   int_{Sigma ∩ B_{2 delta}(xi)} chi(|z - xi| / delta) log|z - xi| w(z) dz
/// for a smooth weight w.  The rule is polar around xi with dyadic grading
/// into the singularity; where the ball crosses the boundary the angular
/// range is clipped to the inside arc of the exact curve, with a square-root
/// substitution at the tangency radius.  Accuracy is ~1e-11 for smooth w.
class SourceQuadrature {
 public:
  /// xi strictly inside the curve, or on it (on_boundary = true with its
  /// curve parameter).  Requires 2*delta below the chart scale of the domain
  /// so the ball meets the boundary in at most one arc.
  SourceQuadrature(const BoundaryCurve& curve, const Vec2& xi,
                   bool on_boundary, double boundary_param, double delta,
                   const QuadResolution& res = QuadResolution::standard());

  /// sum of w(z_k) * weight_k, weights premultiplied by chi * log r * r.
  double integrate(const std::function<double(const Vec2&)>& w) const;

  int num_nodes() const { return static_cast<int>(points_.size()); }
  const std::vector<Vec2>& points() const { return points_; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  std::vector<Vec2> points_;
  std::vector<double> weights_;
};

}  // namespace morsefield
