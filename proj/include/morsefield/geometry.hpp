#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace morsefield {

using Vec2 = Eigen::Vector2d;

/// Error raised by geometric preconditions (bad curves, points outside the
/// domain, degenerate triangles found during meshing).
class GeometryError : public std::runtime_error {
 public:
  explicit GeometryError(const std::string& what) : std::runtime_error(what) {}
};

/// Error raised when a discrete problem is ill-posed or a factorization /
/// iteration fails.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Error raised on API misuse (mesh mismatch, invalid configuration files).
class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

/// Smooth closed curve in the plane given by a truncated Fourier series,
///   x(t) = sum_k cx(k) cos(2 pi k t / L) + sx(k) sin(2 pi k t / L)
/// and likewise for y(t).  Tangents, normals and curvature are exact.
class BoundaryCurve {
 public:
  BoundaryCurve() = default;
  /// cos_xy / sin_xy: one row per mode k = 0, 1, ..., columns (x, y).
  BoundaryCurve(Eigen::MatrixX2d cos_xy, Eigen::MatrixX2d sin_xy,
                double period);

  static BoundaryCurve circle(double radius);
  static BoundaryCurve ellipse(double semi_a, double semi_b);

  double period() const { return period_; }
  int modes() const { return static_cast<int>(cos_xy_.rows()); }
  const Eigen::MatrixX2d& cos_coeffs() const { return cos_xy_; }
  const Eigen::MatrixX2d& sin_coeffs() const { return sin_xy_; }

  Vec2 position(double t) const;
  Vec2 velocity(double t) const;      // d gamma / dt
  Vec2 acceleration(double t) const;  // d^2 gamma / dt^2

  /// Unit tangent and outward unit normal (curve oriented counterclockwise).
  Vec2 unit_tangent(double t) const;
  Vec2 outward_normal(double t) const;

  /// Signed curvature (positive for a counterclockwise convex curve).
  double curvature(double t) const;

  /// Wrap a parameter into [0, period).
  double wrap(double t) const;
  /// Shortest periodic distance between two parameters.
  double param_distance(double a, double b) const;

  /// Signed enclosed area (positive when counterclockwise).
  double enclosed_area(int samples = 2048) const;
  /// Reverse the orientation in place (t -> period - t).
  void reverse_orientation();

  /// Diameter of the sampled curve (max pairwise distance, coarse sample).
  double diameter() const;
  /// Minimal radius of curvature along the curve.
  double min_curvature_radius(int samples = 4096) const;
  /// Parameter of the point on the curve closest to p.
  double closest_param(const Vec2& p, int coarse_samples = 512) const;

  /// Throws GeometryError if the sampled curve self-intersects or the
  /// tangent vanishes somewhere.
  void validate(int samples = 1024) const;

 private:
  Eigen::MatrixX2d cos_xy_{0, 2};
  Eigen::MatrixX2d sin_xy_{0, 2};
  double period_ = 2.0 * 3.14159265358979323846;
};

}  // namespace morsefield
