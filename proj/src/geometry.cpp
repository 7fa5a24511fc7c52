#include "morsefield/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace morsefield {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Orientation test for segment intersection.
double orient(const Vec2& a, const Vec2& b, const Vec2& c) {
  return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c,
                        const Vec2& d) {
  const double o1 = orient(a, b, c);
  const double o2 = orient(a, b, d);
  const double o3 = orient(c, d, a);
  const double o4 = orient(c, d, b);
  return ((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0));
}
}  // namespace

BoundaryCurve::BoundaryCurve(Eigen::MatrixX2d cos_xy, Eigen::MatrixX2d sin_xy,
                             double period)
    : cos_xy_(std::move(cos_xy)), sin_xy_(std::move(sin_xy)), period_(period) {
  if (period_ <= 0.0) throw GeometryError("curve period must be positive");
  if (cos_xy_.rows() != sin_xy_.rows())
    throw GeometryError("cos/sin coefficient tables must have equal mode count");
  if (cos_xy_.rows() < 2)
    throw GeometryError("curve needs at least modes k = 0 and k = 1");
}

BoundaryCurve BoundaryCurve::circle(double radius) {
  if (radius <= 0.0) throw GeometryError("circle radius must be positive");
  Eigen::MatrixX2d c = Eigen::MatrixX2d::Zero(2, 2);
  Eigen::MatrixX2d s = Eigen::MatrixX2d::Zero(2, 2);
  c(1, 0) = radius;  // x = r cos t
  s(1, 1) = radius;  // y = r sin t
  return BoundaryCurve(c, s, kTwoPi);
}

BoundaryCurve BoundaryCurve::ellipse(double semi_a, double semi_b) {
  if (semi_a <= 0.0 || semi_b <= 0.0)
    throw GeometryError("ellipse semi-axes must be positive");
  Eigen::MatrixX2d c = Eigen::MatrixX2d::Zero(2, 2);
  Eigen::MatrixX2d s = Eigen::MatrixX2d::Zero(2, 2);
  c(1, 0) = semi_a;
  s(1, 1) = semi_b;
  return BoundaryCurve(c, s, kTwoPi);
}

Vec2 BoundaryCurve::position(double t) const {
  const double w = kTwoPi / period_;
  Vec2 p = Vec2::Zero();
  for (int k = 0; k < modes(); ++k) {
    const double a = w * k * t;
    p += std::cos(a) * cos_xy_.row(k).transpose() +
         std::sin(a) * sin_xy_.row(k).transpose();
  }
  return p;
}

Vec2 BoundaryCurve::velocity(double t) const {
  const double w = kTwoPi / period_;
  Vec2 v = Vec2::Zero();
  for (int k = 1; k < modes(); ++k) {
    const double wk = w * k;
    const double a = wk * t;
    v += wk * (-std::sin(a) * cos_xy_.row(k).transpose() +
               std::cos(a) * sin_xy_.row(k).transpose());
  }
  return v;
}

Vec2 BoundaryCurve::acceleration(double t) const {
  const double w = kTwoPi / period_;
  Vec2 a2 = Vec2::Zero();
  for (int k = 1; k < modes(); ++k) {
    const double wk = w * k;
    const double a = wk * t;
    a2 += wk * wk * (-std::cos(a) * cos_xy_.row(k).transpose() -
                     std::sin(a) * sin_xy_.row(k).transpose());
  }
  return a2;
}

Vec2 BoundaryCurve::unit_tangent(double t) const {
  Vec2 v = velocity(t);
  const double n = v.norm();
  if (n == 0.0) throw GeometryError("vanishing tangent on boundary curve");
  return v / n;
}

Vec2 BoundaryCurve::outward_normal(double t) const {
  // counterclockwise curve: outward normal is the tangent rotated by -pi/2
  const Vec2 tau = unit_tangent(t);
  return Vec2(tau.y(), -tau.x());
}

double BoundaryCurve::curvature(double t) const {
  const Vec2 v = velocity(t);
  const Vec2 a = acceleration(t);
  const double speed = v.norm();
  if (speed == 0.0) throw GeometryError("vanishing tangent on boundary curve");
  return (v.x() * a.y() - v.y() * a.x()) / (speed * speed * speed);
}

double BoundaryCurve::wrap(double t) const {
  double r = std::fmod(t, period_);
  if (r < 0.0) r += period_;
  return r;
}

double BoundaryCurve::param_distance(double a, double b) const {
  const double d = std::fabs(wrap(a) - wrap(b));
  return std::min(d, period_ - d);
}

double BoundaryCurve::enclosed_area(int samples) const {
  // shoelace over a fine polygon; second-order in 1/samples
  double area = 0.0;
  Vec2 prev = position(0.0);
  for (int i = 1; i <= samples; ++i) {
    const Vec2 cur = position(period_ * i / samples);
    area += 0.5 * (prev.x() * cur.y() - cur.x() * prev.y());
    prev = cur;
  }
  return area;
}

void BoundaryCurve::reverse_orientation() {
  // gamma(t) -> gamma(-t): sine coefficients flip sign
  sin_xy_ = -sin_xy_;
}

double BoundaryCurve::diameter() const {
  const int n = 256;
  std::vector<Vec2> pts(n);
  for (int i = 0; i < n; ++i) pts[i] = position(period_ * i / n);
  double d = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      d = std::max(d, (pts[i] - pts[j]).norm());
  return d;
}

double BoundaryCurve::min_curvature_radius(int samples) const {
  double max_abs_kappa = 0.0;
  for (int i = 0; i < samples; ++i)
    max_abs_kappa =
        std::max(max_abs_kappa, std::fabs(curvature(period_ * i / samples)));
  if (max_abs_kappa == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / max_abs_kappa;
}

double BoundaryCurve::closest_param(const Vec2& p, int coarse_samples) const {
  double best_t = 0.0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (int i = 0; i < coarse_samples; ++i) {
    const double t = period_ * i / coarse_samples;
    const double d2 = (position(t) - p).squaredNorm();
    if (d2 < best_d2) {
      best_d2 = d2;
      best_t = t;
    }
  }
  // Newton on f(t) = |gamma(t) - p|^2 / 2
  double t = best_t;
  for (int it = 0; it < 60; ++it) {
    const Vec2 g = position(t) - p;
    const Vec2 v = velocity(t);
    const double f1 = g.dot(v);
    const double f2 = v.squaredNorm() + g.dot(acceleration(t));
    if (f2 <= 0.0) break;
    const double step = f1 / f2;
    t -= step;
    if (std::fabs(step) < 1e-15 * period_) break;
  }
  // keep the Newton result only if it did not drift to a worse point
  if ((position(t) - p).squaredNorm() <= best_d2 + 1e-30) return wrap(t);
  return best_t;
}

void BoundaryCurve::validate(int samples) const {
  const double diam = diameter();
  std::vector<Vec2> pts(samples);
  for (int i = 0; i < samples; ++i) {
    const double t = period_ * i / samples;
    pts[i] = position(t);
    if (velocity(t).norm() < 1e-12 * diam)
      throw GeometryError("boundary curve tangent vanishes");
  }
  for (int i = 0; i < samples; ++i) {
    const Vec2& a = pts[i];
    const Vec2& b = pts[(i + 1) % samples];
    for (int j = i + 2; j < samples; ++j) {
      if (i == 0 && j == samples - 1) continue;  // adjacent around the wrap
      if (segments_intersect(a, b, pts[j], pts[(j + 1) % samples]))
        throw GeometryError("boundary curve self-intersects");
    }
  }
}

}  // namespace morsefield
