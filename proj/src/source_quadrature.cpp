#include "morsefield/source_quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gauss.hpp"
#include "morsefield/cutoff.hpp"

namespace morsefield {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_2pi(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  return r;
}
}  // namespace

SourceQuadrature::SourceQuadrature(const BoundaryCurve& curve, const Vec2& xi,
                                   bool on_boundary, double boundary_param,
                                   double delta, const QuadResolution& res) {
  if (delta <= 0.0) throw GeometryError("cutoff radius must be positive");
  const double R = 2.0 * delta;
  const auto& gl = detail::gauss_legendre(res.radial_gauss);
  const auto& gl_arc = detail::gauss_legendre(res.angular_arc);

  double t0 = 0.0, d = 0.0;
  if (on_boundary) {
    t0 = curve.wrap(boundary_param);
    d = 0.0;
  } else {
    t0 = curve.closest_param(xi);
    d = (curve.position(t0) - xi).norm();
    if (d == 0.0) throw GeometryError("interior source lies on the boundary");
  }

  const bool clipped = d < R;
  double t_lo = t0, t_hi = t0;
  if (clipped) {
    // bracket the single boundary arc inside B_R(xi)
    const double step = curve.period() / 1024.0;
    bool found_hi = false, found_lo = false;
    for (int k = 1; k <= 1024; ++k) {
      if (!found_hi && (curve.position(t0 + k * step) - xi).norm() >= R) {
        t_hi = t0 + k * step;
        found_hi = true;
      }
      if (!found_lo && (curve.position(t0 - k * step) - xi).norm() >= R) {
        t_lo = t0 - k * step;
        found_lo = true;
      }
      if (found_hi && found_lo) break;
    }
    if (!found_hi || !found_lo)
      throw GeometryError("cutoff ball is not small relative to the domain");
    // single-arc assumption: everything outside [t_lo, t_hi] stays outside
    for (int k = 0; k < 1024; ++k) {
      const double t = t_hi + (curve.period() - (t_hi - t_lo)) * k / 1024.0;
      if ((curve.position(t) - xi).norm() < R * (1.0 - 1e-9))
        throw GeometryError(
            "cutoff ball meets the boundary in more than one arc");
    }
  }

  double angle_in = 0.0;
  if (clipped) {
    Vec2 u_in = on_boundary ? Vec2(-curve.outward_normal(t0))
                            : Vec2((xi - curve.position(t0)) / d);
    angle_in = std::atan2(u_in.y(), u_in.x());
  }

  // safeguarded Newton for |gamma(t) - xi| = r on a bracket, warm-startable
  auto solve_radius = [&](double r, double lo, double hi, double warm) {
    auto phi = [&](double t) { return (curve.position(t) - xi).norm(); };
    double flo = phi(lo) - r, fhi = phi(hi) - r;
    if (flo > 0.0 || fhi < 0.0) {
      // widen by swapping orientation of the bracket if needed
      std::swap(lo, hi);
      std::swap(flo, fhi);
      if (flo > 0.0 || fhi < 0.0)
        throw GeometryError("radius root not bracketed");
    }
    double t = warm;
    if (!((t > std::min(lo, hi)) && (t < std::max(lo, hi))))
      t = 0.5 * (lo + hi);
    for (int it = 0; it < 80; ++it) {
      const Vec2 g = curve.position(t) - xi;
      const double f = g.norm() - r;
      if (f < 0.0)
        lo = t;
      else
        hi = t;
      const Vec2 v = curve.velocity(t);
      const double fp = g.dot(v) / g.norm();
      double tn = (fp != 0.0) ? t - f / fp : 0.5 * (lo + hi);
      if (!(tn > std::min(lo, hi) && tn < std::max(lo, hi)))
        tn = 0.5 * (lo + hi);
      if (std::fabs(tn - t) < 1e-15 * curve.period()) {
        t = tn;
        break;
      }
      t = tn;
    }
    return t;
  };

  points_.reserve(8192);
  weights_.reserve(8192);

  auto push_node = [&](double r, double theta, double w_polar) {
    const double c = cutoff(r / delta);
    if (c == 0.0 || r <= 0.0) return;
    points_.emplace_back(xi + r * Vec2(std::cos(theta), std::sin(theta)));
    weights_.push_back(w_polar * r * c * std::log(r));
  };

  // full-circle radial panel [ra, rb]
  auto add_full_panel = [&](double ra, double rb) {
    if (rb <= ra) return;
    const double mid = 0.5 * (ra + rb), half = 0.5 * (rb - ra);
    for (int q = 0; q < res.radial_gauss; ++q) {
      const double r = mid + half * gl.x[q];
      const double wr = half * gl.w[q];
      for (int j = 0; j < res.angular_full; ++j) {
        const double theta = kTwoPi * (j + 0.5) / res.angular_full;
        push_node(r, theta, wr * kTwoPi / res.angular_full);
      }
    }
  };

  // clipped panel in the substituted variable u, r = d + u^2
  double warm_plus = t0, warm_minus = t0;
  auto add_clipped_panel = [&](double ua, double ub) {
    if (ub <= ua) return;
    const double mid = 0.5 * (ua + ub), half = 0.5 * (ub - ua);
    for (int q = 0; q < res.radial_gauss; ++q) {
      const double u = mid + half * gl.x[q];
      const double r = d + u * u;
      if (r >= R) continue;
      const double wr = half * gl.w[q] * 2.0 * u;  // dr = 2u du
      const double tp = solve_radius(r, t0, t_hi, warm_plus);
      const double tm = solve_radius(r, t_lo, t0, warm_minus);
      warm_plus = tp;
      warm_minus = tm;
      const Vec2 pp = curve.position(tp) - xi;
      const Vec2 pm = curve.position(tm) - xi;
      const double ap = std::atan2(pp.y(), pp.x());
      const double am = std::atan2(pm.y(), pm.x());
      // inside arc: the candidate containing angle_in
      double start = am, width = wrap_2pi(ap - am);
      if (wrap_2pi(angle_in - am) >= width) {
        start = ap;
        width = kTwoPi - width;
      }
      for (int j = 0; j < res.angular_arc; ++j) {
        const double theta = start + width * 0.5 * (1.0 + gl_arc.x[j]);
        push_node(r, theta, wr * width * 0.5 * gl_arc.w[j]);
      }
    }
  };

  if (!clipped) {
    // deep interior: full disk of radius 2 delta
    for (int j = 0; j < res.graded_levels; ++j)
      add_full_panel(delta / std::pow(2.0, j + 1), delta / std::pow(2.0, j));
    add_full_panel(0.0, delta / std::pow(2.0, res.graded_levels));
    const double seg = delta / res.smooth_panels;
    for (int p = 0; p < res.smooth_panels; ++p)
      add_full_panel(delta + p * seg, delta + (p + 1) * seg);
  } else if (!on_boundary) {
    if (d < delta) {
      // graded full-circle core up to the tangency radius
      for (int j = 0; j < res.graded_levels; ++j)
        add_full_panel(d / std::pow(2.0, j + 1), d / std::pow(2.0, j));
      add_full_panel(0.0, d / std::pow(2.0, res.graded_levels));
      // clipped: split at the cutoff junction r = delta
      const double u_junction = std::sqrt(delta - d);
      const double u_max = std::sqrt(R - d);
      for (int p = 0; p < res.smooth_panels; ++p)
        add_clipped_panel(u_junction * p / res.smooth_panels,
                          u_junction * (p + 1) / res.smooth_panels);
      for (int p = 0; p < res.smooth_panels; ++p)
        add_clipped_panel(
            u_junction + (u_max - u_junction) * p / res.smooth_panels,
            u_junction + (u_max - u_junction) * (p + 1) / res.smooth_panels);
    } else {
      // full graded core to delta, full smooth ring to d, clipped beyond
      for (int j = 0; j < res.graded_levels; ++j)
        add_full_panel(delta / std::pow(2.0, j + 1), delta / std::pow(2.0, j));
      add_full_panel(0.0, delta / std::pow(2.0, res.graded_levels));
      const double ring = d - delta;
      for (int p = 0; p < res.smooth_panels; ++p)
        add_full_panel(delta + ring * p / res.smooth_panels,
                       delta + ring * (p + 1) / res.smooth_panels);
      const double u_max = std::sqrt(R - d);
      for (int p = 0; p < res.smooth_panels; ++p)
        add_clipped_panel(u_max * p / res.smooth_panels,
                          u_max * (p + 1) / res.smooth_panels);
    }
  } else {
    // boundary source: clipped at every radius, r = u^2, graded in u
    const double u_junction = std::sqrt(delta);
    for (int j = 0; j < res.graded_levels; ++j)
      add_clipped_panel(u_junction / std::pow(2.0, j + 1),
                        u_junction / std::pow(2.0, j));
    add_clipped_panel(0.0, u_junction / std::pow(2.0, res.graded_levels));
    const double u_max = std::sqrt(R);
    for (int p = 0; p < res.smooth_panels; ++p)
      add_clipped_panel(u_junction + (u_max - u_junction) * p / res.smooth_panels,
                        u_junction +
                            (u_max - u_junction) * (p + 1) / res.smooth_panels);
  }
}

double SourceQuadrature::integrate(
    const std::function<double(const Vec2&)>& w) const {
  double total = 0.0;
  for (size_t k = 0; k < points_.size(); ++k)
    total += weights_[k] * w(points_[k]);
  return total;
}

}  // namespace morsefield
