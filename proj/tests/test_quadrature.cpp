#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "morsefield/cutoff.hpp"
#include "morsefield/source_quadrature.hpp"

using namespace morsefield;

namespace {
constexpr double kPi = std::numbers::pi;

// composite 24-point Gauss on [a, b] split into panels
double gauss_1d(const std::function<double(double)>& f, double a, double b,
                int panels) {
  static const double X[] = {
      -0.99518721999702136, -0.97472855597130950, -0.93827455200273276,
      -0.88641552700440103, -0.82000198597390292, -0.74012419157855436,
      -0.64809365193697557, -0.54542147138883954, -0.43379350762604514,
      -0.31504267969616337, -0.19111886747361631, -0.06405689286260563,
      0.06405689286260563,  0.19111886747361631,  0.31504267969616337,
      0.43379350762604514,  0.54542147138883954,  0.64809365193697557,
      0.74012419157855436,  0.82000198597390292,  0.88641552700440103,
      0.93827455200273276,  0.97472855597130950,  0.99518721999702136};
  static const double W[] = {
      0.01234122979998720, 0.02853138862893366, 0.04427743881741981,
      0.05929858491543678, 0.07334648141108031, 0.08619016153195327,
      0.09761865210411389, 0.10744427011596563, 0.11550566805372560,
      0.12167047292780339, 0.12583745634682830, 0.12793819534675216,
      0.12793819534675216, 0.12583745634682830, 0.12167047292780339,
      0.11550566805372560, 0.10744427011596563, 0.09761865210411389,
      0.08619016153195327, 0.07334648141108031, 0.05929858491543678,
      0.04427743881741981, 0.02853138862893366, 0.01234122979998720};
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double pa = a + (b - a) * p / panels;
    const double pb = a + (b - a) * (p + 1) / panels;
    const double mid = 0.5 * (pa + pb), half = 0.5 * (pb - pa);
    for (int q = 0; q < 24; ++q) total += half * W[q] * f(mid + half * X[q]);
  }
  return total;
}

// graded panels toward a log singularity at zero
double gauss_1d_graded(const std::function<double(double)>& f, double b,
                       int levels) {
  double total = 0.0;
  for (int j = 0; j < levels; ++j)
    total += gauss_1d(f, b / std::pow(2.0, j + 1), b / std::pow(2.0, j), 2);
  total += gauss_1d(f, 0.0, b / std::pow(2.0, levels), 1);
  return total;
}

const BoundaryCurve& unit_circle() {
  static const BoundaryCurve c = BoundaryCurve::circle(1.0);
  return c;
}
}  // namespace

TEST_CASE("cutoff function shape") {
  CHECK(cutoff(0.5) == 1.0);
  CHECK(cutoff(-0.7) == 1.0);
  CHECK(cutoff(3.0) == 0.0);
  CHECK(cutoff(1.5) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(cutoff_d1(1.0) == 0.0);
  CHECK(cutoff_d1(2.0) == 0.0);
  CHECK(cutoff_d2(1.0) == 0.0);
  CHECK(cutoff_d2(2.0) == 0.0);
  // monotone on [1, 2]
  for (double s = 1.0; s < 2.0; s += 0.05) CHECK(cutoff_d1(s + 0.025) <= 0.0);
  // derivative consistency
  for (double s : {1.2, 1.5, 1.8}) {
    const double h = 1e-6;
    CHECK(cutoff_d1(s) ==
          doctest::Approx((cutoff(s + h) - cutoff(s - h)) / (2 * h))
              .epsilon(1e-6));
    CHECK(cutoff_d2(s) ==
          doctest::Approx((cutoff_d1(s + h) - cutoff_d1(s - h)) / (2 * h))
              .epsilon(1e-6));
  }
}

TEST_CASE("deep interior source matches the radial closed form") {
  const double delta = 0.2;
  SourceQuadrature quad(unit_circle(), Vec2(0.1, -0.05), false, 0.0, delta);
  const double got = quad.integrate([](const Vec2&) { return 1.0; });

  const double plateau = delta * delta * (2.0 * std::log(delta) - 1.0) / 4.0;
  const double ring = gauss_1d(
      [&](double r) { return cutoff(r / delta) * r * std::log(r); }, delta,
      2.0 * delta, 8);
  const double expect = 2.0 * kPi * (plateau + ring);
  CHECK(got == doctest::Approx(expect).epsilon(1e-11));
}

TEST_CASE("deep interior with a linear weight (odd part integrates to zero)") {
  const double delta = 0.2;
  const Vec2 xi(0.1, -0.05);
  SourceQuadrature quad(unit_circle(), xi, false, 0.0, delta);
  // w(z) = 3 + (z - xi) . (1, 2): the linear part drops by symmetry
  const double got = quad.integrate([&](const Vec2& z) {
    return 3.0 + (z - xi).dot(Vec2(1.0, 2.0));
  });
  const double plateau = delta * delta * (2.0 * std::log(delta) - 1.0) / 4.0;
  const double ring = gauss_1d(
      [&](double r) { return cutoff(r / delta) * r * std::log(r); }, delta,
      2.0 * delta, 8);
  CHECK(got == doctest::Approx(3.0 * 2.0 * kPi * (plateau + ring)).epsilon(1e-11));
}

TEST_CASE("boundary source on the unit circle matches the arc closed form") {
  const double delta = 0.2;
  SourceQuadrature quad(unit_circle(), Vec2(1.0, 0.0), true, 0.0, delta);
  const double got = quad.integrate([](const Vec2&) { return 1.0; });

  // inside-arc width around a boundary source: W(r) = pi - 2 asin(r/2)
  auto f = [&](double u) {
    const double r = u * u;
    if (r <= 0.0) return 0.0;
    const double w_arc = kPi - 2.0 * std::asin(r / 2.0);
    return cutoff(r / delta) * std::log(r) * r * w_arc * 2.0 * u;
  };
  const double expect = gauss_1d_graded(f, std::sqrt(2.0 * delta), 40);
  CHECK(got == doctest::Approx(expect).epsilon(1e-10));
}

TEST_CASE("near-boundary interior source matches the clipped closed form") {
  const double delta = 0.25;
  const double rho = 0.9;  // source at (0.9, 0): boundary distance 0.1
  SourceQuadrature quad(unit_circle(), Vec2(rho, 0.0), false, 0.0, delta);
  const double got = quad.integrate([](const Vec2&) { return 1.0; });

  const double d = 1.0 - rho;
  auto arc_width = [&](double r) {
    if (r <= d) return 2.0 * kPi;
    const double c = (1.0 - rho * rho - r * r) / (2.0 * rho * r);
    return 2.0 * kPi - 2.0 * std::acos(std::clamp(c, -1.0, 1.0));
  };
  // full-circle core with the log singularity
  const double core = gauss_1d_graded(
      [&](double r) {
        return cutoff(r / delta) * std::log(r) * r * arc_width(r);
      },
      d, 40);
  // clipped part via r = d + u^2
  auto fu = [&](double u) {
    const double r = d + u * u;
    return cutoff(r / delta) * std::log(r) * r * arc_width(r) * 2.0 * u;
  };
  const double rest = gauss_1d(fu, 0.0, std::sqrt(2.0 * delta - d), 32);
  CHECK(got == doctest::Approx(core + rest).epsilon(1e-9));
}

TEST_CASE("standard and refined rules agree to near machine accuracy") {
  const double delta = 0.25;
  auto w = [](const Vec2& z) { return 1.0 + 0.3 * z.x() + 0.1 * z.y() * z.x(); };
  for (const Vec2 xi : {Vec2(0.0, 0.0), Vec2(0.85, 0.0), Vec2(0.62, 0.62)}) {
    SourceQuadrature a(unit_circle(), xi, false, 0.0, delta,
                       QuadResolution::standard());
    SourceQuadrature b(unit_circle(), xi, false, 0.0, delta,
                       QuadResolution::refined());
    const double va = a.integrate(w), vb = b.integrate(w);
    CHECK(std::fabs(va - vb) <= 1e-10 * std::max(1.0, std::fabs(vb)));
  }
  SourceQuadrature a(unit_circle(), Vec2(std::cos(0.4), std::sin(0.4)), true,
                     0.4, delta, QuadResolution::standard());
  SourceQuadrature b(unit_circle(), Vec2(std::cos(0.4), std::sin(0.4)), true,
                     0.4, delta, QuadResolution::refined());
  CHECK(std::fabs(a.integrate(w) - b.integrate(w)) <= 1e-10);
}
