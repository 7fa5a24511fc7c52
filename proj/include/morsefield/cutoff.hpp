#pragma once

#include <cmath>

namespace morsefield {

/// C^2 cutoff: 1 for |s| <= 1, 0 for |s| >= 2, quintic blend in between
/// (first and second derivatives vanish at both junctions).
inline double cutoff(double s) {
  const double a = std::fabs(s);
  if (a <= 1.0) return 1.0;
  if (a >= 2.0) return 0.0;
  const double u = a - 1.0;
  return 1.0 - u * u * u * (10.0 - 15.0 * u + 6.0 * u * u);
}

/// d/ds cutoff (odd extension handled through |s|).
inline double cutoff_d1(double s) {
  const double a = std::fabs(s);
  if (a <= 1.0 || a >= 2.0) return 0.0;
  const double u = a - 1.0;
  const double d = -(30.0 * u * u - 60.0 * u * u * u + 30.0 * u * u * u * u);
  return s >= 0.0 ? d : -d;
}

/// d^2/ds^2 cutoff.
inline double cutoff_d2(double s) {
  const double a = std::fabs(s);
  if (a <= 1.0 || a >= 2.0) return 0.0;
  const double u = a - 1.0;
  return -(60.0 * u - 180.0 * u * u + 120.0 * u * u * u);
}

}  // namespace morsefield
