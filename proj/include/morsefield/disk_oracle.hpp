#pragma once

#include <cstdint>

#include "morsefield/geometry.hpp"

namespace morsefield {

/// Closed-form Neumann Green function of the flat unit disk (method of
/// images), mean-zero normalization:
///   N(x, xi) = -(1/2pi)[log|x - xi| + log(|xi| |x - xi*|)]
///              + (|x|^2 + |xi|^2)/(4pi) + c0,     xi* = xi/|xi|^2,
/// with c0 = -3/(8pi) enforcing a zero mean over the disk.
double disk_green_exact(const Vec2& x, const Vec2& xi);

/// Gradient of N in the first argument.
Vec2 disk_green_grad_x(const Vec2& x, const Vec2& xi);

/// Laplacian of the nonsingular part of N (analytic; equals 1/pi).
double disk_green_regular_laplacian(const Vec2& x, const Vec2& xi);

/// Radial derivative of N at a boundary point x = (cos a, sin a).
double disk_green_boundary_normal_derivative(double angle, const Vec2& xi);

/// Robin function of the flat unit disk:
///   R(xi) = -(1/2pi) log(1 - |xi|^2) + |xi|^2/(2pi) + c0.
/// Returns +infinity beyond |xi| > 1 - 1e-8.
double disk_robin_exact(const Vec2& xi);

/// d R / d r along a radius.
double disk_robin_radial_derivative(double r);

/// Mean-zero constant of the images formula.
double disk_green_c0();

struct OracleVerification {
  double laplace_residual = 0.0;    // | -Delta(regular part) + 1/pi |
  double laplace_fd_residual = 0.0; // finite-difference cross-check of -Delta N
  double boundary_residual = 0.0;   // max |d_r N| on boundary samples
  double mean_residual = 0.0;       // max |int N dx| over sources
  double symmetry_residual = 0.0;   // max |N(x,xi) - N(xi,x)|
  double robin_limit_residual = 0.0;// Robin formula vs extrapolated limit
  bool pass = false;
};

/// Self-verification of the closed forms against the defining conditions:
/// analytic Laplacian, zero boundary-normal derivative on an angular grid,
/// zero mean by singularity-aware quadrature, symmetry, and agreement of the
/// Robin formula with the extrapolated on-diagonal limit of the Green
/// function.  The oracle is only trusted after this passes.
OracleVerification verify_disk_oracle(int boundary_samples = 256,
                                      int sources = 10, uint64_t seed = 20240817);

}  // namespace morsefield
