#pragma once

#include "udpack/errors.hpp"

namespace udpack {

inline constexpr double kPi = 3.14159265358979323846;

/// Default absolute tolerance for geometric predicates.
inline constexpr double kGeomTol = 1e-9;

/// Largest supported ambient dimension (Gamma-free volume recursion stays finite well
/// beyond this; the cap is a declared interface limit).
inline constexpr int kMaxDim = 100;

/// Regularized incomplete beta function I_x(a, b), continued-fraction evaluation.
double regularized_incomplete_beta(double a, double b, double x);

/// Volume of the n-ball of radius r: v_n r^n with v_n = pi^{n/2} / Gamma(n/2 + 1).
/// Computed by the recursion v_n = v_{n-2} * 2 pi / n (no Gamma call), so the value
/// is a pure arithmetic function of (n, r).
double ball_volume(int n, double r);

/// Volume of the spherical cap of height h (0 <= h <= 2r) of an n-ball of radius r.
/// Reduction to the regularized incomplete beta: for h <= r,
///   V = (1/2) ball_volume(n, r) I_x((n+1)/2, 1/2),  x = h (2r - h) / r^2,
/// and the complement for h > r.
double cap_volume(int n, double r, double h);

/// Volume of the intersection of two n-balls of radii r1, r2 with centers d apart.
/// Sum of two cap volumes when |r1 - r2| < d < r1 + r2; min ball volume when
/// d <= |r1 - r2|; 0 when d >= r1 + r2.
double lens_volume(int n, double r1, double r2, double d);

}  // namespace udpack
