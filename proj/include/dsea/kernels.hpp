#pragma once

// Closed-form radial kernels for convolutions of Lorentz-invariant
// distributions supported on mass shells.
//
// Conventions: step(0) = 0 and sign(0) = +1.

namespace dsea {

// Kallen function a^2 + b^2 + c^2 - 2(ab + ac + bc).
double kallen(double a, double b, double c);

// Kallen function at (a, x^2, y^2) in factored form, accurate near thresholds.
double kallen_squares(double a, double x, double y);

// Threshold (|x| - |y|)^2 above which the shell convolution of (x, y) vanishes.
double pair_threshold(double x, double y);

// Shell-convolution part: nonzero only for a < (|x| - |y|)^2.
double threshold_part(double a, double x, double y);

// Polynomial part (x - y)^2 (x + y)^3 - 2a(x^3 + y^3).
double polynomial_part(double a, double x, double y);

// (threshold_part + polynomial_part) / a for a > 0, evaluated without the
// cancellation of the two O(1) parts. Tends to 0 as a -> 0 unless |x| = |y|.
double pair_kernel(double a, double x, double y);

// Momentum region of q: upper / lower half of the mass cone, or spacelike.
enum class ConeRegion { upper, lower, outside };

// Region of -q.
ConeRegion mirrored(ConeRegion region);

// Regular parts of the mixed (negative x positive) convolution kernels at
// a = q^2, all including the 1/(32 pi^3) prefactor. The a-sign must match the
// region (a > 0 inside the cone, a < 0 outside) or Error(domain) is thrown.
double mixed_scalar_kernel(ConeRegion region, double a, double b, double c);
double mixed_contracted_kernel(ConeRegion region, double a, double b, double c);
// Coefficients of i q-slash for one derivative on the first / second factor.
double mixed_slash_left_kernel(ConeRegion region, double a, double b, double c);
double mixed_slash_right_kernel(ConeRegion region, double a, double b, double c);

// Light-cone supported term separating the contracted kernel from
// scalar * (b + c - a) / 2, with the 1/(32 pi^3) prefactor.
double contracted_offset(ConeRegion region, double b, double c);

// Regularized mixed kernel for spacelike q = (q0, |qvec|) with q0^2 < |qvec|^2.
double regularized_mixed_kernel(double q0, double qvec_norm, double b, double c, double eps);

}  // namespace dsea
