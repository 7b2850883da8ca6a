#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "dsea/kernels.hpp"
#include "dsea/quadrature.hpp"

namespace dsea {

// Radial density f(z) of a Lorentz-invariant distribution on the mass cone:
// either a weighted delta shell at z0, or a sum of uniform cubic B-splines
// (C^2, piecewise cubic, compact support).
class RadialProfile {
public:
  struct Spline {
    double lo;
    double hi;
    double amplitude;
  };

  static RadialProfile delta_shell(double z0, double weight = 1.0);
  static RadialProfile bump(double lo, double hi, double amplitude = 1.0);
  RadialProfile& add_bump(double lo, double hi, double amplitude);

  bool is_delta() const { return delta_; }
  double shell() const { return z0_; }
  double weight() const { return weight_; }
  const std::vector<Spline>& splines() const { return splines_; }

  double operator()(double z) const;
  double support_lo() const;
  double support_hi() const;
  // Knots of all splines; the profile is a cubic polynomial between them.
  std::vector<double> knots() const;
  // f(z / s) for s > 0.
  RadialProfile stretched(double s) const;

private:
  bool delta_ = false;
  double z0_ = 0.0;
  double weight_ = 0.0;
  std::vector<Spline> splines_;
};

enum class ConvolutionKind { scalar, slash_left, slash_right, contracted };
const char* to_string(ConvolutionKind kind);

// Same-cone (negative x negative) convolution at q^2 = a > 0 from the (c, b)
// double-integral kernels, 1/(32 pi^3) included. f carries k^2 = c, g carries
// (q - k)^2 = b. Slash kinds return the coefficient of q-slash.
double convolve_negative_closed(ConvolutionKind kind, const RadialProfile& f, const RadialProfile& g, double a);
// The same by direct quadrature over (k0, |k|) in the rest frame of q.
double convolve_negative_direct(ConvolutionKind kind, const RadialProfile& f, const RadialProfile& g, double a);

// Mixed convolution, f negative and g positive. Inside the cone the (c, b)
// kernels on the shell domain; outside (a < 0) the regular kernels of the
// kernels module.
double convolve_mixed_closed(ConvolutionKind kind, const RadialProfile& f, const RadialProfile& g, ConeRegion region,
                             double a);
// Direct quadrature, inside the cone only.
double convolve_mixed_direct(ConvolutionKind kind, const RadialProfile& f, const RadialProfile& g, ConeRegion region,
                             double a);
// Regular kernels of the kernels module integrated against f and g, in any region.
double convolve_mixed_regular(ConvolutionKind kind, const RadialProfile& f, const RadialProfile& g, ConeRegion region,
                              double a);

struct ShellCheck {
  double closed = 0.0;
  double direct = 0.0;
};

// Radial coefficient of the two-shell convolution (summed over both mass
// orderings) at k^2 = a: from the threshold kernel, and from a 1D quadrature
// over the shell intersection in a frame where k has spatial momentum.
ShellCheck shell_convolution_J_check(double x, double y, double a);

// Scalar transform 2 i pi^2 int f(z) z J1(sqrt(a z)) / sqrt(a z) dz.
std::complex<double> hankel_transform(const RadialProfile& f, double a);
// Vector transform: twice the a-derivative of the scalar one.
std::complex<double> hankel_transform_vector(const RadialProfile& f, double a);

struct PlancherelResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double a_reached = 0.0;     // upper end of the momentum-side integral
  double tail_estimate = 0.0; // magnitude of the last chunk
  double relative_error() const;
};

// Position side int f g z^(1+v) dz against (2 pi)^-4 int conj(F) G a^(1+v) da,
// v = 0 (scalar) or 1 (vector). Throws Error(quadrature) if the momentum
// integral has not settled below a_ceiling.
PlancherelResult plancherel_check(const RadialProfile& f, const RadialProfile& g, bool vector,
                                  double a_ceiling = 1e5);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::size_t cases = 0;
  double worst = 0.0;  // worst relative deviation
  double tolerance = 0.0;
  double seconds = 0.0;
  std::string detail;
};

// Randomized suites with a fixed seed.
CheckResult check_kernel_identities(std::uint64_t seed, std::size_t cases = 200);
CheckResult check_convolutions(std::uint64_t seed, std::size_t pairs = 10);
CheckResult check_shell_convolution(std::uint64_t seed, std::size_t triples = 20);
CheckResult check_plancherel(std::uint64_t seed, std::size_t pairs = 5);
std::vector<CheckResult> run_oracle_suite(std::uint64_t seed);

}  // namespace dsea
