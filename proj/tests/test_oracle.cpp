#include <doctest.h>

#include <cmath>

#include "dsea/constants.hpp"
#include "dsea/error.hpp"
#include "dsea/kernels.hpp"
#include "dsea/oracle.hpp"
#include "dsea/quadrature.hpp"

using namespace dsea;

TEST_CASE("a cubic B-spline bump integrates to amplitude * width / 4") {
  const RadialProfile f = RadialProfile::bump(0.5, 2.5, 3.0);
  const auto knots = f.knots();
  const auto r = integrate([&](double z) { return f(z); }, 0.5, 2.5, QuadSettings{1e-15, 1e-14, 4000}, knots);
  CHECK(r.value == doctest::Approx(1.5).epsilon(1e-13));
  CHECK(f(0.5) == 0.0);
  CHECK(f(2.5) == 0.0);
  CHECK(f(1.5) == doctest::Approx(3.0 * 2.0 / 3.0));
}

TEST_CASE("profile bookkeeping") {
  RadialProfile f = RadialProfile::bump(1.0, 2.0);
  f.add_bump(0.5, 1.5, 2.0);
  CHECK(f.support_lo() == 0.5);
  CHECK(f.support_hi() == 2.0);
  CHECK(f.knots().size() == 10);
  const RadialProfile s = f.stretched(3.0);
  CHECK(s(4.5) == doctest::Approx(f(1.5)));
  CHECK_THROWS_AS(RadialProfile::delta_shell(1.0).add_bump(0.0, 1.0, 1.0), Error);
  CHECK_THROWS_AS(RadialProfile::bump(2.0, 1.0), Error);
}

TEST_CASE("Hankel transform of a delta shell is closed form") {
  const double z0 = 1.3, w = 0.7;
  const RadialProfile shell = RadialProfile::delta_shell(z0, w);
  for (double a : {0.0, 0.3, 2.0, 30.0}) {
    const double x = std::sqrt(a * z0);
    const double ratio = x > 0.0 ? std::cyl_bessel_j(1.0, x) / x : 0.5;
    const auto h = hankel_transform(shell, a);
    CHECK(h.real() == 0.0);
    CHECK(h.imag() == doctest::Approx(2.0 * pi2 * w * z0 * ratio).epsilon(1e-13));
    const double ratio2 = x > 0.0 ? std::cyl_bessel_j(2.0, x) / (x * x) : 0.125;
    CHECK(hankel_transform_vector(shell, a).imag() == doctest::Approx(-2.0 * pi2 * w * z0 * z0 * ratio2).epsilon(1e-12));
  }
}

TEST_CASE("stretching a profile by s rescales its transform by s^2") {
  const RadialProfile f = RadialProfile::bump(0.5, 1.5);
  for (double s : {0.5, 2.0}) {
    const RadialProfile g = f.stretched(s);
    for (double a : {0.0, 0.3, 2.0}) {
      CHECK(hankel_transform(g, a / s).imag() == doctest::Approx(s * s * hankel_transform(f, a).imag()).epsilon(1e-12));
    }
  }
}

TEST_CASE("closed and direct convolutions agree on a fixed pair") {
  const RadialProfile f = RadialProfile::bump(0.2, 0.9);
  const RadialProfile g = RadialProfile::bump(0.3, 1.2, 0.5);
  for (ConvolutionKind kind : {ConvolutionKind::scalar, ConvolutionKind::slash_left, ConvolutionKind::contracted}) {
    const double closed = convolve_negative_closed(kind, f, g, 2.0);
    CHECK(closed == doctest::Approx(convolve_negative_direct(kind, f, g, 2.0)).epsilon(1e-6));
  }
}

TEST_CASE("outside the cone the a -> 0 limit is the mean of the two inside limits") {
  // The kernels jump across a = 0: one inside sheet vanishes while the other
  // does not, and the outside kernel approaches their average.
  const double d = 1e-10;
  for (double b : {0.5, 2.0})
    for (double c : {1.0, 3.0}) {
      const double out = mixed_scalar_kernel(ConeRegion::outside, -d, b, c);
      const double upper = mixed_scalar_kernel(ConeRegion::upper, d, b, c);
      const double lower = mixed_scalar_kernel(ConeRegion::lower, d, b, c);
      CHECK(out == doctest::Approx((upper + lower) / 2.0).epsilon(1e-6));
      CHECK(std::abs(upper - lower) > 1e-2 * std::abs(out));
    }
}

TEST_CASE("shell convolution: threshold kernel against the shell-intersection integral") {
  for (double a : {0.3, 1.7, 4.0}) {
    const ShellCheck r = shell_convolution_J_check(0.8, 1.6, a);
    CHECK(r.closed == doctest::Approx(r.direct).epsilon(1e-8));
  }
}

TEST_CASE("Plancherel identity on two bumps") {
  const RadialProfile f = RadialProfile::bump(0.5, 1.5);
  const RadialProfile g = RadialProfile::bump(0.8, 2.0, 0.4);
  for (bool vector : {false, true}) {
    const PlancherelResult r = plancherel_check(f, g, vector);
    CHECK(r.relative_error() < 1e-3);
  }
  CHECK_THROWS_AS(plancherel_check(RadialProfile::delta_shell(1.0), g, false), Error);
}

TEST_CASE("randomized suites pass at small sizes") {
  for (const CheckResult& r : {check_kernel_identities(5, 50), check_convolutions(5, 2), check_shell_convolution(5, 5)}) {
    INFO(r.name << " worst " << r.worst << " " << r.detail);
    CHECK(r.passed);
    CHECK(r.cases > 0);
  }
}
