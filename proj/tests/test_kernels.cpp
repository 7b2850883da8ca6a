#include <doctest.h>

#include <cmath>

#include "dsea/constants.hpp"
#include "dsea/error.hpp"
#include "dsea/kernels.hpp"
#include "generators.hpp"

using namespace dsea;

TEST_CASE("Kallen function: symmetric, factored form agrees") {
  gen::Source src(1);
  for (int i = 0; i < 200; ++i) {
    const double a = src.uniform(0.0, 10.0), x = src.uniform(-3.0, 3.0), y = src.uniform(-3.0, 3.0);
    const double b = x * x, c = y * y;
    CHECK(kallen(a, b, c) == doctest::Approx(kallen(b, a, c)).epsilon(1e-13));
    CHECK(kallen(a, b, c) == doctest::Approx(kallen(c, b, a)).epsilon(1e-13));
    CHECK(kallen_squares(a, x, y) == doctest::Approx(kallen(a, b, c)).epsilon(1e-10).scale(a * a + b * b + c * c));
  }
}

TEST_CASE("pair kernel on equal masses is -4 x^3 for every a") {
  gen::Source src(2);
  for (int i = 0; i < 200; ++i) {
    const double x = src.uniform(-3.0, 3.0);
    const double a = src.log_uniform(1e-6, 1e3);
    CHECK(pair_kernel(a, x, x) == doctest::Approx(-4.0 * x * x * x).epsilon(1e-13));
    CHECK(threshold_part(a, x, x) == 0.0);
  }
}

TEST_CASE("pair kernel equals (threshold + polynomial) / a") {
  gen::Source src(3);
  for (int i = 0; i < 200; ++i) {
    const double x = src.uniform(-3.0, 3.0), y = src.uniform(-3.0, 3.0);
    const double a = src.uniform(0.05, 12.0);
    const double direct = (threshold_part(a, x, y) + polynomial_part(a, x, y)) / a;
    const double scale = std::abs(polynomial_part(a, x, y) / a) + 4.0 * std::pow(std::max(std::abs(x), std::abs(y)), 3);
    CHECK(std::abs(pair_kernel(a, x, y) - direct) <= 1e-12 * scale);
  }
}

TEST_CASE("threshold part vanishes at and above the threshold, and cancels the polynomial at a = 0") {
  gen::Source src(4);
  for (int i = 0; i < 200; ++i) {
    const double x = src.uniform(-3.0, 3.0), y = src.uniform(-3.0, 3.0);
    const double t = pair_threshold(x, y);
    CHECK(threshold_part(t, x, y) == 0.0);
    CHECK(threshold_part(t + src.uniform(0.0, 5.0), x, y) == 0.0);
    const double k0 = polynomial_part(0.0, x, y);
    CHECK(std::abs(threshold_part(0.0, x, y) + k0) <= 1e-12 * std::abs(k0) + 1e-300);
  }
}

TEST_CASE("pair kernel is continuous across the threshold") {
  for (double x : {2.0, -2.0}) {
    const double y = 0.5;
    const double t = pair_threshold(x, y);
    const double below = pair_kernel(t * (1.0 - 1e-12), x, y);
    const double above = pair_kernel(t * (1.0 + 1e-12), x, y);
    CHECK(below == doctest::Approx(above).epsilon(1e-5));
  }
}

TEST_CASE("pair kernel rejects a <= 0") {
  CHECK_THROWS_AS(pair_kernel(0.0, 1.0, 2.0), Error);
  CHECK_THROWS_AS(pair_kernel(-1.0, 1.0, 2.0), Error);
}

TEST_CASE("mixed kernels: derivative combination and mirror identity") {
  gen::Source src(5);
  const ConeRegion regions[] = {ConeRegion::upper, ConeRegion::lower, ConeRegion::outside};
  for (int i = 0; i < 200; ++i) {
    const double b = src.uniform(0.05, 4.0), c = src.uniform(0.05, 4.0);
    for (ConeRegion r : regions) {
      const double a = r == ConeRegion::outside ? -src.uniform(0.01, 5.0) : src.uniform(0.01, 5.0);
      const double k1 = mixed_scalar_kernel(r, a, b, c);
      const double l1 = mixed_slash_left_kernel(r, a, b, c);
      const double l2 = mixed_slash_right_kernel(r, a, b, c);
      CHECK(std::abs(k1 - l1 - l2) <= 1e-12 * (std::abs(k1) + std::abs(l1) + std::abs(l2)) + 1e-300);
      CHECK(l2 == doctest::Approx(mixed_slash_left_kernel(mirrored(r), a, c, b)).epsilon(1e-12));
    }
  }
}

TEST_CASE("a flipped sign breaks the derivative combination") {
  // Mutation check: the identity above is sensitive to the relative sign.
  // Points on the shell domain of each sheet, where all three kernels are nonzero.
  const double a = 1.3;
  for (ConeRegion r : {ConeRegion::upper, ConeRegion::lower}) {
    const double b = r == ConeRegion::upper ? 2.9 : 0.4;
    const double c = r == ConeRegion::upper ? 0.4 : 2.9;
    const double k1 = mixed_scalar_kernel(r, a, b, c);
    const double l1 = mixed_slash_left_kernel(r, a, b, c);
    const double l2 = mixed_slash_right_kernel(r, a, b, c);
    REQUIRE(l2 != 0.0);
    CHECK(std::abs(k1 - l1 + l2) > 1e-6 * (std::abs(k1) + std::abs(l1) + std::abs(l2)));
  }
}

TEST_CASE("contracted kernel differs from scalar * (b + c - a) / 2 by the light-cone offset") {
  gen::Source src(6);
  for (int i = 0; i < 100; ++i) {
    const double b = src.uniform(0.05, 4.0), c = src.uniform(0.05, 4.0);
    for (ConeRegion r : {ConeRegion::upper, ConeRegion::lower, ConeRegion::outside}) {
      const double a = r == ConeRegion::outside ? -src.uniform(0.01, 5.0) : src.uniform(0.01, 5.0);
      const double lhs = mixed_contracted_kernel(r, a, b, c);
      const double rhs = mixed_scalar_kernel(r, a, b, c) * (b + c - a) / 2.0 - contracted_offset(r, b, c);
      CHECK(std::abs(lhs - rhs) <= 1e-11 * (std::abs(lhs) + std::abs(contracted_offset(r, b, c))) + 1e-300);
    }
  }
}

TEST_CASE("mixed kernels check the region against the sign of a") {
  CHECK_THROWS_AS(mixed_scalar_kernel(ConeRegion::outside, 1.0, 1.0, 2.0), Error);
  CHECK_THROWS_AS(mixed_scalar_kernel(ConeRegion::upper, -1.0, 1.0, 2.0), Error);
  CHECK_THROWS_AS(mixed_slash_left_kernel(ConeRegion::lower, 0.0, 1.0, 2.0), Error);
}

TEST_CASE("regularized kernel: eps scaling and domain checks") {
  const double q0 = 0.3, qn = 1.0, b = 0.5, c = 0.7;
  const double k1 = regularized_mixed_kernel(q0, qn, b, c, 1e-3);
  const double k2 = regularized_mixed_kernel(q0, qn, b, c, 2e-3);
  // The exponent is O(eps), so the kernel is close to 1 / (2 eps |q|).
  CHECK(k1 * 2e-3 * qn == doctest::Approx(1.0).epsilon(1e-2));
  CHECK(k1 / k2 == doctest::Approx(2.0).epsilon(1e-2));
  CHECK_THROWS_AS(regularized_mixed_kernel(2.0, 1.0, b, c, 1e-3), Error);
  CHECK_THROWS_AS(regularized_mixed_kernel(q0, qn, b, c, 0.0), Error);
}
