#include <doctest.h>

#include <cmath>
#include <string>

#include "dsea/constants.hpp"
#include "dsea/error.hpp"
#include "dsea/model.hpp"
#include "generators.hpp"

using namespace dsea;

namespace {

std::string error_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

Sea with_test(const Sea& sea, double m, double weight) {
  Sea out = sea;
  out.masses.push_back(m);
  out.weights.push_back(weight);
  return out;
}

}  // namespace

TEST_CASE("light-cone coefficients of a single sea") {
  const Sea sea{{1.0}, {1.0}};
  CHECK(compute_m3(sea) == doctest::Approx(-1.0 / (32.0 * pi5)).epsilon(1e-15));
  CHECK(compute_m5(sea) == 0.0);
  CHECK(compute_constraint_T(sea) == 1.0);
}

TEST_CASE("light-cone coefficients of two seas from the double sums") {
  // pairs (1,1): 2, (1,2) twice: 0.5 * 9 each, (2,2): 0.25 * 16
  const Sea sea{{1.0, 2.0}, {1.0, 0.5}};
  CHECK(compute_m3(sea) == doctest::Approx(-15.0 / (64.0 * pi5)).epsilon(1e-14));
  // only the mixed pairs contribute: 2 * 0.5 * 1 * 27
  CHECK(compute_m5(sea) == doctest::Approx(27.0 / (512.0 * pi5)).epsilon(1e-14));
  CHECK(compute_constraint_T(sea) == doctest::Approx(5.0));
}

TEST_CASE("test-sea derivatives match the symmetric difference of the quadratic forms") {
  gen::Source src(11);
  for (int i = 0; i < 50; ++i) {
    const Sea sea = src.normalized_sea(1 + src.index(4));
    const double m = src.test_mass(sea, 10.0);
    const double h = 1e-3;
    // m3 and m5 are quadratic in the test weight, so the central difference is exact.
    const double d3 = (compute_m3(with_test(sea, m, h)) - compute_m3(with_test(sea, m, -h))) / (2.0 * h);
    const double d5 = (compute_m5(with_test(sea, m, h)) - compute_m5(with_test(sea, m, -h))) / (2.0 * h);
    CHECK(gen::rel_diff(m3_test_derivative(sea, m), d3) < 1e-9);
    CHECK(gen::rel_diff(m5_test_derivative(sea, m), d5) < 1e-9);
  }
}

TEST_CASE("weighted moments") {
  const Sea sea{{1.0, 3.0}, {2.0, 0.5}};
  CHECK(weighted_moment(sea, 3) == doctest::Approx(2.0 + 13.5));
  CHECK(weighted_moment(sea, 4) == doctest::Approx(2.0 + 40.5));
  CHECK(weighted_moment(sea, 5) == doctest::Approx(2.0 + 121.5));
}

TEST_CASE("gauge normalization round-trips") {
  gen::Source src(3);
  for (int i = 0; i < 20; ++i) {
    Sea sea = src.normalized_sea(3);
    const double lambda = src.log_uniform(0.1, 10.0);
    const double mu = src.log_uniform(0.1, 10.0);
    for (double& m : sea.masses) m *= lambda;
    for (double& w : sea.weights) w *= mu;
    const auto [normalized, scale] = normalize_gauge(sea);
    CHECK(normalized.masses[0] == 1.0);
    CHECK(normalized.weights[0] == 1.0);
    CHECK(scale.mass == doctest::Approx(lambda));
    const Sea back = invert_gauge(normalized, scale);
    for (std::size_t k = 0; k < sea.size(); ++k) {
      CHECK(back.masses[k] == doctest::Approx(sea.masses[k]).epsilon(1e-14));
      CHECK(back.weights[k] == doctest::Approx(sea.weights[k]).epsilon(1e-14));
    }
  }
}

TEST_CASE("reduced couplings convert both ways") {
  const Couplings native = couplings_from_reduced(-6.692e8, -2.516e9, 9658.25, 8416.56);
  CHECK(native.c3 == doctest::Approx(9658.25 * quartic_prefactor));
  CHECK(native.c0 == doctest::Approx(-6.692e8 * quartic_prefactor * pi6 / 512.0));
  const Couplings back = couplings_to_reduced(native);
  CHECK(back.c0 == doctest::Approx(-6.692e8));
  CHECK(back.c1 == doctest::Approx(-2.516e9));
  CHECK(back.c4 == doctest::Approx(8416.56));
}

TEST_CASE("cutoff defaults to 1.5 times the largest squared mass") {
  const Sea sea{{1.0, 4.0}, {1.0, 0.1}};
  CHECK(cutoff_for(sea, Couplings{}) == doctest::Approx(24.0));
  Couplings c;
  c.a_max = 30.0;
  CHECK(cutoff_for(sea, c) == 30.0);
}

TEST_CASE("validation names the offending field") {
  CHECK(error_of([] { validate_sea(Sea{{}, {}}); }).find("masses") == 0);
  CHECK(error_of([] { validate_sea(Sea{{1.0, 2.0}, {1.0}}); }).find("weights") == 0);
  CHECK(error_of([] { validate_sea(Sea{{1.0, -2.0}, {1.0, 1.0}}); }).find("masses[1]") == 0);
  CHECK(error_of([] { validate_sea(Sea{{2.0, 1.0}, {1.0, 1.0}}); }).find("masses[1]") == 0);
  CHECK(error_of([] { validate_sea(Sea{{1.0}, {-1.0}}); }).find("weights[0]") == 0);
  Couplings c;
  c.a_max = 0.5;
  CHECK(error_of([&] { validate_couplings(Sea{{1.0}, {1.0}}, c); }).find("a_max") == 0);
  CHECK_NOTHROW(validate_sea(Sea{{1.0, 2.0}, {0.0, 0.0}}));
}
