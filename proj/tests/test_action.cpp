#include <doctest.h>

#include <cmath>

#include "dsea/action.hpp"
#include "dsea/constants.hpp"
#include "dsea/error.hpp"
#include "dsea/kernels.hpp"
#include "generators.hpp"

using namespace dsea;

namespace {

const QuadSettings quad{};

Sea scaled(const Sea& sea, double mass_factor, double weight_factor) {
  Sea out = sea;
  for (double& m : out.masses) m *= mass_factor;
  for (double& w : out.weights) w *= weight_factor;
  return out;
}

}  // namespace

TEST_CASE("one generation: the pair kernel is constant, so the quartic action is 16 C rho^4 m^6 A") {
  CHECK(action_quartic(Sea{{1.0}, {1.0}}, 2.0, quad) == doctest::Approx(32.0 * quartic_prefactor).epsilon(1e-13));
  const double m = 1.7, rho = 0.3, a_max = 9.0;
  CHECK(action_quartic(Sea{{m}, {rho}}, a_max, quad) ==
        doctest::Approx(16.0 * quartic_prefactor * std::pow(rho, 4) * std::pow(m, 6) * a_max).epsilon(1e-13));
}

TEST_CASE("pair integral table agrees with direct integrals and has the pair symmetries") {
  const Sea sea{{1.0, 1.9, 3.2}, {1.0, 0.2, 0.05}};
  const double a_max = 20.0;
  const PairIntegralTable table(sea, a_max, quad);
  CHECK(table.converged());
  CHECK(table.pair_count() == 6);
  const auto& m = sea.masses;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k)
        for (std::size_t l = 0; l < 3; ++l) {
          const double g = table.at(i, j, k, l);
          CHECK(g == table.at(j, i, k, l));
          CHECK(g == table.at(k, l, i, j));
          const double direct = pair_integral(m[i], m[j], m[k], m[l], a_max, quad).value;
          CHECK(gen::rel_diff(g, direct) < 1e-11);
        }
  const auto gram = pair_gram_matrix(table);
  for (std::size_t p = 0; p < 6; ++p) CHECK(gram[p * 6 + p] > 0.0);
}

TEST_CASE("quartic action scales with the fourth power of the weights and the eighth of the masses") {
  gen::Source src(21);
  for (int i = 0; i < 10; ++i) {
    const Sea sea = src.normalized_sea(1 + src.index(3));
    const double a_max = 1.5 * sea.max_mass() * sea.max_mass();
    const double lambda = src.log_uniform(0.3, 3.0), mu = src.log_uniform(0.1, 10.0);
    const double base = action_quartic(sea, a_max, quad);
    const double moved = action_quartic(scaled(sea, lambda, mu), a_max * lambda * lambda, quad);
    CHECK(gen::rel_diff(moved, base * std::pow(mu, 4) * std::pow(lambda, 8)) < 1e-10);
  }
}

TEST_CASE("free-term gradient matches finite differences") {
  gen::Source src(22);
  for (int i = 0; i < 20; ++i) {
    const double a_max = src.log_uniform(1.0, 100.0);
    const double m3 = src.uniform(-1.0, 1.0), m5 = src.uniform(-1.0, 1.0);
    const double h = 1e-5;
    const auto [g3, g5] = natural_free_gradient(a_max, m3, m5);
    const double f3 = (natural_free_term(a_max, m3 + h, m5) - natural_free_term(a_max, m3 - h, m5)) / (2.0 * h);
    const double f5 = (natural_free_term(a_max, m3, m5 + h) - natural_free_term(a_max, m3, m5 - h)) / (2.0 * h);
    CHECK(std::abs(g3 - f3) < 1e-8 * (1.0 + std::abs(g3)));
    CHECK(std::abs(g5 - f5) < 1e-8 * (1.0 + std::abs(g5)));
  }
}

TEST_CASE("natural action does not depend on the cutoff") {
  gen::Source src(23);
  for (int i = 0; i < 6; ++i) {
    const Sea sea = src.normalized_sea(1 + src.index(3), 4.0);
    Couplings c;
    c.c0 = src.uniform(-1e-3, 1e-3);
    c.c3 = src.uniform(-1e-4, 1e-4);
    const double m2 = sea.max_mass() * sea.max_mass();
    c.a_max = 1.5 * m2;
    const double reference = action_extended(sea, c, quad);
    for (double factor : {3.0, 10.0, 60.0}) {
      c.a_max = factor * m2;
      CHECK(gen::rel_diff(action_extended(sea, c, quad), reference) < 1e-9);
    }
  }
}

TEST_CASE("extended action adds the coupling terms linearly") {
  const Sea sea{{1.0, 2.5}, {1.0, 0.1}};
  Couplings c;
  c.free_term = FreeTerm::zero;
  const ActionReport bare = evaluate_action(sea, c, quad);
  CHECK(bare.free_term == 0.0);
  CHECK(bare.extended == bare.quartic);
  c.c0 = 2.0;
  c.c1 = -3.0;
  c.c3 = 0.5;
  c.c4 = 0.25;
  const ActionReport full = evaluate_action(sea, c, quad);
  const double expected = bare.quartic + 4.0 * bare.scalars.m3 - 6.0 * bare.scalars.m5 +
                          0.5 * weighted_moment(sea, 4) + 0.25 * weighted_moment(sea, 5);
  CHECK(full.extended == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("regularized action rejects a non-positive regulator") {
  CHECK_THROWS_AS(regularized_action(Sea{{1.0}, {1.0}}, 0.0, 2.0, quad), Error);
}
