#pragma once

// Hand-rolled generators for the property tests. Every test seeds its own
// engine so failures reproduce in isolation.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

#include "dsea/model.hpp"

namespace gen {

class Source {
public:
  explicit Source(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double log_uniform(double lo, double hi) { return lo * std::pow(hi / lo, uniform(0.0, 1.0)); }
  std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  bool coin(double p = 0.5) { return uniform(0.0, 1.0) < p; }

  // Masses at least `gap` apart, sorted, first one at 1.
  dsea::Sea normalized_sea(std::size_t generations, double max_mass = 6.0, double gap = 0.2) {
    dsea::Sea sea{{1.0}, {1.0}};
    while (sea.size() < generations) {
      const double m = uniform(1.0 + gap, max_mass);
      if (std::all_of(sea.masses.begin(), sea.masses.end(), [&](double x) { return std::abs(x - m) >= gap; })) {
        sea.masses.push_back(m);
        sea.weights.push_back(log_uniform(1e-3, 1.0));
      }
    }
    std::vector<std::size_t> order(sea.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return sea.masses[a] < sea.masses[b]; });
    dsea::Sea sorted;
    for (std::size_t i : order) {
      sorted.masses.push_back(sea.masses[i]);
      sorted.weights.push_back(sea.weights[i]);
    }
    return sorted;
  }

  // Test mass away from every seam by at least `gap`, either sign.
  double test_mass(const dsea::Sea& sea, double max_abs, double gap = 0.05) {
    while (true) {
      const double m = (coin() ? 1.0 : -1.0) * uniform(0.2, max_abs);
      bool clear = true;
      for (double mb : sea.masses) clear = clear && std::abs(std::abs(m) - mb) >= gap;
      if (clear) return m;
    }
  }

private:
  std::mt19937_64 rng_;
};

inline double rel_diff(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

}  // namespace gen
