#include "dsea/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "dsea/constants.hpp"
#include "dsea/error.hpp"

namespace dsea {

double Sea::max_mass() const {
  double out = 0.0;
  for (double m : masses) out = std::max(out, std::abs(m));
  return out;
}

void validate_sea(const Sea& sea) {
  if (sea.masses.empty()) throw Error(Errc::invalid_argument, "masses: at least one generation required");
  if (sea.weights.size() != sea.masses.size())
    throw Error(Errc::invalid_argument, "weights: length " + std::to_string(sea.weights.size()) +
                                            " does not match masses length " + std::to_string(sea.masses.size()));
  for (std::size_t i = 0; i < sea.size(); ++i) {
    const double m = sea.masses[i];
    if (!std::isfinite(m) || m <= 0.0)
      throw Error(Errc::invalid_argument, "masses[" + std::to_string(i) + "]: must be finite and positive");
    if (i > 0 && m < sea.masses[i - 1])
      throw Error(Errc::invalid_argument, "masses[" + std::to_string(i) + "]: masses must be non-decreasing");
    const double w = sea.weights[i];
    if (!std::isfinite(w) || w < 0.0)
      throw Error(Errc::invalid_argument, "weights[" + std::to_string(i) + "]: must be finite and non-negative");
  }
}

double cutoff_for(const Sea& sea, const Couplings& couplings) {
  if (couplings.a_max > 0.0) return couplings.a_max;
  const double mm = sea.max_mass();
  return 1.5 * mm * mm;
}

void validate_couplings(const Sea& sea, const Couplings& couplings) {
  for (double c : {couplings.c0, couplings.c1, couplings.c3, couplings.c4})
    if (!std::isfinite(c)) throw Error(Errc::invalid_argument, "c0/c1/c3/c4: must be finite");
  if (couplings.a_max > 0.0) {
    const double mm = sea.max_mass();
    if (!(couplings.a_max > mm * mm))
      throw Error(Errc::invalid_argument, "a_max: must exceed the largest squared mass");
  } else if (couplings.a_max < 0.0 || std::isnan(couplings.a_max)) {
    throw Error(Errc::invalid_argument, "a_max: must be positive");
  }
}

double compute_m3(const Sea& sea) {
  double sum = 0.0;
  for (std::size_t a = 0; a < sea.size(); ++a)
    for (std::size_t b = 0; b < sea.size(); ++b)
      sum += sea.weights[a] * sea.weights[b] * (std::pow(sea.masses[a], 3) + std::pow(sea.masses[b], 3));
  return -sum / (64.0 * pi5);
}

double compute_m5(const Sea& sea) {
  double sum = 0.0;
  for (std::size_t a = 0; a < sea.size(); ++a)
    for (std::size_t b = 0; b < sea.size(); ++b) {
      const double d = sea.masses[a] - sea.masses[b];
      sum += sea.weights[a] * sea.weights[b] * d * d * std::pow(sea.masses[a] + sea.masses[b], 3);
    }
  return sum / (512.0 * pi5);
}

double compute_constraint_T(const Sea& sea) { return weighted_moment(sea, 3); }

DerivedScalars derive_scalars(const Sea& sea) {
  return {compute_m3(sea), compute_m5(sea), compute_constraint_T(sea)};
}

double m3_test_derivative(const Sea& sea, double m) {
  double sum = 0.0;
  for (std::size_t a = 0; a < sea.size(); ++a) sum += sea.weights[a] * (std::pow(sea.masses[a], 3) + m * m * m);
  return -sum / (32.0 * pi5);
}

double m5_test_derivative(const Sea& sea, double m) {
  double sum = 0.0;
  for (std::size_t a = 0; a < sea.size(); ++a) {
    const double d = sea.masses[a] - m;
    sum += sea.weights[a] * d * d * std::pow(sea.masses[a] + m, 3);
  }
  return sum / (256.0 * pi5);
}

double weighted_moment(const Sea& sea, int power) {
  double sum = 0.0;
  for (std::size_t a = 0; a < sea.size(); ++a) sum += sea.weights[a] * std::pow(sea.masses[a], power);
  return sum;
}

std::pair<Sea, GaugeScale> normalize_gauge(const Sea& sea) {
  validate_sea(sea);
  if (!(sea.weights.front() > 0.0)) throw Error(Errc::invalid_argument, "weights[0]: gauge needs a positive first weight");
  GaugeScale scale{sea.masses.front(), sea.weights.front()};
  Sea out = sea;
  for (double& m : out.masses) m /= scale.mass;
  for (double& w : out.weights) w /= scale.weight;
  out.masses.front() = 1.0;
  out.weights.front() = 1.0;
  return {out, scale};
}

Sea invert_gauge(const Sea& normalized, const GaugeScale& scale) {
  Sea out = normalized;
  for (double& m : out.masses) m *= scale.mass;
  for (double& w : out.weights) w *= scale.weight;
  return out;
}

Couplings couplings_from_reduced(double c0, double c1, double c3, double c4) {
  Couplings out;
  out.c0 = c0 * quartic_prefactor * reduced_c0_factor;
  out.c1 = c1 * quartic_prefactor * reduced_c1_factor;
  out.c3 = c3 * quartic_prefactor;
  out.c4 = c4 * quartic_prefactor;
  return out;
}

Couplings couplings_to_reduced(const Couplings& native) {
  Couplings out = native;
  out.c0 = native.c0 / (quartic_prefactor * reduced_c0_factor);
  out.c1 = native.c1 / (quartic_prefactor * reduced_c1_factor);
  out.c3 = native.c3 / quartic_prefactor;
  out.c4 = native.c4 / quartic_prefactor;
  return out;
}

}  // namespace dsea
