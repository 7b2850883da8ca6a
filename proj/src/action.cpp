#include "dsea/action.hpp"

#include <algorithm>
#include <cmath>

#include "dsea/constants.hpp"
#include "dsea/error.hpp"
#include "dsea/kernels.hpp"

namespace dsea {
namespace {

// Real exponential integral E1(x), x > 0.
double expint_e1(double x) { return -std::expint(-x); }

std::vector<double> sea_thresholds(const Sea& sea) {
  std::vector<double> out;
  for (std::size_t i = 0; i < sea.size(); ++i)
    for (std::size_t j = i + 1; j < sea.size(); ++j) out.push_back(pair_threshold(sea.masses[i], sea.masses[j]));
  return out;
}

// sum_{ab} rho_a rho_b pair_kernel(a, m_a, m_b)
double pair_sum(const Sea& sea, double a) {
  double sum = 0.0;
  for (std::size_t i = 0; i < sea.size(); ++i) {
    sum += sea.weights[i] * sea.weights[i] * pair_kernel(a, sea.masses[i], sea.masses[i]);
    for (std::size_t j = i + 1; j < sea.size(); ++j)
      sum += 2.0 * sea.weights[i] * sea.weights[j] * pair_kernel(a, sea.masses[i], sea.masses[j]);
  }
  return sum;
}

void require_converged(const QuadResult& r, const char* what) {
  if (!r.converged)
    throw Error(Errc::quadrature, std::string(what) + ": quadrature did not converge (error estimate " +
                                      std::to_string(r.error) + ")");
}

}  // namespace

QuadResult pair_integral(double x, double y, double u, double v, double a_max, const QuadSettings& quad) {
  if (!(a_max > 0.0)) throw Error(Errc::invalid_argument, "a_max: must be positive");
  std::vector<double> nodes = {pair_threshold(x, y), pair_threshold(u, v)};
  add_decade_nodes(nodes, a_max);
  return integrate_with_root_nodes([&](double a) { return pair_kernel(a, x, y) * pair_kernel(a, u, v); }, 0.0, a_max,
                                   nodes, quad);
}

PairIntegralTable::PairIntegralTable(const Sea& sea, double a_max, const QuadSettings& quad)
    : generations_(sea.size()), a_max_(a_max) {
  for (std::size_t i = 0; i < generations_; ++i)
    for (std::size_t j = i; j < generations_; ++j) pairs_.emplace_back(i, j);
  const std::size_t n = pairs_.size();
  values_.assign(n * n, 0.0);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = p; q < n; ++q) {
      const auto [i, j] = pairs_[p];
      const auto [k, l] = pairs_[q];
      const QuadResult r = pair_integral(sea.masses[i], sea.masses[j], sea.masses[k], sea.masses[l], a_max, quad);
      converged_ = converged_ && r.converged;
      values_[p * n + q] = r.value;
      values_[q * n + p] = r.value;
    }
}

std::size_t PairIntegralTable::index_of(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  // Row-major enumeration of i <= j.
  return i * generations_ - (i * (i - 1)) / 2 + (j - i);
}

double PairIntegralTable::at(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const {
  return entry(index_of(i, j), index_of(k, l));
}

double action_quartic(const Sea& sea, const PairIntegralTable& table) {
  const std::size_t n = table.pair_count();
  std::vector<double> w(n);
  for (std::size_t p = 0; p < n; ++p) {
    const auto [i, j] = table.pair(p);
    w[p] = sea.weights[i] * sea.weights[j] * (i == j ? 1.0 : 2.0);
  }
  double sum = 0.0;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) sum += w[p] * w[q] * table.entry(p, q);
  return quartic_prefactor * sum;
}

double action_quartic(const Sea& sea, double a_max, const QuadSettings& quad) {
  PairIntegralTable table(sea, a_max, quad);
  if (!table.converged()) throw Error(Errc::quadrature, "action: pair integrals did not converge");
  return action_quartic(sea, table);
}

double natural_free_term(double a_max, double m3, double m5) {
  const double lg = euler_gamma + std::log(a_max / 2.0);
  return 0.25 * (-m3 * m3 * a_max - 8.0 * m3 * m5 * lg + 16.0 * m5 * m5 / a_max);
}

std::pair<double, double> natural_free_gradient(double a_max, double m3, double m5) {
  const double lg = euler_gamma + std::log(a_max / 2.0);
  return {0.25 * (-2.0 * m3 * a_max - 8.0 * m5 * lg), 0.25 * (-8.0 * m3 * lg + 32.0 * m5 / a_max)};
}

ActionReport evaluate_action(const Sea& sea, const Couplings& couplings, const QuadSettings& quad) {
  ActionReport out;
  out.a_max = cutoff_for(sea, couplings);
  out.scalars = derive_scalars(sea);
  out.quartic = action_quartic(sea, out.a_max, quad);
  out.free_term =
      couplings.free_term == FreeTerm::natural ? natural_free_term(out.a_max, out.scalars.m3, out.scalars.m5) : 0.0;
  out.extended = out.quartic + out.free_term + 2.0 * couplings.c0 * out.scalars.m3 +
                 2.0 * couplings.c1 * out.scalars.m5 + couplings.c3 * weighted_moment(sea, 4) +
                 couplings.c4 * weighted_moment(sea, 5);
  return out;
}

double action_extended(const Sea& sea, const Couplings& couplings, const QuadSettings& quad) {
  return evaluate_action(sea, couplings, quad).extended;
}

double regularized_action(const Sea& sea, double eps, double a_max, const QuadSettings& quad) {
  if (!(eps > 0.0)) throw Error(Errc::domain, "regularized action needs eps > 0");
  if (!(a_max > 0.0)) throw Error(Errc::invalid_argument, "a_max: must be positive");
  const double m3 = compute_m3(sea);
  const double m5 = compute_m5(sea);
  const double shift = 128.0 * pi5 * m3;
  auto nodes = sea_thresholds(sea);
  add_decade_nodes(nodes, a_max);
  const QuadResult inner = integrate_with_root_nodes(
      [&](double a) {
        const double v = pair_sum(sea, a) + shift * std::expm1(-eps * a / 2.0);
        return v * v;
      },
      0.0, a_max, nodes, quad);
  require_converged(inner, "regularized action");
  // Closed-form tail plus counter terms; the 1/eps pieces are combined first.
  const double pole = m3 * m3 * std::expm1(-eps * a_max) / (4.0 * eps);
  const double tail_rest = 2.0 * m3 * m5 * expint_e1(eps * a_max / 2.0) + 4.0 * m5 * m5 / a_max;
  const double log_counter = 2.0 * m3 * m5 * std::log(eps);
  return quartic_prefactor * inner.value + pole + tail_rest + log_counter;
}

std::pair<double, double> cutoff_shift_compensation(const Sea& sea, double a_from, double a_to) {
  const double m3 = compute_m3(sea);
  const double m5 = compute_m5(sea);
  const double lr = std::log(a_to / a_from);
  const double d1 = 0.25 * (2.0 * m3 * (a_to - a_from) + 8.0 * m5 * lr);
  const double d2 = 0.25 * (8.0 * m3 * lr + 32.0 * m5 * (1.0 / a_from - 1.0 / a_to));
  return {-d1 / 2.0, -d2 / 2.0};
}

std::vector<double> pair_gram_matrix(const PairIntegralTable& table) {
  const std::size_t n = table.pair_count();
  std::vector<double> out(n * n);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) out[p * n + q] = table.entry(p, q);
  return out;
}

}  // namespace dsea
