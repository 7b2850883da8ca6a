#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "dsea/model.hpp"
#include "dsea/quadrature.hpp"

namespace dsea {

// Integral of pair_kernel(a,x,y) * pair_kernel(a,u,v) over [0, a_max].
QuadResult pair_integral(double x, double y, double u, double v, double a_max, const QuadSettings& quad);

// Pair integrals for every pair of unordered mass pairs of a sea, each orbit
// of the symmetry group evaluated once.
class PairIntegralTable {
public:
  PairIntegralTable(const Sea& sea, double a_max, const QuadSettings& quad);

  std::size_t pair_count() const { return pairs_.size(); }
  std::pair<std::size_t, std::size_t> pair(std::size_t p) const { return pairs_[p]; }
  double entry(std::size_t p, std::size_t q) const { return values_[p * pairs_.size() + q]; }
  // G(m_i, m_j; m_k, m_l) for generation indices.
  double at(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const;
  double a_max() const { return a_max_; }
  bool converged() const { return converged_; }

private:
  std::size_t index_of(std::size_t i, std::size_t j) const;

  std::size_t generations_;
  double a_max_;
  bool converged_ = true;
  std::vector<std::pair<std::size_t, std::size_t>> pairs_;
  std::vector<double> values_;
};

// (1 / 2^16 pi^10) sum rho rho rho rho G.
double action_quartic(const Sea& sea, double a_max, const QuadSettings& quad);
double action_quartic(const Sea& sea, const PairIntegralTable& table);

// Finite part of the action beyond the cutoff in the natural gauge, and its
// partial derivatives with respect to m3 and m5.
double natural_free_term(double a_max, double m3, double m5);
std::pair<double, double> natural_free_gradient(double a_max, double m3, double m5);

// quartic + free term + 2 c0 m3 + 2 c1 m5 + c3 sum(rho m^4) + c4 sum(rho m^5).
double action_extended(const Sea& sea, const Couplings& couplings, const QuadSettings& quad);

struct ActionReport {
  double quartic = 0.0;
  double free_term = 0.0;
  double extended = 0.0;
  DerivedScalars scalars;
  double a_max = 0.0;
};
ActionReport evaluate_action(const Sea& sea, const Couplings& couplings, const QuadSettings& quad);

// Action with exponential regulator eps and the two counter terms, the part
// beyond a_max integrated in closed form. Converges as eps -> 0 to
// action_quartic + natural_free_term.
double regularized_action(const Sea& sea, double eps, double a_max, const QuadSettings& quad);

// (delta c0, delta c1) that keep the variation density unchanged when the
// cutoff moves from a_from to a_to with the free term fixed to zero.
std::pair<double, double> cutoff_shift_compensation(const Sea& sea, double a_from, double a_to);

// Gram matrix of pair_kernel(., m_i, m_j) over unordered pairs, in L2([0, a_max]).
std::vector<double> pair_gram_matrix(const PairIntegralTable& table);

}  // namespace dsea
