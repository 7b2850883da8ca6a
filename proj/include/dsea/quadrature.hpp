#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace dsea {

struct QuadSettings {
  double tol = 1e-10;           // absolute error target
  double rel_tol = 1e-12;       // relative error target; either one suffices
  std::size_t max_subdiv = 4000; // bisections allowed in total
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;

  QuadResult& operator+=(const QuadResult& other);
};

using Integrand = std::function<double(double)>;

// Globally adaptive Gauss-Kronrod (21 point) on [lo, hi], split at every node in
// `root_nodes` that lies inside the interval. The integrand may behave like
// sqrt(node - a) just below each node; segments ending at a node are
// integrated in u with a = node - u^2, which removes that singularity.
QuadResult integrate_with_root_nodes(const Integrand& f, double lo, double hi, std::span<const double> root_nodes,
                                     const QuadSettings& settings);

// Globally adaptive Gauss-Kronrod on [lo, hi] with optional interior breakpoints.
QuadResult integrate(const Integrand& f, double lo, double hi, const QuadSettings& settings,
                     std::span<const double> breakpoints = {});

// Appends t * 10^k (k = 1, 2, ...) below hi for every positive node t. The
// pair kernels fall off like 1/a just above small thresholds, which bisection
// alone would resolve only very deep.
void add_decade_nodes(std::vector<double>& nodes, double hi);

// Sorted, de-duplicated nodes strictly inside (lo, hi).
std::vector<double> interior_nodes(std::span<const double> nodes, double lo, double hi);

}  // namespace dsea
