#include "dsea/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace dsea {
namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 21>;
using Gauss = boost::math::quadrature::gauss<double, 10>;

constexpr double epsilon = std::numeric_limits<double>::epsilon();

struct Piece {
  const Integrand* f = nullptr;
  double lo = 0.0;
  double hi = 0.0;
  double value = 0.0;
  double error = 0.0;
  bool at_roundoff = false;
  bool operator<(const Piece& other) const { return error < other.error; }
};

// One 21-point rule with the usual error heuristic: the Kronrod-Gauss
// difference, sharpened for smooth integrands and floored at roundoff.
Piece apply_rule(const Integrand& f, double lo, double hi) {
  const auto& nodes = Kronrod::abscissa();
  const auto& kw = Kronrod::weights();
  const auto& gw = Gauss::weights();
  const double centre = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  double fv[21];
  fv[0] = f(centre);
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    fv[2 * i - 1] = f(centre - half * nodes[i]);
    fv[2 * i] = f(centre + half * nodes[i]);
  }
  double kronrod = kw[0] * fv[0];
  double gauss = 0.0;
  double absolute = kw[0] * std::abs(fv[0]);
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    const double pair = fv[2 * i - 1] + fv[2 * i];
    kronrod += kw[i] * pair;
    absolute += kw[i] * (std::abs(fv[2 * i - 1]) + std::abs(fv[2 * i]));
    if (i % 2 == 1) gauss += gw[i / 2] * pair;
  }
  const double mean = 0.5 * kronrod;
  double spread = kw[0] * std::abs(fv[0] - mean);
  for (std::size_t i = 1; i < nodes.size(); ++i)
    spread += kw[i] * (std::abs(fv[2 * i - 1] - mean) + std::abs(fv[2 * i] - mean));

  Piece out{&f, lo, hi, kronrod * half, std::abs((kronrod - gauss) * half)};
  absolute *= std::abs(half);
  spread *= std::abs(half);
  if (spread != 0.0 && out.error != 0.0) out.error = spread * std::min(1.0, std::pow(200.0 * out.error / spread, 1.5));
  const double floor = 50.0 * epsilon * absolute;
  if (out.error <= floor) {
    out.error = floor;
    out.at_roundoff = true;
  }
  return out;
}

struct Segment {
  Integrand f;
  double lo;
  double hi;
};

// Globally adaptive over all segments at once, so the error target refers to
// the whole integral rather than to each piece between breakpoints.
QuadResult run_segments(const std::vector<Segment>& segments, const QuadSettings& settings) {
  QuadResult out;
  std::priority_queue<Piece> open;
  double value = 0.0;
  double error = 0.0;
  double settled_value = 0.0;
  double settled_error = 0.0;
  auto push = [&](const Piece& p) {
    if (!std::isfinite(p.value)) {
      value = p.value;
      return;
    }
    if (p.at_roundoff) {
      settled_value += p.value;
      settled_error += p.error;
    } else {
      open.push(p);
      value += p.value;
      error += p.error;
    }
  };
  for (const auto& seg : segments)
    if (seg.hi > seg.lo) push(apply_rule(seg.f, seg.lo, seg.hi));
  std::size_t splits = 0;
  auto total = [&] { return value + settled_value; };
  auto target = [&] { return std::max(settings.tol, settings.rel_tol * std::abs(total())); };
  while (!open.empty() && std::isfinite(value) && error + settled_error > target() && splits < settings.max_subdiv) {
    const Piece worst = open.top();
    open.pop();
    value -= worst.value;
    error -= worst.error;
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) {
      settled_value += worst.value;
      settled_error += worst.error;
      continue;
    }
    push(apply_rule(*worst.f, worst.lo, mid));
    push(apply_rule(*worst.f, mid, worst.hi));
    ++splits;
  }
  // Re-sum to shed the drift of the running totals.
  double fresh_value = settled_value;
  double fresh_error = settled_error;
  while (!open.empty()) {
    fresh_value += open.top().value;
    fresh_error += open.top().error;
    open.pop();
  }
  out.value = std::isfinite(value) ? fresh_value : value;
  out.error = fresh_error;
  out.converged = std::isfinite(out.value) &&
                  (fresh_error <= std::max(settings.tol, settings.rel_tol * std::abs(out.value)) ||
                   fresh_error <= settled_error * (1.0 + 1e-9) + settings.tol);
  return out;
}

}  // namespace

QuadResult& QuadResult::operator+=(const QuadResult& other) {
  value += other.value;
  error += other.error;
  converged = converged && other.converged;
  return *this;
}

std::vector<double> interior_nodes(std::span<const double> nodes, double lo, double hi) {
  std::vector<double> out;
  for (double n : nodes)
    if (n > lo && n < hi) out.push_back(n);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void add_decade_nodes(std::vector<double>& nodes, double hi) {
  const std::size_t count = nodes.size();
  for (std::size_t i = 0; i < count; ++i) {
    const double t = nodes[i];
    if (!(t > 0.0)) continue;
    for (double v = 10.0 * t; v < hi; v *= 10.0) nodes.push_back(v);
  }
}

QuadResult integrate(const Integrand& f, double lo, double hi, const QuadSettings& settings,
                     std::span<const double> breakpoints) {
  if (!(hi > lo)) return {};
  std::vector<Segment> segments;
  double left = lo;
  for (double node : interior_nodes(breakpoints, lo, hi)) {
    segments.push_back({f, left, node});
    left = node;
  }
  segments.push_back({f, left, hi});
  return run_segments(segments, settings);
}

QuadResult integrate_with_root_nodes(const Integrand& f, double lo, double hi, std::span<const double> root_nodes,
                                     const QuadSettings& settings) {
  if (!(hi > lo)) return {};
  const bool hi_is_node = std::find(root_nodes.begin(), root_nodes.end(), hi) != root_nodes.end();
  std::vector<Segment> segments;
  auto segment = [&](double a, double b, bool root_at_right) {
    if (!root_at_right) {
      segments.push_back({f, a, b});
      return;
    }
    // a = b - u^2 absorbs a square-root edge at b.
    segments.push_back({[&f, b](double u) { return 2.0 * u * f(b - u * u); }, 0.0, std::sqrt(b - a)});
  };
  double left = lo;
  for (double node : interior_nodes(root_nodes, lo, hi)) {
    segment(left, node, true);
    left = node;
  }
  segment(left, hi, hi_is_node);
  return run_segments(segments, settings);
}

}  // namespace dsea
