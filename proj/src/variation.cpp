#include "dsea/variation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "dsea/action.hpp"
#include "dsea/constants.hpp"
#include "dsea/error.hpp"
#include "dsea/kernels.hpp"
#include "parallel.hpp"

namespace dsea {
namespace {

double cube(double v) { return v * v * v; }

// sum_b rho_b H(a, m, m_b)
double test_row(const Sea& sea, double m, double a) {
  double sum = 0.0;
  for (std::size_t b = 0; b < sea.size(); ++b) sum += sea.weights[b] * pair_kernel(a, m, sea.masses[b]);
  return sum;
}

// sum_{gd} rho_g rho_d H(a, m_g, m_d)
double sea_sum(const Sea& sea, double a) {
  double sum = 0.0;
  for (std::size_t i = 0; i < sea.size(); ++i) {
    sum += sea.weights[i] * sea.weights[i] * pair_kernel(a, sea.masses[i], sea.masses[i]);
    for (std::size_t j = i + 1; j < sea.size(); ++j)
      sum += 2.0 * sea.weights[i] * sea.weights[j] * pair_kernel(a, sea.masses[i], sea.masses[j]);
  }
  return sum;
}

std::vector<double> kink_nodes(const Sea& sea, double m) {
  std::vector<double> nodes;
  for (std::size_t i = 0; i < sea.size(); ++i) {
    nodes.push_back(pair_threshold(m, sea.masses[i]));
    for (std::size_t j = i + 1; j < sea.size(); ++j) nodes.push_back(pair_threshold(sea.masses[i], sea.masses[j]));
  }
  return nodes;
}

// Analytic coupling shapes and their m-derivatives.
std::array<double, 4> coupling_shapes(const Sea& sea, double m) {
  const double m3 = cube(m);
  return {m3_test_derivative(sea, m) / m3, m5_test_derivative(sea, m) / m3, m / 2.0, m * m / 2.0};
}

std::array<double, 4> coupling_shape_slopes(const Sea& sea, double m) {
  double d3 = 0.0;  // d/dm of sum rho (m_a^3 + m^3) / m^3
  double d5 = 0.0;  // d/dm of sum rho (m_a - m)^2 (m_a + m)^3 / m^3
  for (std::size_t a = 0; a < sea.size(); ++a) {
    const double ma = sea.masses[a];
    const double rho = sea.weights[a];
    d3 += rho * (-3.0 * cube(ma) / (m * m * m * m));
    const double diff = ma - m;
    const double sum = ma + m;
    const double u = diff * diff * cube(sum);
    const double du = -2.0 * diff * cube(sum) + 3.0 * diff * diff * sum * sum;
    d5 += rho * (du / cube(m) - 3.0 * u / (m * m * m * m));
  }
  return {-d3 / (32.0 * pi5), d5 / (256.0 * pi5), 0.5, m};
}

// Nearest seam (occupied mass, its mirror, or 0) to m, excluding `skip`.
double seam_distance(const Sea& sea, double m, double skip = std::numeric_limits<double>::quiet_NaN()) {
  double best = std::abs(m);
  for (double mb : sea.masses)
    for (double s : {mb, -mb}) {
      if (s == skip) continue;
      best = std::min(best, std::abs(m - s));
    }
  return best;
}

}  // namespace

double VParts::value(const Couplings& c) const {
  return base + c.c0 * shape[slot_c0] + c.c1 * shape[slot_c1] + c.c3 * shape[slot_c3] + c.c4 * shape[slot_c4];
}

VParts& VParts::operator+=(const VParts& o) {
  base += o.base;
  for (std::size_t k = 0; k < 4; ++k) shape[k] += o.shape[k];
  magnitude = std::max(magnitude, o.magnitude);
  return *this;
}

VParts& VParts::operator-=(const VParts& o) {
  base -= o.base;
  for (std::size_t k = 0; k < 4; ++k) shape[k] -= o.shape[k];
  magnitude = std::max(magnitude, o.magnitude);
  return *this;
}

VParts& VParts::operator*=(double factor) {
  base *= factor;
  for (auto& s : shape) s *= factor;
  magnitude *= std::abs(factor);
  return *this;
}

double effective_cutoff(const Sea& sea, const Couplings& couplings, double m) {
  double a = cutoff_for(sea, couplings);
  if (couplings.free_term == FreeTerm::natural) {
    for (double node : kink_nodes(sea, m)) a = std::max(a, node);
  }
  return a;
}

VParts variation_parts(const Sea& sea, const Couplings& couplings, double m, const QuadSettings& quad) {
  if (!(m != 0.0) || !std::isfinite(m)) throw Error(Errc::domain, "variation density needs a finite test mass m != 0");
  const double a_max = effective_cutoff(sea, couplings, m);
  auto nodes = kink_nodes(sea, m);
  add_decade_nodes(nodes, a_max);
  const QuadResult overlap = integrate_with_root_nodes(
      [&](double a) { return test_row(sea, m, a) * sea_sum(sea, a); }, 0.0, a_max, nodes, quad);
  if (!overlap.converged)
    throw Error(Errc::quadrature, "variation density: quadrature did not converge at m = " + std::to_string(m) +
                                      " (error estimate " + std::to_string(overlap.error) + ")");

  const double inv = 1.0 / (2.0 * cube(m));
  const double quartic = 4.0 * quartic_prefactor * overlap.value;
  double free_part = 0.0;
  double free_size = 0.0;
  if (couplings.free_term == FreeTerm::natural) {
    const double m3 = compute_m3(sea);
    const double m5 = compute_m5(sea);
    const auto [g3, g5] = natural_free_gradient(a_max, m3, m5);
    const double t3 = g3 * m3_test_derivative(sea, m);
    const double t5 = g5 * m5_test_derivative(sea, m);
    free_part = t3 + t5;
    free_size = std::abs(t3) + std::abs(t5);
  }
  VParts out;
  out.base = (quartic + free_part) * inv;
  out.shape = coupling_shapes(sea, m);
  out.magnitude = (std::abs(quartic) + free_size) * std::abs(inv);
  return out;
}

double variation_density(const Sea& sea, const Couplings& couplings, double m, const QuadSettings& quad) {
  return variation_parts(sea, couplings, m, quad).value(couplings);
}

DerivativeEstimate variation_prime_parts(const Sea& sea, const Couplings& couplings, double m,
                                         const QuadSettings& quad) {
  if (!(m != 0.0) || !std::isfinite(m)) throw Error(Errc::domain, "variation density needs a finite test mass m != 0");
  const double scale = std::abs(m);
  auto eval = [&](double x) { return variation_parts(sea, couplings, x, quad); };
  // Base only: the coupling shapes get analytic slopes below.
  auto base_of = [&](double x) { return eval(x).base; };

  DerivativeEstimate out;
  const double magnitude = eval(m).magnitude;
  const double dist = seam_distance(sea, m);
  if (dist <= 1e-9 * scale) {
    // Seam: m coincides with +-m_b. Steps stay clear of every other seam.
    double centre = m;
    for (double mb : sea.masses)
      for (double s : {mb, -mb})
        if (std::abs(m - s) <= 1e-9 * scale) centre = s;
    const double room = seam_distance(sea, centre, centre);
    double unit = 1e-3 * scale;
    if (unit > room / 4.0) unit = room / 4.0;
    const double steps[] = {unit, unit * 1e-1, unit * 1e-2};
    double quotient[3];
    for (int k = 0; k < 3; ++k)
      quotient[k] = (base_of(centre + steps[k]) - base_of(centre - steps[k])) / (2.0 * steps[k]);
    // Error terms are even in the step, leading order step^2 (up to logs).
    const double coarse = (100.0 * quotient[1] - quotient[0]) / 99.0;
    const double fine = (100.0 * quotient[2] - quotient[1]) / 99.0;
    out.parts.base = fine;
    out.error = std::abs(fine - coarse);
    out.at_seam = true;
    m = centre;
  } else {
    double h = std::min(1e-3 * scale, dist / 4.0);
    const double fp1 = base_of(m + h), fm1 = base_of(m - h);
    const double fp2 = base_of(m + 2.0 * h), fm2 = base_of(m - 2.0 * h);
    const double five = (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * h);
    const double three = (fp1 - fm1) / (2.0 * h);
    out.parts.base = five;
    out.error = std::abs(five - three);
  }
  out.parts.shape = coupling_shape_slopes(sea, m);
  out.parts.magnitude = magnitude / scale;
  return out;
}

double variation_density_prime(const Sea& sea, const Couplings& couplings, double m, const QuadSettings& quad) {
  const DerivativeEstimate d = variation_prime_parts(sea, couplings, m, quad);
  if (d.at_seam && d.error > 1e-5 * d.parts.magnitude + std::numeric_limits<double>::min())
    throw Error(Errc::no_convergence, "seam derivative at m = " + std::to_string(m) +
                                          " did not settle: extrapolants differ by " + std::to_string(d.error) +
                                          " against a scale of " + std::to_string(d.parts.magnitude));
  return d.parts.value(couplings);
}

std::vector<double> ELResiduals::stacked() const {
  std::vector<double> out(value_gaps);
  out.insert(out.end(), derivative_residuals.begin(), derivative_residuals.end());
  return out;
}

double ELResiduals::norm() const {
  double s = 0.0;
  for (double v : stacked()) s += v * v;
  return std::sqrt(s);
}

ELResiduals ELSystem::evaluate(const Couplings& couplings) const {
  ELResiduals out;
  out.scale = scale;
  const std::size_t gaps = generations - 1;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const double v = rows[r].value(couplings);
    (r < gaps ? out.value_gaps : out.derivative_residuals).push_back(v);
  }
  return out;
}

ELSystem el_system(const Sea& sea, const Couplings& couplings, const QuadSettings& quad) {
  const std::size_t g = sea.size();
  if (g == 0) throw Error(Errc::invalid_argument, "masses: at least one generation required");
  std::vector<VParts> values(g);
  std::vector<VParts> slopes(g);
  detail::parallel_for(2 * g, [&](std::size_t k) {
    if (k < g)
      values[k] = variation_parts(sea, couplings, sea.masses[k], quad);
    else
      slopes[k - g] = variation_prime_parts(sea, couplings, sea.masses[k - g], quad).parts;
  });
  ELSystem sys;
  sys.generations = g;
  sys.scale = values[0].magnitude;
  for (std::size_t a = 1; a < g; ++a) {
    VParts gap = values[a];
    gap -= values[0];
    sys.rows.push_back(gap);
  }
  for (std::size_t a = 0; a < g; ++a) sys.rows.push_back(slopes[a]);
  return sys;
}

ELResiduals el_residuals(const Sea& sea, const Couplings& couplings, const QuadSettings& quad) {
  return el_system(sea, couplings, quad).evaluate(couplings);
}

std::vector<double> build_grid(const GridSpec& spec, const Sea& sea) {
  if (!(spec.hi > spec.lo) || spec.n == 0) throw Error(Errc::invalid_argument, "grid: need min < max and n > 0");
  const double h = (spec.hi - spec.lo) / static_cast<double>(spec.n);
  std::vector<double> nodes;
  for (std::size_t i = 0; i < spec.n; ++i) nodes.push_back(spec.lo + (static_cast<double>(i) + 0.5) * h);
  if (spec.mirror) {
    // Negative nodes that already sit (up to rounding) on a mirror image are
    // replaced by the exact negation, so V(m) and V(-m) pair up exactly.
    std::vector<double> positive;
    for (double m : nodes)
      if (m > 0.0) positive.push_back(m);
    std::erase_if(nodes, [&](double m) {
      return m < 0.0 && std::any_of(positive.begin(), positive.end(), [&](double p) {
               return std::abs(p + m) <= 1e-13 * std::max(1.0, p);
             });
    });
    for (double p : positive) nodes.push_back(-p);
  }
  auto is_seam = [&](double m) {
    const double tiny = 1e-12 * std::max(1.0, std::abs(m));
    return seam_distance(sea, m) <= tiny;
  };
  std::erase_if(nodes, is_seam);
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end(),
                          [](double x, double y) { return std::abs(x - y) <= 1e-13 * std::max(1.0, std::abs(x)); }),
              nodes.end());
  return nodes;
}

namespace {

std::vector<double> refinement_nodes(const GridSpec& spec, const Sea& sea) {
  std::vector<double> out;
  if (!spec.refine_seams) return out;
  const double h = (spec.hi - spec.lo) / static_cast<double>(spec.n);
  for (double mb : sea.masses) {
    const double room = seam_distance(sea, mb, mb);
    for (double centre : {mb, -mb}) {
      if (centre <= spec.lo || centre >= spec.hi) continue;
      for (std::size_t k = 1; k <= 2 * spec.seam_levels; ++k) {
        const double d = h * std::pow(10.0, -0.5 * static_cast<double>(k));
        if (d >= room / 2.0) continue;
        out.push_back(centre - d);
        out.push_back(centre + d);
      }
    }
  }
  return out;
}

}  // namespace

void detect_minima(VCurve& curve) {
  std::vector<std::pair<double, double>> points;
  for (std::size_t i = 0; i < curve.grid.size(); ++i) {
    const bool refined = i < curve.refinement.size() && curve.refinement[i];
    if (curve.grid[i] > 0.0 && !refined) points.emplace_back(curve.grid[i], curve.values[i]);
  }
  for (std::size_t b = 0; b < curve.seam_points.size(); ++b)
    if (curve.seam_points[b] > 0.0) points.emplace_back(curve.seam_points[b], curve.seam_values[b]);
  std::sort(points.begin(), points.end());
  curve.local_minima.clear();
  for (std::size_t i = 1; i + 1 < points.size(); ++i)
    if (points[i].second < points[i - 1].second && points[i].second < points[i + 1].second)
      curve.local_minima.push_back(points[i].first);
}

VCurve sample_vcurve(const Sea& sea, const Couplings& couplings, const GridSpec& spec, const QuadSettings& quad) {
  VCurve curve;
  std::vector<double> coarse = build_grid(spec, sea);
  std::vector<double> fine = refinement_nodes(spec, sea);
  std::vector<std::pair<double, bool>> tagged;
  for (double m : coarse) tagged.emplace_back(m, false);
  for (double m : fine) tagged.emplace_back(m, true);
  std::sort(tagged.begin(), tagged.end());
  for (const auto& [m, refined] : tagged) {
    curve.grid.push_back(m);
    curve.refinement.push_back(refined);
  }
  curve.values.assign(curve.grid.size(), 0.0);
  detail::parallel_for(curve.grid.size(),
                       [&](std::size_t i) { curve.values[i] = variation_density(sea, couplings, curve.grid[i], quad); });
  curve.seam_points = sea.masses;
  curve.seam_values.assign(sea.size(), 0.0);
  for (std::size_t b = 0; b < sea.size(); ++b)
    curve.seam_values[b] = variation_density(sea, couplings, sea.masses[b], quad);
  detect_minima(curve);
  return curve;
}

StabilityReport classify_stability(const VCurve& curve, double tol) {
  if (curve.grid.size() != curve.values.size())
    throw Error(Errc::invalid_argument, "curve: grid and values differ in length");
  if (curve.seam_points.empty() || curve.seam_values.size() != curve.seam_points.size())
    throw Error(Errc::invalid_argument, "curve: seam values are required");
  double max_seam = 0.0;
  for (double s : curve.seam_points) max_seam = std::max(max_seam, std::abs(s));
  const double reach = 2.0 * max_seam * 0.95;
  if (curve.grid.empty() || curve.grid.front() > -reach || curve.grid.back() < reach)
    throw Error(Errc::invalid_argument, "curve: insufficient grid coverage, need [-2M, 2M] with M the largest mass");

  StabilityReport rep;
  rep.tol = tol;
  for (double v : curve.seam_values) rep.scale = std::max(rep.scale, std::abs(v));
  if (rep.scale == 0.0)
    for (double v : curve.values) rep.scale = std::max(rep.scale, std::abs(v));
  if (rep.scale == 0.0) rep.scale = 1.0;

  double worst_pair = std::numeric_limits<double>::infinity();
  std::size_t pairs = 0;
  double inf_positive = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < curve.grid.size(); ++i) {
    const double m = curve.grid[i];
    if (m <= 0.0) continue;
    inf_positive = std::min(inf_positive, curve.values[i]);
    const auto it = std::lower_bound(curve.grid.begin(), curve.grid.end(), -m * (1.0 + 1e-12));
    if (it == curve.grid.end() || std::abs(*it + m) > 1e-12 * m) continue;
    const double mirror_value = curve.values[static_cast<std::size_t>(it - curve.grid.begin())];
    worst_pair = std::min(worst_pair, curve.values[i] - mirror_value);
    ++pairs;
  }
  if (pairs == 0) throw Error(Errc::invalid_argument, "curve: no mirrored grid points, cannot test V(m) >= V(-m)");
  double max_seam_value = -std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < curve.seam_points.size(); ++b) {
    max_seam_value = std::max(max_seam_value, curve.seam_values[b]);
    if (curve.seam_points[b] > 0.0) inf_positive = std::min(inf_positive, curve.seam_values[b]);
  }
  rep.margin_ii = worst_pair;
  rep.margin_a = worst_pair / 2.0;
  rep.margin_iii = inf_positive - max_seam_value;
  const double slack = tol * rep.scale;
  if (rep.margin_ii < -slack) rep.violated.push_back("ii_prime");
  if (rep.margin_iii < -slack) rep.violated.push_back("iii_prime");
  if (rep.margin_a < -slack) rep.violated.push_back("a_nonneg");
  rep.is_state_stable = rep.violated.empty();
  return rep;
}

LocalModelFit fit_local_model(const Sea& sea, const Couplings& couplings, double seam, const QuadSettings& quad,
                              double d_min, double d_max, std::size_t count) {
  if (count < 2 || !(d_max > d_min) || !(d_min > 0.0))
    throw Error(Errc::invalid_argument, "local model: need 0 < d_min < d_max and count >= 2");
  const double centre_value = variation_density(sea, couplings, seam, quad);
  const double slope = variation_density_prime(sea, couplings, seam, quad);
  const double width = std::abs(seam);
  std::vector<double> offsets;
  for (std::size_t k = 0; k < count; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(count - 1);
    const double d = width * d_min * std::pow(d_max / d_min, t);
    offsets.push_back(d);
    offsets.push_back(-d);
  }
  std::vector<double> ys(offsets.size());
  detail::parallel_for(offsets.size(), [&](std::size_t i) {
    const double d = offsets[i];
    ys[i] = (variation_density(sea, couplings, seam + d, quad) - centre_value - slope * d) / (d * d);
  });
  Eigen::MatrixXd design(offsets.size(), 2);
  Eigen::VectorXd rhs(offsets.size());
  double data_scale = 0.0;
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    design(static_cast<Eigen::Index>(i), 0) = 1.0;
    design(static_cast<Eigen::Index>(i), 1) = std::log(std::abs(offsets[i]));
    rhs(static_cast<Eigen::Index>(i)) = ys[i];
    data_scale = std::max(data_scale, std::abs(ys[i]));
  }
  const Eigen::VectorXd coef = design.colPivHouseholderQr().solve(rhs);
  LocalModelFit fit;
  fit.curvature = coef(0);
  fit.log_coefficient = coef(1);
  const Eigen::VectorXd misfit = design * coef - rhs;
  fit.residual = std::sqrt(misfit.squaredNorm() / static_cast<double>(offsets.size())) /
                 std::max(data_scale, std::numeric_limits<double>::min());
  return fit;
}

}  // namespace dsea
