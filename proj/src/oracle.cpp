#include "dsea/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include <boost/math/special_functions/bessel.hpp>

#include "dsea/constants.hpp"
#include "dsea/error.hpp"

namespace dsea {
namespace {

// Uniform cubic B-spline on [0, 4].
double cubic_bspline(double u) {
  if (u <= 0.0 || u >= 4.0) return 0.0;
  if (u < 1.0) return u * u * u / 6.0;
  if (u < 2.0) return (((-3.0 * u + 12.0) * u - 12.0) * u + 4.0) / 6.0;
  if (u < 3.0) return (((3.0 * u - 24.0) * u + 60.0) * u - 44.0) / 6.0;
  const double v = 4.0 - u;
  return v * v * v / 6.0;
}

// Integrands are O(1) before prefactors; the absolute floors only matter for
// slivers near the edge of a support.
QuadSettings inner_settings() { return {1e-15, 1e-11, 4000}; }
QuadSettings outer_settings() { return {1e-14, 1e-10, 4000}; }

void require(const QuadResult& r, const char* what) {
  if (!r.converged)
    throw Error(Errc::quadrature, std::string(what) + ": quadrature did not converge (error estimate " +
                                      std::to_string(r.error) + ")");
}

// Integral of w(z) f(z) over [lo, hi]; delta shells collapse.
double integrate_against(const RadialProfile& f, double lo, double hi, const Integrand& w,
                         std::vector<double> nodes, const QuadSettings& settings, const char* what) {
  if (f.is_delta()) {
    const double z0 = f.shell();
    return (z0 >= lo && z0 <= hi) ? f.weight() * w(z0) : 0.0;
  }
  lo = std::max(lo, f.support_lo());
  hi = std::min(hi, f.support_hi());
  if (!(hi > lo)) return 0.0;
  for (double k : f.knots()) nodes.push_back(k);
  const QuadResult r = integrate_with_root_nodes([&](double z) { return f(z) * w(z); }, lo, hi, nodes, settings);
  require(r, what);
  return r.value;
}

double shell_root(double a, double b, double c) {
  return std::sqrt(std::max(kallen_squares(a, std::sqrt(b), std::sqrt(c)), 0.0));
}

// (c, b) kernels of the shell-domain convolutions, without the common prefactor.
double shell_kernel(ConvolutionKind kind, double a, double b, double c) {
  const double root = shell_root(a, b, c);
  switch (kind) {
    case ConvolutionKind::scalar: return root / a;
    case ConvolutionKind::slash_left: return root * (a - b + c) / (2.0 * a * a);
    case ConvolutionKind::slash_right: return root * (a + b - c) / (2.0 * a * a);
    default: return root * (c + b - a) / (2.0 * a);
  }
}

ConvolutionKind swap_slash(ConvolutionKind kind) {
  if (kind == ConvolutionKind::slash_left) return ConvolutionKind::slash_right;
  if (kind == ConvolutionKind::slash_right) return ConvolutionKind::slash_left;
  return kind;
}

double regular_kernel(ConvolutionKind kind, ConeRegion region, double a, double b, double c) {
  switch (kind) {
    case ConvolutionKind::scalar: return mixed_scalar_kernel(region, a, b, c);
    case ConvolutionKind::slash_left: return mixed_slash_left_kernel(region, a, b, c);
    case ConvolutionKind::slash_right: return mixed_slash_right_kernel(region, a, b, c);
    default: return mixed_contracted_kernel(region, a, b, c);
  }
}

double profile_hi(const RadialProfile& f) { return f.is_delta() ? f.shell() : f.support_hi(); }
double profile_lo(const RadialProfile& f) { return f.is_delta() ? f.shell() : f.support_lo(); }

std::vector<double> profile_knots(const RadialProfile& f) {
  return f.is_delta() ? std::vector<double>{f.shell()} : f.knots();
}

// Mixed convolution on the lower-cone shell domain c >= (sqrt(a) + sqrt(b))^2.
double mixed_lower_shell(ConvolutionKind kind, const RadialProfile& f, const RadialProfile& g, double a) {
  const double ra = std::sqrt(a);
  auto inner = [&](double c) {
    const double rc = std::sqrt(c);
    if (rc <= ra) return 0.0;
    const double bmax = (rc - ra) * (rc - ra);
    return integrate_against(g, 0.0, bmax, [&](double b) { return shell_kernel(kind, a, b, c); }, {bmax},
                             inner_settings(), "mixed convolution (inner)");
  };
  std::vector<double> nodes;
  for (double k : profile_knots(g)) nodes.push_back((ra + std::sqrt(k)) * (ra + std::sqrt(k)));
  const double value = integrate_against(f, a, profile_hi(f), inner, nodes, outer_settings(), "mixed convolution");
  return convolution_prefactor * value;
}

// Direct quadrature over k = (w, |k|) with q = (q0, 0): f at k^2, g at
// (q - k)^2, k in the lower cone, q - k in the lower cone when
// `second_negative`, else in the upper cone.
double direct_convolution(ConvolutionKind kind, const RadialProfile& f, const RadialProfile& g, double q0,
                          bool second_negative) {
  if (f.is_delta() || g.is_delta())
    throw Error(Errc::invalid_argument, "direct convolution needs smooth profiles");
  const double a = q0 * q0;
  const double flo = f.support_lo(), fhi = f.support_hi();
  const double glo = g.support_lo(), ghi = g.support_hi();
  // c - b = 2 q0 w - a fixes the w-range covered by the supports.
  double w1 = (flo - ghi + a) / (2.0 * q0);
  double w2 = (fhi - glo + a) / (2.0 * q0);
  double wlo = std::min(w1, w2);
  double whi = std::min(std::max(w1, w2), 0.0);
  if (second_negative)
    wlo = std::max(wlo, q0);
  else
    whi = std::min(whi, q0);
  if (!(whi > wlo)) return 0.0;

  const auto fk = f.knots();
  const auto gk = g.knots();
  auto weight = [&](double w, double c) {
    switch (kind) {
      case ConvolutionKind::scalar: return 1.0;
      case ConvolutionKind::slash_left: return q0 * w / a;
      case ConvolutionKind::slash_right: return (a - q0 * w) / a;
      default: return c - q0 * w;
    }
  };
  auto inner = [&](double w) {
    const double u = q0 - w;
    const double lo2 = std::max({w * w - fhi, u * u - ghi, 0.0});
    const double hi2 = std::min(w * w - flo, u * u - glo);
    if (!(hi2 > lo2)) return 0.0;
    const double plo = std::sqrt(lo2), phi = std::sqrt(hi2);
    std::vector<double> nodes;
    for (double k : fk)
      if (w * w - k > 0.0) nodes.push_back(std::sqrt(w * w - k));
    for (double k : gk)
      if (u * u - k > 0.0) nodes.push_back(std::sqrt(u * u - k));
    const QuadResult r = integrate(
        [&](double p) {
          const double c = w * w - p * p;
          const double b = u * u - p * p;
          return 4.0 * pi * p * p * f(c) * g(b) * weight(w, c);
        },
        plo, phi, inner_settings(), nodes);
    require(r, "direct convolution (inner)");
    return r.value;
  };
  std::vector<double> nodes;
  for (double k : fk) nodes.push_back(-std::sqrt(k));
  for (double k : gk) {
    nodes.push_back(q0 - std::sqrt(k));
    nodes.push_back(q0 + std::sqrt(k));
  }
  for (double kf : fk)
    for (double kg : gk) nodes.push_back((kf - kg + a) / (2.0 * q0));
  const QuadResult r = integrate(inner, wlo, whi, outer_settings(), nodes);
  require(r, "direct convolution");
  return r.value / (16.0 * pi4);
}

double relative_gap(double x, double y) {
  const double scale = std::max(std::abs(x), std::abs(y));
  return scale == 0.0 ? 0.0 : std::abs(x - y) / scale;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

RadialProfile RadialProfile::delta_shell(double z0, double weight) {
  if (!(z0 >= 0.0)) throw Error(Errc::invalid_argument, "delta shell needs z0 >= 0");
  RadialProfile p;
  p.delta_ = true;
  p.z0_ = z0;
  p.weight_ = weight;
  return p;
}

RadialProfile RadialProfile::bump(double lo, double hi, double amplitude) {
  RadialProfile p;
  p.add_bump(lo, hi, amplitude);
  return p;
}

RadialProfile& RadialProfile::add_bump(double lo, double hi, double amplitude) {
  if (delta_) throw Error(Errc::invalid_argument, "cannot add a bump to a delta shell");
  if (!(lo >= 0.0) || !(hi > lo)) throw Error(Errc::invalid_argument, "bump needs 0 <= lo < hi");
  splines_.push_back({lo, hi, amplitude});
  return *this;
}

double RadialProfile::operator()(double z) const {
  if (delta_) return 0.0;
  double sum = 0.0;
  for (const auto& s : splines_) sum += s.amplitude * cubic_bspline(4.0 * (z - s.lo) / (s.hi - s.lo));
  return sum;
}

double RadialProfile::support_lo() const {
  if (delta_) return z0_;
  double lo = splines_.empty() ? 0.0 : splines_.front().lo;
  for (const auto& s : splines_) lo = std::min(lo, s.lo);
  return lo;
}

double RadialProfile::support_hi() const {
  if (delta_) return z0_;
  double hi = 0.0;
  for (const auto& s : splines_) hi = std::max(hi, s.hi);
  return hi;
}

std::vector<double> RadialProfile::knots() const {
  std::vector<double> out;
  if (delta_) return {z0_};
  for (const auto& s : splines_)
    for (int k = 0; k <= 4; ++k) out.push_back(s.lo + 0.25 * k * (s.hi - s.lo));
  std::sort(out.begin(), out.end());
  return out;
}

RadialProfile RadialProfile::stretched(double s) const {
  if (!(s > 0.0)) throw Error(Errc::invalid_argument, "stretch factor must be positive");
  if (delta_) return delta_shell(z0_ * s, weight_ * s);
  RadialProfile out;
  for (const auto& sp : splines_) out.add_bump(sp.lo * s, sp.hi * s, sp.amplitude);
  return out;
}

const char* to_string(ConvolutionKind kind) {
  switch (kind) {
    case ConvolutionKind::scalar: return "scalar";
    case ConvolutionKind::slash_left: return "slash_left";
    case ConvolutionKind::slash_right: return "slash_right";
    default: return "contracted";
  }
}

double convolve_negative_closed(ConvolutionKind kind, const RadialProfile& f, const RadialProfile& g, double a) {
  if (!(a > 0.0)) throw Error(Errc::domain, "same-cone convolution needs a > 0");
  const double ra = std::sqrt(a);
  auto inner = [&](double c) {
    const double rc = std::sqrt(c);
    if (rc >= ra) return 0.0;
    const double bmax = (ra - rc) * (ra - rc);
    return integrate_against(g, 0.0, bmax, [&](double b) { return shell_kernel(kind, a, b, c); }, {bmax},
                             inner_settings(), "negative convolution (inner)");
  };
  std::vector<double> nodes{a};
  for (double k : profile_knots(g))
    if (std::sqrt(k) < ra) nodes.push_back((ra - std::sqrt(k)) * (ra - std::sqrt(k)));
  return convolution_prefactor *
         integrate_against(f, 0.0, a, inner, nodes, outer_settings(), "negative convolution");
}

double convolve_negative_direct(ConvolutionKind kind, const RadialProfile& f, const RadialProfile& g, double a) {
  if (!(a > 0.0)) throw Error(Errc::domain, "same-cone convolution needs a > 0");
  return direct_convolution(kind, f, g, -std::sqrt(a), true);
}

double convolve_mixed_closed(ConvolutionKind kind, const RadialProfile& f, const RadialProfile& g, ConeRegion region,
                             double a) {
  switch (region) {
    case ConeRegion::lower:
      if (!(a > 0.0)) throw Error(Errc::domain, "inside the cone a must be positive");
      return mixed_lower_shell(kind, f, g, a);
    case ConeRegion::upper:
      if (!(a > 0.0)) throw Error(Errc::domain, "inside the cone a must be positive");
      // Reflection k -> -k exchanges the roles of the two factors.
      return mixed_lower_shell(swap_slash(kind), g, f, a);
    default: return convolve_mixed_regular(kind, f, g, region, a);
  }
}

double convolve_mixed_direct(ConvolutionKind kind, const RadialProfile& f, const RadialProfile& g, ConeRegion region,
                             double a) {
  if (!(a > 0.0) || region == ConeRegion::outside)
    throw Error(Errc::domain, "direct mixed convolution is evaluated inside the cone only");
  const double q0 = region == ConeRegion::lower ? -std::sqrt(a) : std::sqrt(a);
  return direct_convolution(kind, f, g, q0, false);
}

double convolve_mixed_regular(ConvolutionKind kind, const RadialProfile& f, const RadialProfile& g, ConeRegion region,
                              double a) {
  const bool inside = region != ConeRegion::outside;
  if (inside != (a > 0.0) || a == 0.0) throw Error(Errc::domain, "cone region does not match the sign of a");
  const double ra = inside ? std::sqrt(a) : 0.0;
  auto inner = [&](double c) {
    std::vector<double> nodes{c};
    const double rc = std::sqrt(c);
    if (inside) {
      nodes.push_back((ra + rc) * (ra + rc));
      if (rc > ra) nodes.push_back((rc - ra) * (rc - ra));
    }
    return integrate_against(g, 0.0, profile_hi(g), [&](double b) { return regular_kernel(kind, region, a, b, c); },
                             nodes, inner_settings(), "regular mixed convolution (inner)");
  };
  std::vector<double> nodes;
  for (double k : profile_knots(g)) {
    nodes.push_back(k);
    if (inside) {
      const double rk = std::sqrt(k);
      nodes.push_back((ra + rk) * (ra + rk));
      if (rk > ra) nodes.push_back((rk - ra) * (rk - ra));
    }
  }
  return integrate_against(f, profile_lo(f), profile_hi(f), inner, nodes, outer_settings(),
                           "regular mixed convolution");
}

ShellCheck shell_convolution_J_check(double x, double y, double a) {
  if (!(a > 0.0)) throw Error(Errc::domain, "shell convolution check needs a > 0");
  ShellCheck out;
  out.closed = 2.0 * threshold_part(a, x, y) / (64.0 * pi3 * a * a);
  // k = (k0, kappa, 0, 0); the first shell is parametrized by |q|, the second
  // fixes the angle.
  const double kappa = 0.75 * std::sqrt(a);
  const double k0 = std::sqrt(a + kappa * kappa);
  auto ordered = [&](double first, double second) {
    const double s = a + second * second - first * first;
    const double disc = s * s - 4.0 * a * second * second;
    if (disc < 0.0) return 0.0;
    const double e_lo = std::max({(s * k0 - kappa * std::sqrt(disc)) / (2.0 * a), k0, std::abs(second)});
    const double e_hi = (s * k0 + kappa * std::sqrt(disc)) / (2.0 * a);
    if (!(e_hi > e_lo)) return 0.0;
    const double m2 = second * second;
    const double p_lo = std::sqrt(std::max(e_lo * e_lo - m2, 0.0));
    const double p_hi = std::sqrt(std::max(e_hi * e_hi - m2, 0.0));
    const QuadResult r = integrate(
        [&](double p) {
          const double energy = std::sqrt(p * p + m2);
          return p * p / (2.0 * energy) * 2.0 * pi / (2.0 * kappa * p);
        },
        p_lo, p_hi, inner_settings());
    require(r, "shell convolution");
    const double kq = (first * first - a - m2) / 2.0;
    const double kv = second * (a + kq) + first * kq;
    return 2.0 / (16.0 * pi4) * kv / a * r.value;
  };
  out.direct = ordered(x, y) + ordered(y, x);
  return out;
}

namespace {

// J1(s)/s and J2(s)/s^2, finite at s = 0.
double j1_ratio(double s) { return s < 1e-6 ? 0.5 - s * s / 16.0 : boost::math::cyl_bessel_j(1, s) / s; }
double j2_ratio(double s) { return s < 1e-4 ? 0.125 - s * s / 96.0 : boost::math::cyl_bessel_j(2, s) / (s * s); }

}  // namespace

std::complex<double> hankel_transform(const RadialProfile& f, double a) {
  if (!(a >= 0.0)) throw Error(Errc::domain, "Hankel transform needs a >= 0");
  const double v = integrate_against(
      f, 0.0, f.is_delta() ? f.shell() : f.support_hi(), [&](double z) { return z * j1_ratio(std::sqrt(a * z)); }, {},
      inner_settings(), "Hankel transform");
  return {0.0, 2.0 * pi2 * v};
}

std::complex<double> hankel_transform_vector(const RadialProfile& f, double a) {
  if (!(a >= 0.0)) throw Error(Errc::domain, "Hankel transform needs a >= 0");
  const double v = integrate_against(
      f, 0.0, f.is_delta() ? f.shell() : f.support_hi(), [&](double z) { return z * z * j2_ratio(std::sqrt(a * z)); },
      {}, inner_settings(), "vector Hankel transform");
  return {0.0, -2.0 * pi2 * v};
}

double PlancherelResult::relative_error() const { return lhs == 0.0 ? std::abs(rhs) : std::abs(lhs - rhs) / std::abs(lhs); }

PlancherelResult plancherel_check(const RadialProfile& f, const RadialProfile& g, bool vector, double a_ceiling) {
  if (f.is_delta() || g.is_delta()) throw Error(Errc::invalid_argument, "Plancherel check needs smooth profiles");
  PlancherelResult out;
  const double power = vector ? 2.0 : 1.0;
  {
    std::vector<double> nodes = f.knots();
    for (double k : g.knots()) nodes.push_back(k);
    const double lo = std::max(f.support_lo(), g.support_lo());
    const double hi = std::min(f.support_hi(), g.support_hi());
    if (hi > lo) {
      const QuadResult r =
          integrate([&](double z) { return f(z) * g(z) * std::pow(z, power); }, lo, hi, inner_settings(), nodes);
      require(r, "Plancherel position side");
      out.lhs = r.value;
    }
  }
  auto transform = [&](const RadialProfile& p, double a) {
    return vector ? hankel_transform_vector(p, a).imag() : hankel_transform(p, a).imag();
  };
  auto integrand = [&](double a) { return transform(f, a) * transform(g, a) * std::pow(a, power); };
  const QuadSettings chunk_settings{0.0, 1e-9, 4000};
  const double reach = std::max(f.support_hi(), g.support_hi());
  double left = 0.0;
  double right = 64.0 / reach;
  double total = 0.0;
  int quiet = 0;
  while (true) {
    const QuadResult r = integrate(integrand, left, right, chunk_settings);
    require(r, "Plancherel momentum side");
    total += r.value;
    out.tail_estimate = std::abs(r.value);
    out.a_reached = right;
    quiet = std::abs(r.value) < 1e-6 * std::abs(total) ? quiet + 1 : 0;
    if (quiet >= 2) break;
    if (right >= a_ceiling)
      throw Error(Errc::quadrature, "Plancherel momentum side not settled at a = " + std::to_string(right) +
                                        " (last chunk " + std::to_string(out.tail_estimate) + ")");
    left = right;
    right *= 2.0;
  }
  out.rhs = total / (16.0 * pi4);
  return out;
}

CheckResult check_kernel_identities(std::uint64_t seed, std::size_t cases) {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto mass = [&] {
    const double m = 0.1 + 2.9 * unit(rng);
    return unit(rng) < 0.2 ? -m : m;
  };
  CheckResult out{"kernel_identities", true, 0, 0.0, 1e-12, 0.0, ""};
  auto record = [&](double deviation, const char* what) {
    ++out.cases;
    if (deviation > out.worst) {
      out.worst = deviation;
      out.detail = what;
    }
  };
  for (std::size_t i = 0; i < cases; ++i) {
    double x = mass(), y = mass();
    while (std::abs(std::abs(x) - std::abs(y)) < 0.05) y = mass();
    const double t = pair_threshold(x, y);
    const double below = t * (0.01 + 0.98 * unit(rng));
    const double above = t + 0.01 + 5.0 * unit(rng);

    const double jxy = threshold_part(below, x, y);
    const double jyx = threshold_part(below, y, x);
    record(relative_gap(jxy, jyx), "threshold kernel symmetry");
    record(std::abs(threshold_part(above, x, y)) + std::abs(threshold_part(below, x, x)), "threshold kernel support");
    const double k_equal = polynomial_part(above, x, x);
    record(std::abs(k_equal + 4.0 * above * x * x * x) / std::abs(4.0 * above * x * x * x), "polynomial kernel at x=y");
    record(std::abs(pair_kernel(above, x, x) + 4.0 * x * x * x) / std::abs(4.0 * x * x * x), "pair kernel at x=y");
    const double k0 = polynomial_part(0.0, x, y);
    record(std::abs(threshold_part(0.0, x, y) + k0) / std::abs(k0), "threshold + polynomial at a=0");

    const double b = 0.05 + 4.0 * unit(rng);
    double c = 0.05 + 4.0 * unit(rng);
    while (std::abs(b - c) < 1e-3) c = 0.05 + 4.0 * unit(rng);
    for (ConeRegion region : {ConeRegion::upper, ConeRegion::lower, ConeRegion::outside}) {
      const double a = region == ConeRegion::outside ? -(0.01 + 5.0 * unit(rng)) : 0.01 + 5.0 * unit(rng);
      const double k1 = mixed_scalar_kernel(region, a, b, c);
      const double l1 = mixed_slash_left_kernel(region, a, b, c);
      const double l2 = mixed_slash_right_kernel(region, a, b, c);
      const double scale = std::abs(k1) + std::abs(l1) + std::abs(l2);
      record(scale == 0.0 ? 0.0 : std::abs(k1 - l1 - l2) / scale, "derivative combination");
      record(relative_gap(l2, mixed_slash_left_kernel(mirrored(region), a, c, b)), "slash kernel mirror");
    }
  }
  out.passed = out.worst <= out.tolerance;
  out.seconds = seconds_since(t0);
  return out;
}

namespace {

RadialProfile random_bump(std::mt19937_64& rng, double lo_min, double lo_max, double width_min, double width_max) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double lo = lo_min + (lo_max - lo_min) * unit(rng);
  const double width = width_min + (width_max - width_min) * unit(rng);
  RadialProfile p = RadialProfile::bump(lo, lo + width, 0.5 + unit(rng));
  if (unit(rng) < 0.5) {
    const double lo2 = lo + 0.3 * width * unit(rng);
    p.add_bump(lo2, lo2 + 0.6 * width, 0.5 * unit(rng));
  }
  return p;
}

}  // namespace

CheckResult check_convolutions(std::uint64_t seed, std::size_t pairs) {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  CheckResult out{"convolution_closed_vs_direct", true, 0, 0.0, 1e-6, 0.0, ""};
  const ConvolutionKind kinds[] = {ConvolutionKind::scalar, ConvolutionKind::slash_left, ConvolutionKind::slash_right,
                                   ConvolutionKind::contracted};
  for (std::size_t i = 0; i < pairs; ++i) {
    // Same cone: both factors light, a between the lowest and highest thresholds.
    {
      const RadialProfile f = random_bump(rng, 0.05, 1.0, 0.3, 1.5);
      const RadialProfile g = random_bump(rng, 0.05, 1.0, 0.3, 1.5);
      const double amin = std::pow(std::sqrt(f.support_lo()) + std::sqrt(g.support_lo()), 2);
      const double amax = std::pow(std::sqrt(f.support_hi()) + std::sqrt(g.support_hi()), 2);
      const double a = amin + (amax - amin) * (0.2 + 0.7 * unit(rng));
      for (ConvolutionKind kind : kinds) {
        const double closed = convolve_negative_closed(kind, f, g, a);
        const double direct = convolve_negative_direct(kind, f, g, a);
        const double gap = relative_gap(closed, direct);
        ++out.cases;
        if (gap > out.worst) {
          out.worst = gap;
          out.detail = std::string("negative ") + to_string(kind);
        }
      }
    }
    // Mixed: the negative factor is heavy, the positive one light (lower
    // cone), and the other way round for the upper cone.
    for (ConeRegion region : {ConeRegion::lower, ConeRegion::upper}) {
      const RadialProfile heavy = random_bump(rng, 2.0, 3.0, 0.5, 2.0);
      const RadialProfile light = random_bump(rng, 0.05, 0.5, 0.2, 0.8);
      const RadialProfile& f = region == ConeRegion::lower ? heavy : light;
      const RadialProfile& g = region == ConeRegion::lower ? light : heavy;
      const double amax = std::pow(std::sqrt(heavy.support_hi()) - std::sqrt(light.support_lo()), 2);
      const double a = amax * (0.05 + 0.6 * unit(rng));
      for (ConvolutionKind kind : kinds) {
        const double closed = convolve_mixed_closed(kind, f, g, region, a);
        const double direct = convolve_mixed_direct(kind, f, g, region, a);
        const double gap = relative_gap(closed, direct);
        ++out.cases;
        if (gap > out.worst) {
          out.worst = gap;
          out.detail = std::string(region == ConeRegion::lower ? "mixed lower " : "mixed upper ") + to_string(kind);
        }
      }
    }
  }
  out.passed = out.worst <= out.tolerance;
  out.seconds = seconds_since(t0);
  return out;
}

CheckResult check_shell_convolution(std::uint64_t seed, std::size_t triples) {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  CheckResult out{"shell_convolution", true, 0, 0.0, 1e-8, 0.0, ""};
  for (std::size_t i = 0; i < triples; ++i) {
    const double x = 0.2 + 2.8 * unit(rng);
    double y = 0.2 + 2.8 * unit(rng);
    while (std::abs(x - y) < 0.3) y = 0.2 + 2.8 * unit(rng);
    const double a = pair_threshold(x, y) * (0.02 + 0.96 * unit(rng));
    const ShellCheck s = shell_convolution_J_check(x, y, a);
    const double gap = relative_gap(s.closed, s.direct);
    ++out.cases;
    if (gap > out.worst) {
      out.worst = gap;
      out.detail = "x=" + std::to_string(x) + " y=" + std::to_string(y) + " a=" + std::to_string(a);
    }
    // Outside the support both sides vanish.
    const ShellCheck z = shell_convolution_J_check(x, y, pair_threshold(x, y) + 0.1 + unit(rng));
    const double leak = std::abs(z.closed) + std::abs(z.direct);
    ++out.cases;
    if (leak > 1e-10 && leak > out.worst) {
      out.worst = leak;
      out.detail = "nonzero beyond threshold";
    }
  }
  out.passed = out.worst <= out.tolerance;
  out.seconds = seconds_since(t0);
  return out;
}

CheckResult check_plancherel(std::uint64_t seed, std::size_t pairs) {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(seed);
  CheckResult out{"plancherel", true, 0, 0.0, 1e-3, 0.0, ""};
  for (std::size_t i = 0; i < pairs; ++i) {
    const RadialProfile f = random_bump(rng, 0.3, 1.0, 1.0, 2.0);
    const RadialProfile g = random_bump(rng, 0.3, 1.0, 1.0, 2.0);
    for (bool vector : {false, true}) {
      const PlancherelResult r = plancherel_check(f, g, vector);
      ++out.cases;
      if (r.relative_error() > out.worst) {
        out.worst = r.relative_error();
        out.detail = std::string(vector ? "vector" : "scalar") + " pair " + std::to_string(i) +
                     ", a reached " + std::to_string(r.a_reached);
      }
    }
  }
  out.passed = out.worst <= out.tolerance;
  out.seconds = seconds_since(t0);
  return out;
}

std::vector<CheckResult> run_oracle_suite(std::uint64_t seed) {
  return {check_kernel_identities(seed), check_convolutions(seed + 1), check_shell_convolution(seed + 2),
          check_plancherel(seed + 3)};
}

}  // namespace dsea
