#include "dsea/kernels.hpp"

#include <cmath>

#include "dsea/constants.hpp"
#include "dsea/error.hpp"

namespace dsea {
namespace {

double step(double v) { return v > 0.0 ? 1.0 : 0.0; }
double sign(double v) { return v >= 0.0 ? 1.0 : -1.0; }

void check_region(ConeRegion region, double a) {
  const bool ok = region == ConeRegion::outside ? a < 0.0 : a > 0.0;
  if (!ok) throw Error(Errc::domain, "cone region does not match the sign of q^2");
}

// (sqrt(kallen) - |b - c|) / a without cancellation.
double root_excess_ratio(double a, double b, double c, double root) {
  return (a - 2.0 * (b + c)) / (root + std::abs(b - c));
}

double root_kallen(double a, double b, double c) { return std::sqrt(std::max(kallen(a, b, c), 0.0)); }

// Inside the cone the shell term is present when sqrt(far) > sqrt(a) + sqrt(near).
bool shell_open(double a, double far, double near) { return std::sqrt(far) - std::sqrt(a) - std::sqrt(near) > 0.0; }

}  // namespace

double kallen(double a, double b, double c) { return a * a + b * b + c * c - 2.0 * (a * b + a * c + b * c); }

double kallen_squares(double a, double x, double y) {
  const double s = std::abs(x) + std::abs(y);
  const double d = std::abs(x) - std::abs(y);
  return (a - s * s) * (a - d * d);
}

double pair_threshold(double x, double y) {
  const double d = std::abs(x) - std::abs(y);
  return d * d;
}

double threshold_part(double a, double x, double y) {
  if (!(pair_threshold(x, y) - a > 0.0)) return 0.0;
  const double root = std::sqrt(std::max(kallen_squares(a, x, y), 0.0));
  const double sum = x + y;
  return -root * (x - y) * sign(x * x - y * y) * (sum * sum - a);
}

double polynomial_part(double a, double x, double y) {
  const double d = x - y;
  const double s = x + y;
  return d * d * s * s * s - 2.0 * a * (x * x * x + y * y * y);
}

double pair_kernel(double a, double x, double y) {
  if (!(a > 0.0)) throw Error(Errc::domain, "pair kernel needs a > 0");
  const double sum = x + y;
  const double b = x * x;
  const double c = y * y;
  if (a < pair_threshold(x, y)) {
    const double root = std::sqrt(kallen_squares(a, x, y));
    const double signed_diff = (x - y) * sign(b - c);
    const double ratio = root_excess_ratio(a, b, c, root);
    return -sum * (b + c) - signed_diff * ratio * (sum * sum - a);
  }
  const double d = x - y;
  return d * d * sum * sum * sum / a - 2.0 * (x * b + y * c);
}

ConeRegion mirrored(ConeRegion region) {
  switch (region) {
    case ConeRegion::upper: return ConeRegion::lower;
    case ConeRegion::lower: return ConeRegion::upper;
    default: return ConeRegion::outside;
  }
}

double mixed_scalar_kernel(ConeRegion region, double a, double b, double c) {
  check_region(region, a);
  const double gap = std::abs(b - c);
  if (region == ConeRegion::outside) {
    const double root = root_kallen(a, b, c);
    return convolution_prefactor * root_excess_ratio(a, b, c, root) / 2.0;
  }
  // In the upper cone the roles of b and c are exchanged.
  const double far = region == ConeRegion::lower ? c : b;
  const double near = region == ConeRegion::lower ? b : c;
  double value = 0.0;
  if (shell_open(a, far, near)) {
    // far > near here, so both terms are present and combine stably.
    value = root_excess_ratio(a, b, c, root_kallen(a, b, c));
  } else if (far - near > 0.0) {
    value = -gap / a;
  }
  return convolution_prefactor * value;
}

double mixed_contracted_kernel(ConeRegion region, double a, double b, double c) {
  check_region(region, a);
  const double gap = std::abs(b - c);
  const double bc = b + c;
  if (region == ConeRegion::outside) {
    const double root = root_kallen(a, b, c);
    return convolution_prefactor * ((bc - a) * root_excess_ratio(a, b, c, root) - gap) / 4.0;
  }
  const double far = region == ConeRegion::lower ? c : b;
  const double near = region == ConeRegion::lower ? b : c;
  double value = 0.0;
  if (shell_open(a, far, near)) {
    value = ((bc - a) * root_excess_ratio(a, b, c, root_kallen(a, b, c)) - gap) / 2.0;
  } else if (far - near > 0.0) {
    value = -gap * bc / (2.0 * a);
  }
  return convolution_prefactor * value;
}

double mixed_slash_left_kernel(ConeRegion region, double a, double b, double c) {
  check_region(region, a);
  const double a2 = a * a;
  const double tail = (b - c) * (b - c) - 2.0 * a * b;
  switch (region) {
    case ConeRegion::upper: {
      double v = 0.0;
      if (shell_open(a, b, c)) v += root_kallen(a, b, c) * (a - b + c) / (2.0 * a2);
      v += tail / (2.0 * a2) * step(b - c);
      return convolution_prefactor * v;
    }
    case ConeRegion::lower: {
      double v = 0.0;
      if (shell_open(a, c, b)) v += root_kallen(a, b, c) * (a - b + c) / (2.0 * a2);
      v -= tail / (2.0 * a2) * step(c - b);
      return convolution_prefactor * v;
    }
    default:
      return convolution_prefactor *
             (root_kallen(a, b, c) * (a - b + c) / (4.0 * a2) + tail / (4.0 * a2) * sign(b - c));
  }
}

double mixed_slash_right_kernel(ConeRegion region, double a, double b, double c) {
  check_region(region, a);
  const double a2 = a * a;
  const double tail = (b - c) * (b - c) - 2.0 * a * c;
  switch (region) {
    case ConeRegion::upper: {
      double v = 0.0;
      if (shell_open(a, b, c)) v += root_kallen(a, b, c) * (a + b - c) / (2.0 * a2);
      v -= tail / (2.0 * a2) * step(b - c);
      return convolution_prefactor * v;
    }
    case ConeRegion::lower: {
      double v = 0.0;
      if (shell_open(a, c, b)) v += root_kallen(a, b, c) * (a + b - c) / (2.0 * a2);
      v += tail / (2.0 * a2) * step(c - b);
      return convolution_prefactor * v;
    }
    default:
      return convolution_prefactor *
             (root_kallen(a, b, c) * (a + b - c) / (4.0 * a2) - tail / (4.0 * a2) * sign(b - c));
  }
}

double contracted_offset(ConeRegion region, double b, double c) {
  const double gap = std::abs(b - c);
  switch (region) {
    case ConeRegion::upper: return convolution_prefactor * gap / 2.0 * step(b - c);
    case ConeRegion::lower: return convolution_prefactor * gap / 2.0 * step(c - b);
    default: return convolution_prefactor * gap / 4.0;
  }
}

double regularized_mixed_kernel(double q0, double qvec_norm, double b, double c, double eps) {
  if (!(eps > 0.0)) throw Error(Errc::domain, "regularization needs eps > 0");
  if (!(qvec_norm > 0.0) || !(q0 * q0 < qvec_norm * qvec_norm))
    throw Error(Errc::domain, "regularized kernel needs q outside the mass cone");
  if (b < 0.0 || c < 0.0) throw Error(Errc::domain, "shell parameters must be non-negative");
  const double a = q0 * q0 - qvec_norm * qvec_norm;
  const double exponent = eps * qvec_norm * root_kallen(a, b, c) / a + eps * q0 * (c - b) / a;
  return std::exp(exponent) / (2.0 * eps * qvec_norm);
}

}  // namespace dsea
