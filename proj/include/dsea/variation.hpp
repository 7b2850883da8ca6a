#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "dsea/model.hpp"
#include "dsea/quadrature.hpp"

namespace dsea {

// V(m) split into the part independent of the couplings and the four
// coupling shapes: V = base + c0*shape[0] + c1*shape[1] + c3*shape[2] + c4*shape[3].
struct VParts {
  double base = 0.0;
  std::array<double, 4> shape{};
  double magnitude = 0.0;  // sum of absolute contributions to base, for tolerances

  double value(const Couplings& couplings) const;
  VParts& operator+=(const VParts& other);
  VParts& operator-=(const VParts& other);
  VParts& operator*=(double factor);
};

enum CouplingSlot : std::size_t { slot_c0 = 0, slot_c1 = 1, slot_c3 = 2, slot_c4 = 3 };

// Cutoff actually used for a test mass m: in the natural gauge the integral
// runs at least up to every threshold involving m.
double effective_cutoff(const Sea& sea, const Couplings& couplings, double m);

// (1/2m^3) d S_ext / d rho_test at a test mass m != 0 (negative allowed).
// Evaluation exactly at an occupied mass is allowed: V is continuous there.
VParts variation_parts(const Sea& sea, const Couplings& couplings, double m, const QuadSettings& quad);
double variation_density(const Sea& sea, const Couplings& couplings, double m, const QuadSettings& quad);

struct DerivativeEstimate {
  VParts parts;
  double error = 0.0;  // difference between the last two extrapolants (seam) or stencil orders
  bool at_seam = false;
};

// dV/dm. Away from seams a five-point stencil whose step never crosses a
// seam; at a seam the symmetric quotient at steps {1e-3, 1e-4, 1e-5} * scale,
// Richardson-combined assuming even error terms.
DerivativeEstimate variation_prime_parts(const Sea& sea, const Couplings& couplings, double m,
                                         const QuadSettings& quad);
// Throws Error(no_convergence) when the seam extrapolation is inconsistent.
double variation_density_prime(const Sea& sea, const Couplings& couplings, double m, const QuadSettings& quad);

struct ELResiduals {
  std::vector<double> value_gaps;            // V(m_a) - V(m_1), a = 2..g
  std::vector<double> derivative_residuals;  // V'(m_a), a = 1..g
  double scale = 0.0;                        // magnitude of V at m_1

  std::vector<double> stacked() const;
  double norm() const;  // Euclidean norm of stacked()
};

// Residuals as linear functions of the couplings, one VParts per entry of
// ELResiduals::stacked().
struct ELSystem {
  std::vector<VParts> rows;
  double scale = 0.0;
  std::size_t generations = 0;
  ELResiduals evaluate(const Couplings& couplings) const;
};

ELSystem el_system(const Sea& sea, const Couplings& couplings, const QuadSettings& quad);
ELResiduals el_residuals(const Sea& sea, const Couplings& couplings, const QuadSettings& quad);

struct GridSpec {
  double lo = -2.0;
  double hi = 2.0;
  std::size_t n = 400;
  bool mirror = true;       // add -m for every positive node
  bool refine_seams = true; // log-spaced nodes approaching every seam from both sides
  std::size_t seam_levels = 6;
};

struct VCurve {
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<bool> refinement;      // node added by seam refinement
  std::vector<double> seam_points;   // occupied masses
  std::vector<double> seam_values;   // V at the occupied masses
  std::vector<double> local_minima;  // positions on m > 0, seams included
};

// Sorted, seam-free nodes for a grid specification and a sea.
std::vector<double> build_grid(const GridSpec& spec, const Sea& sea);
VCurve sample_vcurve(const Sea& sea, const Couplings& couplings, const GridSpec& spec, const QuadSettings& quad);
// Recomputes local_minima from grid, values and seam values.
void detect_minima(VCurve& curve);

struct StabilityReport {
  bool is_state_stable = false;
  std::vector<std::string> violated;  // subset of {"ii_prime", "iii_prime", "a_nonneg"}
  double margin_ii = 0.0;             // min over m > 0 of V(m) - V(-m)
  double margin_iii = 0.0;            // inf_{m>0} V - max_b V(m_b)
  double margin_a = 0.0;              // min over m > 0 of (V(m) - V(-m)) / 2
  double scale = 0.0;                 // tolerances are relative to this
  double tol = 0.0;
};

// Needs a mirrored grid reaching beyond 2 * max mass with seam values.
StabilityReport classify_stability(const VCurve& curve, double tol);

struct LocalModelFit {
  double curvature = 0.0;  // alpha_eff in V - V(m_b) ~ d^2 (alpha_eff + beta log|d|)
  double log_coefficient = 0.0;
  double residual = 0.0;  // rms misfit relative to the data scale
};

// Least-squares fit of the seam expansion on offsets d in [d_min, d_max]
// (log-spaced, both sides), after removing the linear term V'(m_b) d.
LocalModelFit fit_local_model(const Sea& sea, const Couplings& couplings, double seam, const QuadSettings& quad,
                              double d_min = 1e-4, double d_max = 1e-2, std::size_t count = 12);

}  // namespace dsea
