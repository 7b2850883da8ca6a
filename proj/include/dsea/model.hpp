#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace dsea {

// A superposition of Dirac seas: one mass shell and one weight per generation.
// Validated configurations keep masses positive and non-decreasing; the action
// routines also accept unvalidated seas (negative test masses, unsorted input).
struct Sea {
  std::vector<double> masses;
  std::vector<double> weights;

  std::size_t size() const { return masses.size(); }
  double max_mass() const;
};

// Throws Error(invalid_argument) naming the offending field.
void validate_sea(const Sea& sea);

// How the free function of (m3, m5) in the action is fixed.
//  natural: the finite part left after removing the regulator, which makes the
//           action and the variation density independent of the cutoff.
//  zero:    F = 0; results then depend on the cutoff through m3 and m5.
enum class FreeTerm { natural, zero };

// c0 and c1 shift the action by 2*c0*m3 + 2*c1*m5; c3 and c4 multiply the
// moments sum(rho m^4) and sum(rho m^5).
struct Couplings {
  double c0 = 0.0;
  double c1 = 0.0;
  double c3 = 0.0;
  double c4 = 0.0;
  double a_max = 0.0;  // <= 0 selects the default 1.5 * max m^2
  FreeTerm free_term = FreeTerm::natural;
};

double cutoff_for(const Sea& sea, const Couplings& couplings);
void validate_couplings(const Sea& sea, const Couplings& couplings);

struct DerivedScalars {
  double m3 = 0.0;
  double m5 = 0.0;
  double constraint = 0.0;
};

double compute_m3(const Sea& sea);
double compute_m5(const Sea& sea);
double compute_constraint_T(const Sea& sea);
DerivedScalars derive_scalars(const Sea& sea);

// Derivatives of m3, m5 and the constraint with respect to the weight of an
// extra sea of mass m appended with zero weight.
double m3_test_derivative(const Sea& sea, double m);
double m5_test_derivative(const Sea& sea, double m);

// Moments sum(rho m^p).
double weighted_moment(const Sea& sea, int power);

struct GaugeScale {
  double mass = 1.0;    // lambda: masses are divided by this
  double weight = 1.0;  // mu: weights are divided by this
};

// Rescales so that the first mass and the first weight are both 1.
std::pair<Sea, GaugeScale> normalize_gauge(const Sea& sea);
Sea invert_gauge(const Sea& normalized, const GaugeScale& scale);

// Conversion from couplings quoted with the action measured in units of the
// quartic prefactor (see action.hpp). The c0/c1 factors were fitted to a
// reference three-generation solution and agree with it to about 0.13%.
Couplings couplings_from_reduced(double c0, double c1, double c3, double c4);
Couplings couplings_to_reduced(const Couplings& native);

}  // namespace dsea
