#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dsea/model.hpp"
#include "dsea/quadrature.hpp"
#include "dsea/variation.hpp"

namespace dsea {

enum class VarKind { mass, weight, coupling };

// One free parameter. `index` is a generation (mass, weight; >= 1 since the
// first generation carries the gauge) or a CouplingSlot.
struct Variable {
  VarKind kind = VarKind::weight;
  std::size_t index = 0;
  double lower = 0.0;
  double upper = 0.0;
};

std::string variable_name(const Variable& v);  // "m2", "rho3", "c0", ...
// Default box: masses [1e-2, 1e2], weights [0, 1e2], couplings +-1e10 in
// reduced units converted to native ones.
Variable make_variable(VarKind kind, std::size_t index);

enum class SolveMode { critical_point, minimize };
// How T = sum(rho m^3) = 1 is imposed in minimize mode.
enum class ConstraintHandling { eliminate, penalty };

struct SolveProblem {
  Sea sea;              // starting point and values of every fixed parameter
  Couplings couplings;  // likewise
  std::vector<Variable> free_vars;
  SolveMode mode = SolveMode::critical_point;
  ConstraintHandling constraint = ConstraintHandling::eliminate;
  double penalty_weight = 1e3;  // relative to the action scale at the start
  std::size_t starts = 8;       // the given point plus starts - 1 seeded draws
  std::uint64_t seed = 1;
  double tol = 1e-8;            // residual norm relative to the scale of V at m1
  std::size_t max_iterations = 200;
  QuadSettings quad{};
  bool classify = true;         // attach a stability report to each record
  std::optional<GridSpec> grid; // default: mirrored, reaching 2.5 * max mass
};

// Throws Error(invalid_argument) for malformed problems: unknown or duplicate
// variables, gauge variables, empty boxes, under-determined systems.
void validate_problem(const SolveProblem& problem);

struct SolutionRecord {
  Sea sea;
  Couplings couplings;
  std::vector<double> params;  // values of problem.free_vars, same order
  ELResiduals residuals;
  double residual_norm = 0.0;  // relative to residuals.scale
  double action = 0.0;         // extended action at the solution
  bool converged = false;
  std::size_t iterations = 0;
  std::size_t start_index = 0;
  std::string message;
  std::optional<StabilityReport> stability;
};

// Roots of the criticality residuals from every start, deduplicated, sorted
// by extended action. Non-converged starts are dropped; if none converged the
// result holds the best attempt flagged non-converged.
std::vector<SolutionRecord> solve_critical(const SolveProblem& problem);

// Constrained minimizer of the extended action over the free variables, best
// of all starts, with criticality residuals attached.
SolutionRecord minimize_action(const SolveProblem& problem);

struct VerificationReport {
  ELResiduals residuals;          // at the record's quadrature settings
  ELResiduals refined_residuals;  // at tightened settings
  double residual_norm = 0.0;
  double refined_norm = 0.0;
  bool degraded = false;          // refined norm > 10x the original (and above tol)
  StabilityReport stability;
  bool passed = false;            // residuals within tol, not degraded
  std::string message;            // why verification failed, if it did
};

// Recomputes residuals at tighter quadrature and reclassifies the V-curve.
// Never mutates the record.
VerificationReport verify_solution(const SolutionRecord& record, double tol, const QuadSettings& quad = {},
                                   const std::optional<GridSpec>& grid = std::nullopt);

// Mirrored grid reaching 2.5 * max mass on both sides.
GridSpec default_stability_grid(const Sea& sea, std::size_t n = 400);

// Standard problems in the normalized gauge (m1 = rho1 = 1):
//  one generation, c1 pinned, c0 free;
//  two generations at pinned m2, free rho2, c0, c1;
//  three generations at pinned m2, m3, rho2, free rho3, c0, c1, c3, c4.
SolveProblem one_generation_problem(double c1_native);
SolveProblem two_generation_problem(double m2, double rho2_start);
SolveProblem three_generation_problem(const Sea& seed_sea, const Couplings& seed_couplings);

}  // namespace dsea
