#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dsea/action.hpp"
#include "dsea/model.hpp"
#include "dsea/oracle.hpp"
#include "dsea/quadrature.hpp"
#include "dsea/solve.hpp"
#include "dsea/variation.hpp"

namespace dsea {

using Json = nlohmann::ordered_json;

const char* tool_version();

enum class Units { native, reduced };

// A run configuration after validation and defaulting.
struct RunConfig {
  Sea sea;
  Couplings couplings;  // native units
  QuadSettings quad;
  Units units = Units::native;  // units the couplings were given in
  bool a_max_defaulted = true;
};

// Config document keys: masses, weights, c0, c1, c3, c4, a_max, free_term
// ("natural" | "zero"), units ("native" | "reduced"), quad_tol (relative),
// quad_abs_tol, max_subdiv, plus an optional "problem" object (see parse_problem) and an
// optional "grid" string. Errors are Error(invalid_argument) whose message
// starts with the offending key path.
RunConfig parse_config(const Json& doc);
RunConfig parse_config_text(std::string_view text);
RunConfig load_config(const std::string& path);
// Effective settings: couplings in native and reduced units, the cutoff
// actually used, and the quadrature settings.
Json config_to_json(const RunConfig& config);

// "problem" keys: mode ("critical" | "minimize"), free_vars (names such as
// "m2", "rho3", "c0"), bounds {name: [lo, hi]} in the config units, starts,
// seed, tol, max_iterations, constraint ("eliminate" | "penalty"),
// penalty_weight, classify.
SolveProblem parse_problem(const Json& problem, const RunConfig& config);
Variable parse_variable_name(const std::string& name);
// Critical-point problem used when a config has none: the weights of
// generations 2..g except the second of three or more, and every coupling
// that V can resolve (c0 for one generation, c0 and c1 for two, all four
// from three on).
Json default_problem_json(std::size_t generations);

// "min:max:n"
GridSpec parse_grid(std::string_view text);

Json to_json(const DerivedScalars& scalars);
Json to_json(const ActionReport& report);
Json to_json(const ELResiduals& residuals);
Json to_json(const StabilityReport& report);
Json to_json(const Couplings& couplings);
Json to_json(const SolutionRecord& record, const std::vector<Variable>& free_vars);
Json to_json(const VerificationReport& report);
Json to_json(const CheckResult& check);
Json to_json(const LocalModelFit& fit);

// Inverse of to_json(SolutionRecord); couplings are read in native units.
SolutionRecord record_from_json(const Json& doc);
ELResiduals residuals_from_json(const Json& doc);
StabilityReport stability_from_json(const Json& doc);

// "m,V" with one row per grid node, 17 significant digits.
std::string vcurve_csv(const VCurve& curve);
// Rows of a CSV written by vcurve_csv (header checked).
std::vector<std::pair<double, double>> parse_vcurve_csv(std::string_view text);
// Seams, seam values and detected minima.
Json vcurve_sidecar(const VCurve& curve);

std::string format_double(double value);

}  // namespace dsea
