#include "dsea/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "dsea/error.hpp"

namespace dsea {
namespace {

[[noreturn]] void fail(const std::string& key, const std::string& message) {
  throw Error(Errc::invalid_argument, key + ": " + message);
}

double number_at(const Json& doc, const std::string& key, const std::string& path) {
  const Json& v = doc.at(key);
  if (!v.is_number()) fail(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(path, "must be finite");
  return x;
}

std::vector<double> number_array(const Json& doc, const std::string& key) {
  const Json& v = doc.at(key);
  if (!v.is_array()) fail(key, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) fail(key + "[" + std::to_string(i) + "]", "expected a number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

std::string string_at(const Json& doc, const std::string& key, const std::string& path) {
  const Json& v = doc.at(key);
  if (!v.is_string()) fail(path, "expected a string");
  return v.get<std::string>();
}

std::size_t count_at(const Json& doc, const std::string& key, const std::string& path) {
  const Json& v = doc.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) fail(path, "expected a non-negative integer");
  return v.get<std::size_t>();
}

void reject_unknown(const Json& doc, std::initializer_list<const char*> known, const std::string& prefix) {
  for (const auto& item : doc.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || item.key() == k;
    if (!ok) fail(prefix + item.key(), "unknown key");
  }
}

double coupling_scale(std::size_t slot, Units units) {
  if (units == Units::native) return 1.0;
  const Couplings unit = couplings_from_reduced(1.0, 1.0, 1.0, 1.0);
  const double values[] = {unit.c0, unit.c1, unit.c3, unit.c4};
  return values[slot];
}

Json array_of(const std::vector<double>& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(x);
  return out;
}

std::vector<double> doubles(const Json& v) { return v.get<std::vector<double>>(); }

}  // namespace

const char* tool_version() { return "0.1.0"; }

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

RunConfig parse_config(const Json& doc) {
  if (!doc.is_object()) fail("config", "expected a JSON object");
  reject_unknown(doc,
                 {"masses", "weights", "c0", "c1", "c3", "c4", "a_max", "free_term", "units", "quad_tol",
                  "quad_abs_tol", "max_subdiv", "problem", "grid"},
                 "");
  RunConfig cfg;
  if (!doc.contains("masses")) fail("masses", "required");
  if (!doc.contains("weights")) fail("weights", "required");
  cfg.sea.masses = number_array(doc, "masses");
  cfg.sea.weights = number_array(doc, "weights");
  if (doc.contains("units")) {
    const std::string u = string_at(doc, "units", "units");
    if (u == "native")
      cfg.units = Units::native;
    else if (u == "reduced")
      cfg.units = Units::reduced;
    else
      fail("units", "expected \"native\" or \"reduced\", got \"" + u + "\"");
  }
  double c[4] = {0.0, 0.0, 0.0, 0.0};
  const char* names[] = {"c0", "c1", "c3", "c4"};
  for (std::size_t k = 0; k < 4; ++k)
    if (doc.contains(names[k])) c[k] = number_at(doc, names[k], names[k]);
  cfg.couplings = cfg.units == Units::reduced ? couplings_from_reduced(c[0], c[1], c[2], c[3])
                                              : Couplings{c[0], c[1], c[2], c[3]};
  if (doc.contains("a_max")) {
    cfg.couplings.a_max = number_at(doc, "a_max", "a_max");
    if (!(cfg.couplings.a_max > 0.0)) fail("a_max", "must be positive");
    cfg.a_max_defaulted = false;
  }
  if (doc.contains("free_term")) {
    const std::string f = string_at(doc, "free_term", "free_term");
    if (f == "natural")
      cfg.couplings.free_term = FreeTerm::natural;
    else if (f == "zero")
      cfg.couplings.free_term = FreeTerm::zero;
    else
      fail("free_term", "expected \"natural\" or \"zero\", got \"" + f + "\"");
  }
  if (doc.contains("quad_tol")) {
    cfg.quad.rel_tol = number_at(doc, "quad_tol", "quad_tol");
    if (!(cfg.quad.rel_tol > 0.0)) fail("quad_tol", "must be positive");
  }
  if (doc.contains("quad_abs_tol")) {
    cfg.quad.tol = number_at(doc, "quad_abs_tol", "quad_abs_tol");
    if (cfg.quad.tol < 0.0) fail("quad_abs_tol", "must be non-negative");
  }
  if (doc.contains("max_subdiv")) {
    cfg.quad.max_subdiv = count_at(doc, "max_subdiv", "max_subdiv");
    if (cfg.quad.max_subdiv == 0) fail("max_subdiv", "must be positive");
  }
  validate_sea(cfg.sea);
  validate_couplings(cfg.sea, cfg.couplings);
  return cfg;
}

RunConfig parse_config_text(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail("config", std::string("not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("config", "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

Json config_to_json(const RunConfig& config) {
  Json out;
  out["masses"] = array_of(config.sea.masses);
  out["weights"] = array_of(config.sea.weights);
  out["couplings"] = to_json(config.couplings);
  out["a_max"] = cutoff_for(config.sea, config.couplings);
  out["a_max_defaulted"] = config.a_max_defaulted;
  out["units"] = config.units == Units::native ? "native" : "reduced";
  out["quad"] = {{"rel_tol", config.quad.rel_tol}, {"abs_tol", config.quad.tol}, {"max_subdiv", config.quad.max_subdiv}};
  return out;
}

Variable parse_variable_name(const std::string& name) {
  static const char* couplings[] = {"c0", "c1", "c3", "c4"};
  for (std::size_t k = 0; k < 4; ++k)
    if (name == couplings[k]) return make_variable(VarKind::coupling, k);
  auto generation = [&](std::size_t prefix) -> std::size_t {
    const std::string digits = name.substr(prefix);
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
      fail("problem.free_vars", "unknown variable \"" + name + "\"");
    const std::size_t g = std::stoul(digits);
    if (g == 0) fail("problem.free_vars", "generations count from 1 in \"" + name + "\"");
    return g - 1;
  };
  if (name.rfind("rho", 0) == 0) return make_variable(VarKind::weight, generation(3));
  if (name.rfind("m", 0) == 0) return make_variable(VarKind::mass, generation(1));
  fail("problem.free_vars", "unknown variable \"" + name + "\"");
}

SolveProblem parse_problem(const Json& problem, const RunConfig& config) {
  if (!problem.is_object()) fail("problem", "expected an object");
  reject_unknown(problem,
                 {"mode", "free_vars", "bounds", "starts", "seed", "tol", "max_iterations", "constraint",
                  "penalty_weight", "classify"},
                 "problem.");
  SolveProblem p;
  p.sea = config.sea;
  p.couplings = config.couplings;
  p.quad = config.quad;
  if (problem.contains("mode")) {
    const std::string m = string_at(problem, "mode", "problem.mode");
    if (m == "critical")
      p.mode = SolveMode::critical_point;
    else if (m == "minimize")
      p.mode = SolveMode::minimize;
    else
      fail("problem.mode", "expected \"critical\" or \"minimize\", got \"" + m + "\"");
  }
  if (problem.contains("free_vars")) {
    const Json& list = problem.at("free_vars");
    if (!list.is_array()) fail("problem.free_vars", "expected an array of names");
    for (const auto& item : list) {
      if (!item.is_string()) fail("problem.free_vars", "expected variable names");
      p.free_vars.push_back(parse_variable_name(item.get<std::string>()));
    }
  }
  if (problem.contains("bounds")) {
    const Json& bounds = problem.at("bounds");
    if (!bounds.is_object()) fail("problem.bounds", "expected an object of [lo, hi] pairs");
    for (const auto& item : bounds.items()) {
      const std::string path = "problem.bounds." + item.key();
      const Json& pair = item.value();
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number())
        fail(path, "expected [lo, hi]");
      bool found = false;
      for (auto& v : p.free_vars) {
        if (variable_name(v) != item.key()) continue;
        const double s = v.kind == VarKind::coupling ? coupling_scale(v.index, config.units) : 1.0;
        v.lower = pair[0].get<double>() * s;
        v.upper = pair[1].get<double>() * s;
        found = true;
      }
      if (!found) fail(path, "not a free variable");
    }
  }
  if (problem.contains("starts")) p.starts = count_at(problem, "starts", "problem.starts");
  if (problem.contains("seed")) p.seed = count_at(problem, "seed", "problem.seed");
  if (problem.contains("tol")) p.tol = number_at(problem, "tol", "problem.tol");
  if (problem.contains("max_iterations"))
    p.max_iterations = count_at(problem, "max_iterations", "problem.max_iterations");
  if (problem.contains("constraint")) {
    const std::string c = string_at(problem, "constraint", "problem.constraint");
    if (c == "eliminate")
      p.constraint = ConstraintHandling::eliminate;
    else if (c == "penalty")
      p.constraint = ConstraintHandling::penalty;
    else
      fail("problem.constraint", "expected \"eliminate\" or \"penalty\", got \"" + c + "\"");
  }
  if (problem.contains("penalty_weight"))
    p.penalty_weight = number_at(problem, "penalty_weight", "problem.penalty_weight");
  if (problem.contains("classify")) {
    if (!problem.at("classify").is_boolean()) fail("problem.classify", "expected true or false");
    p.classify = problem.at("classify").get<bool>();
  }
  validate_problem(p);
  return p;
}

Json default_problem_json(std::size_t generations) {
  Json vars = Json::array();
  if (generations == 2) vars.push_back("rho2");
  for (std::size_t g = 3; g <= generations; ++g) vars.push_back("rho" + std::to_string(g));
  vars.push_back("c0");
  if (generations >= 2) vars.push_back("c1");
  if (generations >= 3) {
    vars.push_back("c3");
    vars.push_back("c4");
  }
  return {{"mode", "critical"}, {"free_vars", vars}};
}

GridSpec parse_grid(std::string_view text) {
  GridSpec spec;
  const std::string s(text);
  const auto first = s.find(':');
  const auto second = first == std::string::npos ? std::string::npos : s.find(':', first + 1);
  if (second == std::string::npos) fail("grid", "expected \"min:max:n\", got \"" + s + "\"");
  try {
    std::size_t used = 0;
    const std::string lo = s.substr(0, first);
    const std::string hi = s.substr(first + 1, second - first - 1);
    const std::string n = s.substr(second + 1);
    spec.lo = std::stod(lo, &used);
    if (used != lo.size()) throw std::invalid_argument(lo);
    spec.hi = std::stod(hi, &used);
    if (used != hi.size()) throw std::invalid_argument(hi);
    const long count = std::stol(n, &used);
    if (used != n.size() || count <= 0) throw std::invalid_argument(n);
    spec.n = static_cast<std::size_t>(count);
  } catch (const std::logic_error&) {
    fail("grid", "expected \"min:max:n\" with numbers, got \"" + s + "\"");
  }
  if (!(spec.hi > spec.lo)) fail("grid", "min must be below max");
  // An explicit grid is taken as given.
  spec.mirror = false;
  return spec;
}

Json to_json(const DerivedScalars& s) { return {{"m3", s.m3}, {"m5", s.m5}, {"T", s.constraint}}; }

Json to_json(const ActionReport& r) {
  return {{"S_quartic", r.quartic}, {"free_term", r.free_term}, {"S_ext", r.extended},
          {"m3", r.scalars.m3},     {"m5", r.scalars.m5},       {"T", r.scalars.constraint},
          {"a_max", r.a_max}};
}

Json to_json(const ELResiduals& r) {
  return {{"value_gaps", array_of(r.value_gaps)},
          {"derivative_residuals", array_of(r.derivative_residuals)},
          {"scale", r.scale}};
}

Json to_json(const StabilityReport& r) {
  return {{"is_state_stable", r.is_state_stable},
          {"violated", r.violated},
          {"margin_ii", r.margin_ii},
          {"margin_iii", r.margin_iii},
          {"margin_a", r.margin_a},
          {"scale", r.scale},
          {"tol", r.tol}};
}

Json to_json(const Couplings& c) {
  const Couplings red = couplings_to_reduced(c);
  return {{"c0", c.c0},
          {"c1", c.c1},
          {"c3", c.c3},
          {"c4", c.c4},
          {"a_max", c.a_max},
          {"free_term", c.free_term == FreeTerm::natural ? "natural" : "zero"},
          {"reduced", {{"c0", red.c0}, {"c1", red.c1}, {"c3", red.c3}, {"c4", red.c4}}}};
}

Json to_json(const SolutionRecord& rec, const std::vector<Variable>& free_vars) {
  Json params = Json::object();
  for (std::size_t i = 0; i < free_vars.size() && i < rec.params.size(); ++i)
    params[variable_name(free_vars[i])] = rec.params[i];
  Json out = {{"masses", array_of(rec.sea.masses)},
              {"weights", array_of(rec.sea.weights)},
              {"couplings", to_json(rec.couplings)},
              {"params", params},
              {"residuals", to_json(rec.residuals)},
              {"residual_norm", rec.residual_norm},
              {"action", rec.action},
              {"converged", rec.converged},
              {"iterations", rec.iterations},
              {"start_index", rec.start_index},
              {"message", rec.message}};
  out["stability"] = rec.stability ? to_json(*rec.stability) : Json(nullptr);
  return out;
}

Json to_json(const VerificationReport& r) {
  return {{"passed", r.passed},
          {"residual_norm", r.residual_norm},
          {"refined_norm", r.refined_norm},
          {"degraded", r.degraded},
          {"residuals", to_json(r.residuals)},
          {"refined_residuals", to_json(r.refined_residuals)},
          {"stability", to_json(r.stability)},
          {"message", r.message}};
}

Json to_json(const CheckResult& c) {
  return {{"name", c.name},   {"passed", c.passed},     {"cases", c.cases},   {"worst", c.worst},
          {"tolerance", c.tolerance}, {"margin", c.tolerance - c.worst}, {"seconds", c.seconds},
          {"detail", c.detail}};
}

Json to_json(const LocalModelFit& fit) {
  return {{"curvature", fit.curvature}, {"log_coefficient", fit.log_coefficient}, {"residual", fit.residual}};
}

ELResiduals residuals_from_json(const Json& doc) {
  ELResiduals r;
  r.value_gaps = doubles(doc.at("value_gaps"));
  r.derivative_residuals = doubles(doc.at("derivative_residuals"));
  r.scale = doc.at("scale").get<double>();
  return r;
}

StabilityReport stability_from_json(const Json& doc) {
  StabilityReport r;
  r.is_state_stable = doc.at("is_state_stable").get<bool>();
  r.violated = doc.at("violated").get<std::vector<std::string>>();
  r.margin_ii = doc.at("margin_ii").get<double>();
  r.margin_iii = doc.at("margin_iii").get<double>();
  r.margin_a = doc.at("margin_a").get<double>();
  r.scale = doc.at("scale").get<double>();
  r.tol = doc.at("tol").get<double>();
  return r;
}

SolutionRecord record_from_json(const Json& doc) {
  try {
    SolutionRecord rec;
    rec.sea.masses = doubles(doc.at("masses"));
    rec.sea.weights = doubles(doc.at("weights"));
    const Json& c = doc.at("couplings");
    rec.couplings.c0 = c.at("c0").get<double>();
    rec.couplings.c1 = c.at("c1").get<double>();
    rec.couplings.c3 = c.at("c3").get<double>();
    rec.couplings.c4 = c.at("c4").get<double>();
    rec.couplings.a_max = c.at("a_max").get<double>();
    rec.couplings.free_term = c.at("free_term").get<std::string>() == "zero" ? FreeTerm::zero : FreeTerm::natural;
    for (const auto& item : doc.at("params").items()) rec.params.push_back(item.value().get<double>());
    rec.residuals = residuals_from_json(doc.at("residuals"));
    rec.residual_norm = doc.at("residual_norm").get<double>();
    rec.action = doc.at("action").get<double>();
    rec.converged = doc.at("converged").get<bool>();
    rec.iterations = doc.at("iterations").get<std::size_t>();
    rec.start_index = doc.at("start_index").get<std::size_t>();
    rec.message = doc.at("message").get<std::string>();
    if (!doc.at("stability").is_null()) rec.stability = stability_from_json(doc.at("stability"));
    return rec;
  } catch (const nlohmann::json::exception& e) {
    fail("record", e.what());
  }
}

std::string vcurve_csv(const VCurve& curve) {
  std::string out = "m,V\n";
  for (std::size_t i = 0; i < curve.grid.size(); ++i)
    out += format_double(curve.grid[i]) + "," + format_double(curve.values[i]) + "\n";
  return out;
}

std::vector<std::pair<double, double>> parse_vcurve_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != "m,V") fail("csv", "expected header \"m,V\"");
  std::vector<std::pair<double, double>> rows;
  std::size_t number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) fail("csv line " + std::to_string(number), "expected two columns");
    try {
      rows.emplace_back(std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
    } catch (const std::logic_error&) {
      fail("csv line " + std::to_string(number), "not a number");
    }
  }
  return rows;
}

Json vcurve_sidecar(const VCurve& curve) {
  std::size_t refined = 0;
  for (bool r : curve.refinement) refined += r ? 1 : 0;
  return {{"seams", array_of(curve.seam_points)},
          {"seam_values", array_of(curve.seam_values)},
          {"local_minima", array_of(curve.local_minima)},
          {"points", curve.grid.size()},
          {"refinement_points", refined}};
}

}  // namespace dsea
