#include "dsea/dsea.h"

#include <cstring>
#include <exception>
#include <fstream>
#include <new>
#include <optional>
#include <string>

#include "dsea/error.hpp"
#include "dsea/io.hpp"

struct dsea_config {
  dsea::RunConfig config;
  std::optional<dsea::Json> problem;
  std::optional<dsea::GridSpec> grid;
};

namespace {

thread_local std::string last_error;

dsea_status to_status(dsea::Errc code) {
  switch (code) {
    case dsea::Errc::invalid_argument: return DSEA_INVALID_ARGUMENT;
    case dsea::Errc::no_convergence: return DSEA_NO_CONVERGENCE;
    case dsea::Errc::verification: return DSEA_VERIFICATION_FAILED;
    case dsea::Errc::domain: return DSEA_DOMAIN;
    case dsea::Errc::seam: return DSEA_SEAM;
    case dsea::Errc::quadrature: return DSEA_QUADRATURE;
  }
  return DSEA_INTERNAL;
}

// Runs body, translating exceptions into status codes and the error message.
template <class Body>
dsea_status guarded(Body&& body) {
  try {
    last_error.clear();
    return body();
  } catch (const dsea::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const nlohmann::json::exception& e) {
    last_error = std::string("json: ") + e.what();
    return DSEA_INVALID_ARGUMENT;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return DSEA_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return DSEA_INTERNAL;
  }
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(const void* p, const char* name) {
  if (p == nullptr) throw dsea::Error(dsea::Errc::invalid_argument, std::string(name) + ": null pointer");
}

dsea_config* make_config(const dsea::Json& doc) {
  auto* handle = new dsea_config{dsea::parse_config(doc), std::nullopt, std::nullopt};
  if (doc.contains("problem")) handle->problem = doc.at("problem");
  if (doc.contains("grid")) {
    if (!doc.at("grid").is_string()) throw dsea::Error(dsea::Errc::invalid_argument, "grid: expected \"min:max:n\"");
    handle->grid = dsea::parse_grid(doc.at("grid").get<std::string>());
  }
  return handle;
}

void export_grid(const dsea::GridSpec& spec, dsea_grid* out) {
  out->lo = spec.lo;
  out->hi = spec.hi;
  out->n = spec.n;
  out->mirror = spec.mirror ? 1 : 0;
  out->refine_seams = spec.refine_seams ? 1 : 0;
}

dsea::Json parse_json(const char* text, const char* what) {
  try {
    return dsea::Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw dsea::Error(dsea::Errc::invalid_argument, std::string(what) + ": not valid JSON: " + e.what());
  }
}

dsea::GridSpec grid_or_default(const dsea_config* config, const dsea_grid* grid) {
  if (grid == nullptr) return dsea::default_stability_grid(config->config.sea);
  dsea::GridSpec spec;
  spec.lo = grid->lo;
  spec.hi = grid->hi;
  spec.n = grid->n;
  spec.mirror = grid->mirror != 0;
  spec.refine_seams = grid->refine_seams != 0;
  return spec;
}

}  // namespace

extern "C" {

const char* dsea_version(void) { return dsea::tool_version(); }

const char* dsea_last_error(void) { return last_error.c_str(); }

const char* dsea_status_name(dsea_status status) {
  switch (status) {
    case DSEA_OK: return "ok";
    case DSEA_INTERNAL: return "internal";
    case DSEA_INVALID_ARGUMENT: return "invalid_argument";
    case DSEA_NO_CONVERGENCE: return "no_convergence";
    case DSEA_VERIFICATION_FAILED: return "verification_failed";
    case DSEA_DOMAIN: return "domain";
    case DSEA_SEAM: return "seam";
    case DSEA_QUADRATURE: return "quadrature";
  }
  return "unknown";
}

void dsea_string_free(char* s) { delete[] s; }

dsea_status dsea_config_from_json(const char* json, dsea_config** out) {
  return guarded([&] {
    require(json, "json");
    require(out, "out");
    *out = make_config(parse_json(json, "config"));
    return DSEA_OK;
  });
}

dsea_status dsea_config_from_file(const char* path, dsea_config** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    std::ifstream in(path);
    if (!in) throw dsea::Error(dsea::Errc::invalid_argument, std::string("config: cannot open ") + path);
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    *out = make_config(parse_json(text.c_str(), "config"));
    return DSEA_OK;
  });
}

dsea_status dsea_config_from_record(const char* record_json, dsea_config** out) {
  return guarded([&] {
    require(record_json, "record_json");
    require(out, "out");
    const dsea::SolutionRecord rec = dsea::record_from_json(parse_json(record_json, "record"));
    dsea::validate_sea(rec.sea);
    dsea::validate_couplings(rec.sea, rec.couplings);
    dsea::RunConfig cfg;
    cfg.sea = rec.sea;
    cfg.couplings = rec.couplings;
    cfg.a_max_defaulted = rec.couplings.a_max <= 0.0;
    *out = new dsea_config{cfg, std::nullopt, std::nullopt};
    return DSEA_OK;
  });
}

void dsea_config_free(dsea_config* config) { delete config; }

dsea_status dsea_config_set_quad_tol(dsea_config* config, double rel_tol) {
  return guarded([&] {
    require(config, "config");
    if (!(rel_tol > 0.0)) throw dsea::Error(dsea::Errc::invalid_argument, "quad_tol: must be positive");
    config->config.quad.rel_tol = rel_tol;
    return DSEA_OK;
  });
}

dsea_status dsea_config_settings(const dsea_config* config, char** json_out) {
  return guarded([&] {
    require(config, "config");
    require(json_out, "json_out");
    *json_out = copy_string(dsea::config_to_json(config->config).dump(2));
    return DSEA_OK;
  });
}

dsea_status dsea_config_grid(const dsea_config* config, dsea_grid* out, int* has_grid) {
  return guarded([&] {
    require(config, "config");
    require(out, "out");
    require(has_grid, "has_grid");
    *has_grid = config->grid ? 1 : 0;
    export_grid(config->grid.value_or(dsea::default_stability_grid(config->config.sea)), out);
    return DSEA_OK;
  });
}

dsea_status dsea_parse_grid(const char* text, dsea_grid* out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    export_grid(dsea::parse_grid(text), out);
    return DSEA_OK;
  });
}

dsea_status dsea_config_problem(const dsea_config* config, char** json_out) {
  return guarded([&] {
    require(config, "config");
    require(json_out, "json_out");
    const dsea::Json doc = config->problem.value_or(dsea::default_problem_json(config->config.sea.size()));
    *json_out = copy_string(doc.dump(2));
    return DSEA_OK;
  });
}

size_t dsea_config_generations(const dsea_config* config) { return config ? config->config.sea.size() : 0; }

dsea_status dsea_eval_action(const dsea_config* config, char** json_out) {
  return guarded([&] {
    require(config, "config");
    require(json_out, "json_out");
    const auto& c = config->config;
    *json_out = copy_string(dsea::to_json(dsea::evaluate_action(c.sea, c.couplings, c.quad)).dump(2));
    return DSEA_OK;
  });
}

dsea_status dsea_variation_density(const dsea_config* config, double m, double* out) {
  return guarded([&] {
    require(config, "config");
    require(out, "out");
    const auto& c = config->config;
    *out = dsea::variation_density(c.sea, c.couplings, m, c.quad);
    return DSEA_OK;
  });
}

dsea_status dsea_variation_density_prime(const dsea_config* config, double m, double* out) {
  return guarded([&] {
    require(config, "config");
    require(out, "out");
    const auto& c = config->config;
    *out = dsea::variation_density_prime(c.sea, c.couplings, m, c.quad);
    return DSEA_OK;
  });
}

dsea_status dsea_el_residuals(const dsea_config* config, char** json_out) {
  return guarded([&] {
    require(config, "config");
    require(json_out, "json_out");
    const auto& c = config->config;
    *json_out = copy_string(dsea::to_json(dsea::el_residuals(c.sea, c.couplings, c.quad)).dump(2));
    return DSEA_OK;
  });
}

dsea_status dsea_sample_vcurve(const dsea_config* config, const dsea_grid* grid, char** csv_out,
                               char** sidecar_json_out) {
  return guarded([&] {
    require(config, "config");
    require(csv_out, "csv_out");
    const auto& c = config->config;
    const dsea::VCurve curve = dsea::sample_vcurve(c.sea, c.couplings, grid_or_default(config, grid), c.quad);
    std::string csv = dsea::vcurve_csv(curve);
    std::string sidecar = sidecar_json_out ? dsea::vcurve_sidecar(curve).dump(2) : std::string();
    *csv_out = copy_string(csv);
    if (sidecar_json_out) *sidecar_json_out = copy_string(sidecar);
    return DSEA_OK;
  });
}

dsea_status dsea_classify(const dsea_config* config, const dsea_grid* grid, double tol, char** json_out) {
  return guarded([&] {
    require(config, "config");
    require(json_out, "json_out");
    const auto& c = config->config;
    const dsea::VCurve curve = dsea::sample_vcurve(c.sea, c.couplings, grid_or_default(config, grid), c.quad);
    *json_out = copy_string(dsea::to_json(dsea::classify_stability(curve, tol)).dump(2));
    return DSEA_OK;
  });
}

dsea_status dsea_solve(const dsea_config* config, const char* problem_json, char** json_out) {
  return guarded([&] {
    require(config, "config");
    require(json_out, "json_out");
    dsea::Json problem_doc;
    if (problem_json != nullptr)
      problem_doc = parse_json(problem_json, "problem");
    else if (config->problem)
      problem_doc = *config->problem;
    else
      problem_doc = dsea::default_problem_json(config->config.sea.size());
    const dsea::SolveProblem problem = dsea::parse_problem(problem_doc, config->config);
    dsea::Json out;
    out["mode"] = problem.mode == dsea::SolveMode::critical_point ? "critical" : "minimize";
    dsea::Json names = dsea::Json::array();
    for (const auto& v : problem.free_vars) names.push_back(dsea::variable_name(v));
    out["free_vars"] = names;
    out["records"] = dsea::Json::array();
    bool any = false;
    if (problem.mode == dsea::SolveMode::critical_point) {
      for (const auto& rec : dsea::solve_critical(problem)) {
        out["records"].push_back(dsea::to_json(rec, problem.free_vars));
        any = any || rec.converged;
      }
    } else {
      const dsea::SolutionRecord rec = dsea::minimize_action(problem);
      out["records"].push_back(dsea::to_json(rec, problem.free_vars));
      any = rec.converged;
    }
    *json_out = copy_string(out.dump(2));
    if (!any) {
      last_error = "solve: no start converged";
      return DSEA_NO_CONVERGENCE;
    }
    return DSEA_OK;
  });
}

dsea_status dsea_verify_record(const char* record_json, double tol, char** json_out) {
  return guarded([&] {
    require(record_json, "record_json");
    require(json_out, "json_out");
    const dsea::SolutionRecord rec = dsea::record_from_json(parse_json(record_json, "record"));
    const dsea::VerificationReport report = dsea::verify_solution(rec, tol);
    *json_out = copy_string(dsea::to_json(report).dump(2));
    if (!report.passed) {
      last_error = "verify: " + report.message;
      return DSEA_VERIFICATION_FAILED;
    }
    return DSEA_OK;
  });
}

dsea_status dsea_run_oracle_suite(uint64_t seed, char** json_out) {
  return guarded([&] {
    require(json_out, "json_out");
    dsea::Json out;
    out["seed"] = seed;
    out["checks"] = dsea::Json::array();
    bool passed = true;
    for (const auto& check : dsea::run_oracle_suite(seed)) {
      out["checks"].push_back(dsea::to_json(check));
      passed = passed && check.passed;
    }
    out["passed"] = passed;
    *json_out = copy_string(out.dump(2));
    if (!passed) {
      last_error = "oracle suite: at least one check failed";
      return DSEA_VERIFICATION_FAILED;
    }
    return DSEA_OK;
  });
}

}  // extern "C"
