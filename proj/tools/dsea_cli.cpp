// Command-line front end over the C API.
//
//   dsea eval      --config cfg.json [--out DIR]
//   dsea vdensity  --config cfg.json [--grid min:max:n] [--out DIR]
//   dsea critical  --config cfg.json [--seed N] [--tol X] [--out DIR]
//   dsea minimize  --config cfg.json [--seed N] [--tol X] [--out DIR]
//   dsea verify    [--seed N] [--record rec.json --tol X] [--out DIR]
//
// Exit codes: 0 success, 2 validation, 3 non-convergence, 4 verification
// failure, 1 anything else.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dsea/dsea.h"

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

int exit_code(dsea_status status) {
  switch (status) {
    case DSEA_OK: return 0;
    case DSEA_INVALID_ARGUMENT:
    case DSEA_DOMAIN:
    case DSEA_SEAM: return 2;
    case DSEA_NO_CONVERGENCE:
    case DSEA_QUADRATURE: return 3;
    case DSEA_VERIFICATION_FAILED: return 4;
    default: return 1;
  }
}

struct Failure {
  dsea_status status;
  std::string message;
};

void check(dsea_status status) {
  if (status != DSEA_OK) throw Failure{status, dsea_last_error()};
}

// Owning wrapper for strings handed out by the library.
struct OwnedString {
  char* ptr = nullptr;
  ~OwnedString() { dsea_string_free(ptr); }
  std::string str() const { return ptr ? std::string(ptr) : std::string(); }
};

struct ConfigDeleter {
  void operator()(dsea_config* c) const { dsea_config_free(c); }
};
using ConfigHandle = std::unique_ptr<dsea_config, ConfigDeleter>;

struct Options {
  std::string config;
  std::string out;
  std::string grid;
  std::optional<std::uint64_t> seed;
  std::optional<double> quad_tol;
  std::optional<double> tol;
  std::string record;
};

ConfigHandle load(const Options& opt) {
  if (opt.config.empty()) throw Failure{DSEA_INVALID_ARGUMENT, "--config: required for this subcommand"};
  dsea_config* raw = nullptr;
  check(dsea_config_from_file(opt.config.c_str(), &raw));
  ConfigHandle cfg(raw);
  if (opt.quad_tol) check(dsea_config_set_quad_tol(cfg.get(), *opt.quad_tol));
  return cfg;
}

Json settings_of(const dsea_config* cfg) {
  OwnedString s;
  check(dsea_config_settings(cfg, &s.ptr));
  return Json::parse(s.str());
}

std::string timestamp() {
  // SOURCE_DATE_EPOCH pins the manifest for reproducible reruns.
  std::time_t t = std::time(nullptr);
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) t = static_cast<std::time_t>(std::atoll(epoch));
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

// Collects output files and writes the manifest last.
class OutputDir {
public:
  OutputDir(const Options& opt, std::string subcommand) : opt_(opt), subcommand_(std::move(subcommand)) {
    if (!opt.out.empty()) fs::create_directories(opt.out);
  }

  bool enabled() const { return !opt_.out.empty(); }

  void write(const std::string& name, const std::string& content) {
    std::ofstream f(fs::path(opt_.out) / name, std::ios::binary);
    if (!f) throw Failure{DSEA_INVALID_ARGUMENT, "--out: cannot write " + name};
    f << content;
    files_.push_back(name);
  }

  void finish(Json settings) {
    if (!enabled()) return;
    Json manifest;
    manifest["subcommand"] = subcommand_;
    manifest["config"] = opt_.config;
    manifest["out"] = opt_.out;
    manifest["version"] = dsea_version();
    manifest["timestamp"] = timestamp();
    manifest["settings"] = std::move(settings);
    manifest["outputs"] = files_;
    std::ofstream f(fs::path(opt_.out) / "manifest.json", std::ios::binary);
    f << manifest.dump(2) << "\n";
  }

private:
  const Options& opt_;
  std::string subcommand_;
  std::vector<std::string> files_;
};

int cmd_eval(const Options& opt) {
  auto cfg = load(opt);
  OwnedString report;
  check(dsea_eval_action(cfg.get(), &report.ptr));
  OutputDir out(opt, "eval");
  std::cout << report.str() << "\n";
  if (out.enabled()) out.write("report.json", report.str() + "\n");
  out.finish(settings_of(cfg.get()));
  return 0;
}

dsea_grid grid_for(const Options& opt, const dsea_config* cfg) {
  dsea_grid grid{};
  if (!opt.grid.empty()) {
    check(dsea_parse_grid(opt.grid.c_str(), &grid));
  } else {
    int has = 0;
    check(dsea_config_grid(cfg, &grid, &has));
  }
  return grid;
}

Json grid_json(const dsea_grid& g) {
  return {{"lo", g.lo}, {"hi", g.hi}, {"n", g.n}, {"mirror", g.mirror != 0}, {"refine_seams", g.refine_seams != 0}};
}

int cmd_vdensity(const Options& opt) {
  auto cfg = load(opt);
  const dsea_grid grid = grid_for(opt, cfg.get());
  OwnedString csv, sidecar;
  check(dsea_sample_vcurve(cfg.get(), &grid, &csv.ptr, &sidecar.ptr));
  OutputDir out(opt, "vdensity");
  if (out.enabled()) {
    out.write("vdensity.csv", csv.str());
    out.write("vdensity.json", sidecar.str() + "\n");
    std::cout << sidecar.str() << "\n";
  } else {
    std::cout << csv.str();
  }
  Json settings = settings_of(cfg.get());
  settings["grid"] = grid_json(grid);
  out.finish(std::move(settings));
  return 0;
}

int cmd_solve(const Options& opt, const char* mode) {
  auto cfg = load(opt);
  OwnedString problem_text;
  check(dsea_config_problem(cfg.get(), &problem_text.ptr));
  Json problem = Json::parse(problem_text.str());
  problem["mode"] = mode;
  if (opt.seed) problem["seed"] = *opt.seed;
  if (opt.tol) problem["tol"] = *opt.tol;
  const std::string problem_dump = problem.dump();

  OwnedString result;
  const dsea_status status = dsea_solve(cfg.get(), problem_dump.c_str(), &result.ptr);
  if (status != DSEA_OK && status != DSEA_NO_CONVERGENCE) check(status);
  const std::string message = status == DSEA_OK ? std::string() : dsea_last_error();

  OutputDir out(opt, mode);
  std::cout << result.str() << "\n";
  if (out.enabled()) {
    out.write("records.json", result.str() + "\n");
    const Json doc = Json::parse(result.str());
    std::size_t index = 0;
    for (const auto& rec : doc.at("records")) {
      dsea_config* raw = nullptr;
      check(dsea_config_from_record(rec.dump().c_str(), &raw));
      ConfigHandle rec_cfg(raw);
      if (opt.quad_tol) check(dsea_config_set_quad_tol(rec_cfg.get(), *opt.quad_tol));
      OwnedString csv, sidecar;
      check(dsea_sample_vcurve(rec_cfg.get(), nullptr, &csv.ptr, &sidecar.ptr));
      const std::string stem = "vcurve_" + std::to_string(index++);
      out.write(stem + ".csv", csv.str());
      out.write(stem + ".json", sidecar.str() + "\n");
    }
  }
  Json settings = settings_of(cfg.get());
  settings["problem"] = problem;
  out.finish(std::move(settings));
  if (status != DSEA_OK) throw Failure{status, message};
  return 0;
}

int cmd_verify(const Options& opt) {
  OutputDir out(opt, "verify");
  Json settings;
  OwnedString report;
  dsea_status status;
  if (!opt.record.empty()) {
    std::ifstream in(opt.record);
    if (!in) throw Failure{DSEA_INVALID_ARGUMENT, "--record: cannot open " + opt.record};
    std::stringstream buf;
    buf << in.rdbuf();
    Json doc = Json::parse(buf.str(), nullptr, false);
    if (doc.is_discarded()) throw Failure{DSEA_INVALID_ARGUMENT, "--record: not valid JSON"};
    // Accept a bare record or the output of critical/minimize (first record).
    if (doc.contains("records")) doc = doc.at("records").at(0);
    const double tol = opt.tol.value_or(1e-8);
    status = dsea_verify_record(doc.dump().c_str(), tol, &report.ptr);
    settings = {{"record", opt.record}, {"tol", tol}};
  } else {
    const std::uint64_t seed = opt.seed.value_or(20261016);
    status = dsea_run_oracle_suite(seed, &report.ptr);
    settings = {{"seed", seed}};
  }
  if (report.ptr == nullptr) check(status);
  std::cout << report.str() << "\n";
  if (out.enabled()) out.write("verify.json", report.str() + "\n");
  out.finish(std::move(settings));
  if (status != DSEA_OK) throw Failure{status, dsea_last_error()};
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dirac-sea variational toolkit"};
  app.set_version_flag("--version", std::string(dsea_version()));
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config, "JSON configuration file");
    sub->add_option("--out", opt.out, "output directory (files plus manifest.json)");
    sub->add_option("--quad-tol", opt.quad_tol, "relative quadrature tolerance");
  };
  auto* eval = app.add_subcommand("eval", "action, m3, m5 and T as JSON");
  add_common(eval);
  auto* vdensity = app.add_subcommand("vdensity", "variation density on a grid as CSV");
  add_common(vdensity);
  vdensity->add_option("--grid", opt.grid, "grid as min:max:n");
  auto* critical = app.add_subcommand("critical", "critical points of the action");
  add_common(critical);
  critical->add_option("--seed", opt.seed, "multi-start seed");
  critical->add_option("--tol", opt.tol, "relative residual tolerance");
  auto* minimize = app.add_subcommand("minimize", "constrained minimizer of the action");
  add_common(minimize);
  minimize->add_option("--seed", opt.seed, "multi-start seed");
  minimize->add_option("--tol", opt.tol, "relative stopping tolerance");
  auto* verify = app.add_subcommand("verify", "oracle suites, or re-verification of a solution record");
  verify->add_option("--out", opt.out, "output directory");
  verify->add_option("--seed", opt.seed, "seed of the randomized suites");
  verify->add_option("--record", opt.record, "solution record to re-verify instead");
  verify->add_option("--tol", opt.tol, "residual tolerance for --record");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*eval) return cmd_eval(opt);
    if (*vdensity) return cmd_vdensity(opt);
    if (*critical) return cmd_solve(opt, "critical");
    if (*minimize) return cmd_solve(opt, "minimize");
    if (*verify) return cmd_verify(opt);
  } catch (const Failure& f) {
    std::cerr << "dsea: " << dsea_status_name(f.status) << ": " << f.message << "\n";
    return exit_code(f.status);
  } catch (const std::exception& e) {
    std::cerr << "dsea: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
