#include <doctest.h>

#include <string>

#include "dsea/constants.hpp"
#include "dsea/error.hpp"
#include "dsea/io.hpp"

using namespace dsea;

namespace {

std::string error_of(std::string_view text) {
  try {
    parse_config_text(text);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_argument);
    return e.what();
  }
  return "";
}

bool starts_with(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

}  // namespace

TEST_CASE("minimal config gets defaults") {
  const RunConfig cfg = parse_config_text(R"({"masses": [1, 2], "weights": [1, 0.5]})");
  CHECK(cfg.sea.size() == 2);
  CHECK(cfg.couplings.c0 == 0.0);
  CHECK(cfg.couplings.free_term == FreeTerm::natural);
  CHECK(cfg.a_max_defaulted);
  CHECK(cfg.units == Units::native);
  const Json settings = config_to_json(cfg);
  CHECK(settings.at("a_max").get<double>() == doctest::Approx(6.0));
  CHECK(settings.at("quad").at("rel_tol").get<double>() == QuadSettings{}.rel_tol);
}

TEST_CASE("reduced couplings are converted to native ones") {
  const RunConfig cfg =
      parse_config_text(R"({"masses": [1], "weights": [1], "units": "reduced", "c3": 2.0, "c0": 512.0})");
  CHECK(cfg.couplings.c3 == doctest::Approx(2.0 * quartic_prefactor));
  CHECK(cfg.couplings.c0 == doctest::Approx(quartic_prefactor * pi6));
  const Json c = to_json(cfg.couplings);
  CHECK(c.at("reduced").at("c3").get<double>() == doctest::Approx(2.0));
}

TEST_CASE("config errors name the offending key") {
  CHECK(starts_with(error_of("{"), "config"));
  CHECK(starts_with(error_of("[]"), "config"));
  CHECK(starts_with(error_of(R"({"weights": [1]})"), "masses"));
  CHECK(starts_with(error_of(R"({"masses": [1], "weights": [1], "c7": 1})"), "c7"));
  CHECK(starts_with(error_of(R"({"masses": [1, "x"], "weights": [1, 1]})"), "masses[1]"));
  CHECK(starts_with(error_of(R"({"masses": [1, 0.5], "weights": [1, 1]})"), "masses[1]"));
  CHECK(starts_with(error_of(R"({"masses": [1], "weights": [1], "units": "si"})"), "units"));
  CHECK(starts_with(error_of(R"({"masses": [1], "weights": [1], "free_term": "x"})"), "free_term"));
  CHECK(starts_with(error_of(R"({"masses": [1], "weights": [1], "quad_tol": 0})"), "quad_tol"));
  CHECK(starts_with(error_of(R"({"masses": [1], "weights": [1], "max_subdiv": -3})"), "max_subdiv"));
  CHECK(starts_with(error_of(R"({"masses": [1], "weights": [1], "a_max": -1})"), "a_max"));
}

TEST_CASE("problem parsing") {
  const RunConfig cfg = parse_config_text(R"({"masses": [1, 2], "weights": [1, 0.3]})");
  const Json doc = Json::parse(R"({"mode": "minimize", "free_vars": ["rho2", "c0"], "bounds": {"rho2": [0, 0.5]},
                                   "starts": 3, "seed": 7, "constraint": "penalty"})");
  const SolveProblem p = parse_problem(doc, cfg);
  CHECK(p.mode == SolveMode::minimize);
  CHECK(p.constraint == ConstraintHandling::penalty);
  CHECK(p.starts == 3);
  CHECK(p.seed == 7);
  REQUIRE(p.free_vars.size() == 2);
  CHECK(p.free_vars[0].kind == VarKind::weight);
  CHECK(p.free_vars[0].index == 1);
  CHECK(p.free_vars[0].upper == 0.5);
  CHECK(p.free_vars[1].kind == VarKind::coupling);

  auto problem_error = [&](const char* text) {
    try {
      parse_problem(Json::parse(text), cfg);
    } catch (const Error& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(starts_with(problem_error(R"({"mode": "maximize"})"), "problem.mode"));
  CHECK(starts_with(problem_error(R"({"free_vars": ["rho0"]})"), "problem.free_vars"));
  CHECK(starts_with(problem_error(R"({"free_vars": ["x2"]})"), "problem.free_vars"));
  CHECK(starts_with(problem_error(R"({"answer": 42})"), "problem.answer"));
}

TEST_CASE("default problems by number of generations") {
  CHECK(default_problem_json(1).at("free_vars") == Json::array({"c0"}));
  CHECK(default_problem_json(2).at("free_vars") == Json::array({"rho2", "c0", "c1"}));
  CHECK(default_problem_json(3).at("free_vars") == Json::array({"rho3", "c0", "c1", "c3", "c4"}));
}

TEST_CASE("grid strings") {
  const GridSpec g = parse_grid("-3:4.5:120");
  CHECK(g.lo == -3.0);
  CHECK(g.hi == 4.5);
  CHECK(g.n == 120);
  CHECK_FALSE(g.mirror);
  CHECK_THROWS_AS(parse_grid("1:2"), Error);
  CHECK_THROWS_AS(parse_grid("a:2:3"), Error);
  CHECK_THROWS_AS(parse_grid("2:1:3"), Error);
  CHECK_THROWS_AS(parse_grid("1:2:0"), Error);
}

TEST_CASE("records survive a JSON round trip") {
  SolutionRecord rec;
  rec.sea = {{1.0, 2.0}, {1.0, 0.36798704}};
  rec.couplings.c0 = -1.25e-7;
  rec.couplings.c1 = 3.5e-9;
  rec.params = {0.36798704, -1.25e-7, 3.5e-9};
  rec.residuals.value_gaps = {1e-15};
  rec.residuals.derivative_residuals = {2e-15, -3e-15};
  rec.residuals.scale = 1e-8;
  rec.residual_norm = 4e-7;
  rec.converged = true;
  rec.iterations = 9;
  StabilityReport st;
  st.violated = {"iii_prime"};
  st.margin_iii = -0.5;
  rec.stability = st;
  const std::vector<Variable> vars{make_variable(VarKind::weight, 1), make_variable(VarKind::coupling, slot_c0),
                                   make_variable(VarKind::coupling, slot_c1)};
  const Json doc = to_json(rec, vars);
  const SolutionRecord back = record_from_json(Json::parse(doc.dump()));
  CHECK(back.sea.weights == rec.sea.weights);
  CHECK(back.couplings.c0 == rec.couplings.c0);
  CHECK(back.params == rec.params);
  CHECK(back.residuals.derivative_residuals == rec.residuals.derivative_residuals);
  CHECK(back.converged);
  REQUIRE(back.stability.has_value());
  CHECK(back.stability->violated == st.violated);
  CHECK(back.stability->margin_iii == -0.5);
}

TEST_CASE("V-curve CSV keeps every digit") {
  VCurve curve;
  curve.grid = {-1.5, 0.1, 1.0 / 3.0};
  curve.values = {1e-300, -2.0 / 7.0, 12345.678901234567};
  const auto rows = parse_vcurve_csv(vcurve_csv(curve));
  REQUIRE(rows.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(rows[i].first == curve.grid[i]);
    CHECK(rows[i].second == curve.values[i]);
  }
  CHECK_THROWS_AS(parse_vcurve_csv("x,y\n1,2\n"), Error);
}
