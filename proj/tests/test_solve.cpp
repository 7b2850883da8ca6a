#include <doctest.h>

#include <cmath>

#include "dsea/action.hpp"
#include "dsea/constants.hpp"
#include "dsea/error.hpp"
#include "dsea/solve.hpp"
#include "generators.hpp"

using namespace dsea;

namespace {

const SolutionRecord& two_generation_root() {
  static const SolutionRecord root = [] {
    const auto records = solve_critical(two_generation_problem(2.0, 0.3));
    REQUIRE(records.size() == 1);
    return records.front();
  }();
  return root;
}

double action_on_constraint(const Sea& sea, const Couplings& c, double rho2) {
  // rho1 follows from T = 1.
  const double m2 = sea.masses[1];
  Sea s = sea;
  s.weights = {1.0 - rho2 * m2 * m2 * m2, rho2};
  return action_extended(s, c, QuadSettings{});
}

}  // namespace

TEST_CASE("one generation: c0 solves V'(1) = 0 for pinned c1") {
  const double c1 = 2e6 * quartic_prefactor * reduced_c1_factor;
  const auto records = solve_critical(one_generation_problem(c1));
  REQUIRE(records.size() == 1);
  const SolutionRecord& r = records.front();
  CHECK(r.converged);
  CHECK(r.residual_norm < 1e-10);
  CHECK(r.couplings.c1 == c1);
  const ELResiduals check = el_residuals(r.sea, r.couplings, QuadSettings{});
  CHECK(std::abs(check.derivative_residuals[0]) < 1e-10 * check.scale);
}

TEST_CASE("two generations at m2 = 2 have one root near rho2 = 0.36799") {
  const SolutionRecord& r = two_generation_root();
  CHECK(r.converged);
  CHECK(r.residual_norm < 1e-8);
  CHECK(r.sea.weights[1] == doctest::Approx(0.36799).epsilon(1e-4));
  REQUIRE(r.stability.has_value());
}

TEST_CASE("a solve is deterministic for a fixed seed") {
  auto problem = two_generation_problem(3.0, 0.2);
  problem.starts = 4;
  problem.seed = 99;
  problem.classify = false;
  const auto first = solve_critical(problem);
  const auto second = solve_critical(problem);
  REQUIRE(first.size() == second.size());
  for (std::size_t k = 0; k < first.size(); ++k) CHECK(first[k].params == second[k].params);
}

TEST_CASE("verification passes at the root and fails once rho2 is perturbed") {
  const SolutionRecord& r = two_generation_root();
  const VerificationReport good = verify_solution(r, 1e-8);
  CHECK(good.passed);
  CHECK_FALSE(good.degraded);
  SolutionRecord moved = r;
  moved.sea.weights[1] += 1e-2;
  const VerificationReport bad = verify_solution(moved, 1e-8);
  CHECK_FALSE(bad.passed);
  CHECK_FALSE(bad.message.empty());
}

TEST_CASE("reclassification is idempotent and leaves the record alone") {
  const SolutionRecord& r = two_generation_root();
  const SolutionRecord copy = r;
  const VerificationReport a = verify_solution(r, 1e-8);
  const VerificationReport b = verify_solution(r, 1e-8);
  CHECK(a.stability.is_state_stable == b.stability.is_state_stable);
  CHECK(a.stability.violated == b.stability.violated);
  CHECK(a.stability.margin_ii == b.stability.margin_ii);
  CHECK(a.refined_norm == b.refined_norm);
  CHECK(r.params == copy.params);
  CHECK(r.sea.weights == copy.sea.weights);
}

TEST_CASE("minimize keeps T = 1 and beats its neighbours on the constraint") {
  const SolutionRecord& root = two_generation_root();
  SolveProblem p;
  p.sea = {{1.0, 2.0}, {1.0, 0.1}};
  p.couplings = root.couplings;
  p.mode = SolveMode::minimize;
  p.free_vars = {make_variable(VarKind::weight, 1)};
  p.starts = 3;
  const SolutionRecord r = minimize_action(p);
  CHECK(r.converged);
  CHECK(compute_constraint_T(r.sea) == doctest::Approx(1.0).epsilon(1e-12));
  const double rho2 = r.sea.weights[1];
  const double here = action_on_constraint(r.sea, r.couplings, rho2);
  CHECK(here == doctest::Approx(r.action).epsilon(1e-12));
  for (double step : {1e-3, -1e-3}) CHECK(action_on_constraint(r.sea, r.couplings, rho2 + step) > here);

  SUBCASE("the penalty formulation lands close by") {
    p.constraint = ConstraintHandling::penalty;
    const SolutionRecord q = minimize_action(p);
    CHECK(std::abs(compute_constraint_T(q.sea) - 1.0) < 1e-3);
    CHECK(q.sea.weights[1] == doctest::Approx(rho2).epsilon(1e-3));
  }
}

TEST_CASE("malformed problems are rejected") {
  SUBCASE("gauge variables cannot be free") {
    auto p = two_generation_problem(2.0, 0.3);
    p.free_vars.push_back(Variable{VarKind::mass, 0, 0.5, 2.0});
    CHECK_THROWS_AS(validate_problem(p), Error);
  }
  SUBCASE("duplicates") {
    auto p = two_generation_problem(2.0, 0.3);
    p.free_vars.push_back(p.free_vars.front());
    CHECK_THROWS_AS(validate_problem(p), Error);
  }
  SUBCASE("out of range generation") {
    auto p = two_generation_problem(2.0, 0.3);
    p.free_vars.push_back(make_variable(VarKind::weight, 5));
    CHECK_THROWS_AS(validate_problem(p), Error);
  }
  SUBCASE("empty box") {
    auto p = two_generation_problem(2.0, 0.3);
    p.free_vars[0].lower = 2.0;
    p.free_vars[0].upper = 1.0;
    CHECK_THROWS_AS(validate_problem(p), Error);
  }
  SUBCASE("sea not in the normalized gauge") {
    auto p = two_generation_problem(2.0, 0.3);
    p.sea.weights[0] = 2.0;
    CHECK_THROWS_AS(validate_problem(p), Error);
  }
}

TEST_CASE("variable names") {
  CHECK(variable_name(make_variable(VarKind::mass, 1)) == "m2");
  CHECK(variable_name(make_variable(VarKind::weight, 2)) == "rho3");
  CHECK(variable_name(make_variable(VarKind::coupling, slot_c4)) == "c4");
}
