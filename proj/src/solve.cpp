#include "dsea/solve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include <Eigen/Dense>

#include "dsea/action.hpp"
#include "dsea/error.hpp"
#include "parallel.hpp"

namespace dsea {
namespace {

constexpr double infinity = std::numeric_limits<double>::infinity();

bool is_linear(const Variable& v, SolveMode mode) {
  return mode == SolveMode::critical_point && v.kind == VarKind::coupling;
}

double& coupling_ref(Couplings& c, std::size_t slot) {
  switch (slot) {
    case slot_c0: return c.c0;
    case slot_c1: return c.c1;
    case slot_c3: return c.c3;
    default: return c.c4;
  }
}

double get_value(const Sea& sea, const Couplings& couplings, const Variable& v) {
  switch (v.kind) {
    case VarKind::mass: return sea.masses[v.index];
    case VarKind::weight: return sea.weights[v.index];
    default: return coupling_ref(const_cast<Couplings&>(couplings), v.index);
  }
}

void set_value(Sea& sea, Couplings& couplings, const Variable& v, double value) {
  switch (v.kind) {
    case VarKind::mass: sea.masses[v.index] = value; break;
    case VarKind::weight: sea.weights[v.index] = value; break;
    default: coupling_ref(couplings, v.index) = value;
  }
}

// Typical size of a variable, for steps and scaling.
double typical(const Variable& v, double value) {
  const double width = v.upper - v.lower;
  return std::max(std::abs(value), std::min(1e-6 * width, 1e-3 * std::max(std::abs(v.upper), std::abs(v.lower))));
}

// Step for a central difference that stays inside the box and, for masses,
// clear of every other occupied mass.
double fd_step(const Variable& v, double value, const Sea& sea) {
  double h = 1e-6 * typical(v, value);
  if (v.kind == VarKind::mass)
    for (std::size_t b = 0; b < sea.size(); ++b)
      if (b != v.index) h = std::min(h, std::abs(sea.masses[b] - value) / 4.0);
  return h;
}

std::vector<double> clamp_to_box(std::vector<double> x, const std::vector<Variable>& vars) {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], vars[i].lower, vars[i].upper);
  return x;
}

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Critical-point residual with the couplings among the free variables
// eliminated by linear least squares (they enter V linearly).
class ProjectedResidual {
public:
  explicit ProjectedResidual(const SolveProblem& problem) : problem_(problem) {
    for (std::size_t i = 0; i < problem.free_vars.size(); ++i)
      (is_linear(problem.free_vars[i], problem.mode) ? linear_ : nonlinear_).push_back(i);
  }

  const std::vector<std::size_t>& nonlinear() const { return nonlinear_; }

  struct Evaluation {
    Sea sea;
    Couplings couplings;
    ELSystem system;
    std::vector<double> residual;  // relative to the V scale
    bool in_box = true;
  };

  Evaluation operator()(std::span<const double> x) const {
    Evaluation out{problem_.sea, problem_.couplings, {}, {}, true};
    for (std::size_t k = 0; k < nonlinear_.size(); ++k)
      set_value(out.sea, out.couplings, problem_.free_vars[nonlinear_[k]], x[k]);
    for (std::size_t i = 1; i < out.sea.size(); ++i)
      if (!(out.sea.masses[i] > 0.0))
        throw Error(Errc::domain, "mass " + std::to_string(i + 1) + " left the positive axis");
    out.system = el_system(out.sea, out.couplings, problem_.quad);
    const auto& rows = out.system.rows;
    const double scale = out.system.scale > 0.0 ? out.system.scale : 1.0;
    if (!linear_.empty()) {
      // Fixed couplings go to the right-hand side.
      Couplings fixed = out.couplings;
      for (std::size_t i : linear_) set_value(out.sea, fixed, problem_.free_vars[i], 0.0);
      Eigen::MatrixXd a(rows.size(), linear_.size());
      Eigen::VectorXd b(rows.size());
      for (std::size_t r = 0; r < rows.size(); ++r) {
        b(r) = -rows[r].value(fixed);
        for (std::size_t k = 0; k < linear_.size(); ++k) a(r, k) = rows[r].shape[problem_.free_vars[linear_[k]].index];
      }
      Eigen::VectorXd norms = a.colwise().norm().transpose();
      for (Eigen::Index k = 0; k < norms.size(); ++k)
        if (norms(k) == 0.0) norms(k) = 1.0;
      const Eigen::MatrixXd scaled = a * norms.cwiseInverse().asDiagonal();
      const Eigen::VectorXd c = scaled.completeOrthogonalDecomposition().solve(b).cwiseQuotient(norms);
      out.couplings = fixed;
      for (std::size_t k = 0; k < linear_.size(); ++k) {
        const Variable& v = problem_.free_vars[linear_[k]];
        set_value(out.sea, out.couplings, v, c(k));
        if (c(k) < v.lower || c(k) > v.upper) out.in_box = false;
      }
    }
    const ELResiduals res = out.system.evaluate(out.couplings);
    out.residual = res.stacked();
    for (double& r : out.residual) r /= scale;
    return out;
  }

private:
  const SolveProblem& problem_;
  std::vector<std::size_t> linear_;
  std::vector<std::size_t> nonlinear_;
};

struct RunResult {
  std::vector<double> x;
  double norm = infinity;
  std::size_t iterations = 0;
  std::string message;
};

// Levenberg-Marquardt with Marquardt scaling, central-difference Jacobian and
// projection onto the box.
RunResult levenberg_marquardt(const ProjectedResidual& residual, const SolveProblem& problem,
                              std::vector<double> x) {
  std::vector<Variable> vars;
  for (std::size_t i : residual.nonlinear()) vars.push_back(problem.free_vars[i]);
  RunResult out;
  x = clamp_to_box(std::move(x), vars);
  auto eval = residual(x);
  std::vector<double> r = eval.residual;
  double norm = norm2(r);
  out.x = x;
  out.norm = norm;
  const std::size_t n = x.size();
  if (n == 0) {
    out.message = norm <= problem.tol ? "converged" : "residual above tolerance with no nonlinear variables";
    return out;
  }
  double lambda = 1e-3;
  // A few extra iterations below tolerance pin the root down well enough for
  // deduplication across starts.
  std::size_t polish = 0;
  for (std::size_t it = 0; it < problem.max_iterations; ++it) {
    out.iterations = it;
    if (norm <= problem.tol && polish++ >= 3) {
      out.message = "converged";
      return out;
    }
    Eigen::MatrixXd jac(r.size(), n);
    for (std::size_t k = 0; k < n; ++k) {
      const double h = fd_step(vars[k], x[k], eval.sea);
      std::vector<double> xp = x, xm = x;
      xp[k] = std::min(x[k] + h, vars[k].upper);
      xm[k] = std::max(x[k] - h, vars[k].lower);
      const auto rp = residual(xp).residual;
      const auto rm = residual(xm).residual;
      for (std::size_t i = 0; i < r.size(); ++i) jac(i, k) = (rp[i] - rm[i]) / (xp[k] - xm[k]);
    }
    const Eigen::Map<const Eigen::VectorXd> rv(r.data(), r.size());
    const Eigen::MatrixXd normal = jac.transpose() * jac;
    const Eigen::VectorXd gradient = jac.transpose() * rv;
    bool accepted = false;
    for (int attempt = 0; attempt < 30 && !accepted; ++attempt) {
      Eigen::MatrixXd damped = normal;
      for (std::size_t k = 0; k < n; ++k)
        damped(k, k) += lambda * std::max(normal(k, k), std::numeric_limits<double>::min());
      const Eigen::VectorXd step = damped.ldlt().solve(-gradient);
      std::vector<double> trial(n);
      for (std::size_t k = 0; k < n; ++k) trial[k] = x[k] + step(k);
      trial = clamp_to_box(std::move(trial), vars);
      if (trial == x) break;
      try {
        auto trial_eval = residual(trial);
        const double trial_norm = norm2(trial_eval.residual);
        if (trial_norm < norm) {
          double change = 0.0;
          for (std::size_t k = 0; k < n; ++k)
            change = std::max(change, std::abs(trial[k] - x[k]) / typical(vars[k], x[k]));
          x = std::move(trial);
          eval = std::move(trial_eval);
          r = eval.residual;
          norm = trial_norm;
          lambda = std::max(lambda / 3.0, 1e-12);
          accepted = true;
          if (change < 1e-15) {
            out.x = x;
            out.norm = norm;
            out.message = norm <= problem.tol ? "converged" : "stalled: step below resolution";
            return out;
          }
          continue;
        }
      } catch (const Error&) {
        // Outside the domain of the residual: shrink the step.
      }
      lambda *= 4.0;
    }
    out.x = x;
    out.norm = norm;
    if (!accepted) {
      out.message = norm <= problem.tol ? "converged" : "stalled: no decreasing step";
      return out;
    }
  }
  out.iterations = problem.max_iterations;
  out.message = norm <= problem.tol ? "converged" : "iteration limit reached";
  return out;
}

double draw_in(const Variable& v, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double lo = v.lower > 0.0 ? v.lower : std::max(v.upper * 1e-8, v.lower);
  if (lo > 0.0 && v.upper > lo) return lo * std::pow(v.upper / lo, unit(rng));
  return v.lower + (v.upper - v.lower) * unit(rng);
}

std::vector<std::vector<double>> start_points(const SolveProblem& problem, const std::vector<std::size_t>& indices) {
  std::vector<std::vector<double>> starts;
  std::vector<double> first;
  for (std::size_t i : indices) first.push_back(get_value(problem.sea, problem.couplings, problem.free_vars[i]));
  starts.push_back(first);
  std::mt19937_64 rng(problem.seed);
  for (std::size_t s = 1; s < std::max<std::size_t>(problem.starts, 1); ++s) {
    std::vector<double> x;
    for (std::size_t i : indices) x.push_back(draw_in(problem.free_vars[i], rng));
    starts.push_back(x);
  }
  return starts;
}

bool same_point(const std::vector<double>& a, const std::vector<double>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double scale = std::max({std::abs(a[i]), std::abs(b[i]), 1e-300});
    if (std::abs(a[i] - b[i]) > 1e-5 * scale) return false;
  }
  return true;
}

void attach_stability(SolutionRecord& record, const SolveProblem& problem) {
  if (!problem.classify) return;
  const GridSpec grid = problem.grid.value_or(default_stability_grid(record.sea));
  const VCurve curve = sample_vcurve(record.sea, record.couplings, grid, problem.quad);
  record.stability = classify_stability(curve, 1e-9);
}

SolutionRecord make_record(const SolveProblem& problem, const Sea& sea, const Couplings& couplings,
                           const ELResiduals& residuals) {
  SolutionRecord rec;
  rec.sea = sea;
  rec.couplings = couplings;
  for (const auto& v : problem.free_vars) rec.params.push_back(get_value(sea, couplings, v));
  rec.residuals = residuals;
  rec.residual_norm = residuals.norm() / (residuals.scale > 0.0 ? residuals.scale : 1.0);
  rec.action = action_extended(sea, couplings, problem.quad);
  return rec;
}

}  // namespace

std::string variable_name(const Variable& v) {
  switch (v.kind) {
    case VarKind::mass: return "m" + std::to_string(v.index + 1);
    case VarKind::weight: return "rho" + std::to_string(v.index + 1);
    default: {
      static const char* names[] = {"c0", "c1", "c3", "c4"};
      return v.index < 4 ? names[v.index] : "c?";
    }
  }
}

Variable make_variable(VarKind kind, std::size_t index) {
  switch (kind) {
    case VarKind::mass: return {kind, index, 1e-2, 1e2};
    case VarKind::weight: return {kind, index, 0.0, 1e2};
    default: {
      Couplings bound = couplings_from_reduced(1e10, 1e10, 1e10, 1e10);
      const double b = coupling_ref(bound, index);
      return {kind, index, -b, b};
    }
  }
}

GridSpec default_stability_grid(const Sea& sea, std::size_t n) {
  GridSpec spec;
  spec.hi = 2.5 * sea.max_mass();
  spec.lo = -spec.hi;
  spec.n = n;
  spec.mirror = true;
  return spec;
}

void validate_problem(const SolveProblem& problem) {
  validate_sea(problem.sea);
  validate_couplings(problem.sea, problem.couplings);
  if (problem.sea.masses.front() != 1.0 || problem.sea.weights.front() != 1.0)
    throw Error(Errc::invalid_argument, "masses[0], weights[0]: the gauge fixes the first generation to (1, 1)");
  std::set<std::pair<int, std::size_t>> seen;
  for (const auto& v : problem.free_vars) {
    const std::string name = variable_name(v);
    if (v.kind == VarKind::coupling ? v.index > 3 : v.index >= problem.sea.size())
      throw Error(Errc::invalid_argument, "free_vars: " + name + " does not exist");
    if (v.kind != VarKind::coupling && v.index == 0)
      throw Error(Errc::invalid_argument, "free_vars: " + name + " is fixed by the gauge");
    if (!seen.insert({static_cast<int>(v.kind), v.index}).second)
      throw Error(Errc::invalid_argument, "free_vars: " + name + " listed twice");
    if (!(v.lower <= v.upper)) throw Error(Errc::invalid_argument, "bounds." + name + ": lower exceeds upper");
  }
  if (problem.tol <= 0.0) throw Error(Errc::invalid_argument, "tol: must be positive");
  if (problem.mode == SolveMode::minimize && problem.penalty_weight <= 0.0)
    throw Error(Errc::invalid_argument, "penalty_weight: must be positive");
}

std::vector<SolutionRecord> solve_critical(const SolveProblem& problem) {
  validate_problem(problem);
  const ProjectedResidual residual(problem);
  const auto starts = start_points(problem, residual.nonlinear());
  std::vector<RunResult> runs(starts.size());
  detail::parallel_for(starts.size(), [&](std::size_t s) {
    try {
      runs[s] = levenberg_marquardt(residual, problem, starts[s]);
    } catch (const Error& e) {
      runs[s].message = std::string("start failed: ") + e.what();
    }
  });

  std::vector<SolutionRecord> roots;
  std::vector<std::vector<double>> seen;
  std::size_t best = runs.size();
  for (std::size_t s = 0; s < runs.size(); ++s) {
    if (best == runs.size() || runs[s].norm < runs[best].norm) best = s;
    if (!(runs[s].norm <= problem.tol)) continue;
    if (std::any_of(seen.begin(), seen.end(), [&](const auto& x) { return same_point(x, runs[s].x); })) continue;
    const auto eval = residual(runs[s].x);
    if (!eval.in_box) continue;
    seen.push_back(runs[s].x);
    SolutionRecord rec = make_record(problem, eval.sea, eval.couplings, eval.system.evaluate(eval.couplings));
    rec.converged = true;
    rec.iterations = runs[s].iterations;
    rec.start_index = s;
    rec.message = runs[s].message;
    roots.push_back(std::move(rec));
  }
  if (roots.empty()) {
    SolutionRecord rec;
    rec.sea = problem.sea;
    rec.couplings = problem.couplings;
    rec.message = "no start converged";
    if (best < runs.size() && !runs[best].x.empty() && std::isfinite(runs[best].norm)) {
      const auto eval = residual(runs[best].x);
      rec = make_record(problem, eval.sea, eval.couplings, eval.system.evaluate(eval.couplings));
      rec.iterations = runs[best].iterations;
      rec.start_index = best;
      rec.message = "no start converged; best attempt: " + runs[best].message;
    } else if (best < runs.size()) {
      rec.message = "no start converged; " + runs[best].message;
    }
    rec.converged = false;
    return {rec};
  }
  for (auto& rec : roots) attach_stability(rec, problem);
  std::stable_sort(roots.begin(), roots.end(),
                   [](const SolutionRecord& a, const SolutionRecord& b) { return a.action < b.action; });
  return roots;
}

namespace {

// Extended action as a function of the free variables, with T = 1 imposed.
class ConstrainedAction {
public:
  explicit ConstrainedAction(const SolveProblem& problem) : problem_(problem) {
    vars_ = problem.free_vars;
    if (problem.constraint == ConstraintHandling::penalty) {
      // rho1 becomes a variable; the penalty holds T near 1.
      vars_.push_back({VarKind::weight, 0, 0.0, 1e2});
    }
  }

  const std::vector<Variable>& vars() const { return vars_; }

  std::pair<Sea, Couplings> point(std::span<const double> x) const {
    Sea sea = problem_.sea;
    Couplings couplings = problem_.couplings;
    for (std::size_t k = 0; k < vars_.size(); ++k) set_value(sea, couplings, vars_[k], x[k]);
    if (problem_.constraint == ConstraintHandling::eliminate) {
      double rest = 0.0;
      for (std::size_t b = 1; b < sea.size(); ++b) rest += sea.weights[b] * std::pow(sea.masses[b], 3);
      sea.weights[0] = (1.0 - rest) / std::pow(sea.masses[0], 3);
    }
    return {sea, couplings};
  }

  double operator()(std::span<const double> x) const {
    auto [sea, couplings] = point(x);
    if (sea.weights[0] < 0.0) return infinity;
    for (std::size_t b = 1; b < sea.size(); ++b)
      if (!(sea.masses[b] > 0.0)) return infinity;
    double value = action_extended(sea, couplings, problem_.quad);
    if (problem_.constraint == ConstraintHandling::penalty) {
      const double t = compute_constraint_T(sea) - 1.0;
      value += penalty_scale_ * t * t;
    }
    return value;
  }

  void set_penalty_scale(double s) { penalty_scale_ = s; }

private:
  const SolveProblem& problem_;
  std::vector<Variable> vars_;
  double penalty_scale_ = 0.0;
};

struct DescentResult {
  std::vector<double> x;
  double value = infinity;
  std::size_t iterations = 0;
  bool converged = false;
  std::string message;
};

// Projected quasi-Newton descent with Armijo backtracking.
DescentResult projected_bfgs(const ConstrainedAction& objective, const SolveProblem& problem, std::vector<double> x) {
  const auto& vars = objective.vars();
  const std::size_t n = x.size();
  DescentResult out;
  x = clamp_to_box(std::move(x), vars);
  double f = objective(x);
  if (!std::isfinite(f)) {
    out.message = "infeasible start: the constraint cannot be met with nonnegative weights";
    return out;
  }
  Sea probe = objective.point(x).first;
  auto gradient = [&](const std::vector<double>& at) {
    std::vector<double> g(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double h = fd_step(vars[k], at[k], probe);
      std::vector<double> xp = at, xm = at;
      xp[k] = std::min(at[k] + h, vars[k].upper);
      xm[k] = std::max(at[k] - h, vars[k].lower);
      g[k] = (objective(xp) - objective(xm)) / (xp[k] - xm[k]);
    }
    return g;
  };
  std::vector<double> g = gradient(x);
  Eigen::MatrixXd inverse = Eigen::MatrixXd::Zero(n, n);
  auto reset = [&] {
    inverse.setZero();
    for (std::size_t k = 0; k < n; ++k) {
      const double t = typical(vars[k], x[k]);
      inverse(k, k) = t * t / std::max(std::abs(f), 1e-300);
    }
  };
  reset();
  for (std::size_t it = 0; it < problem.max_iterations; ++it) {
    out.iterations = it;
    // Variables at a bound with the gradient pushing outwards are frozen.
    std::vector<bool> active(n, false);
    for (std::size_t k = 0; k < n; ++k)
      active[k] = (x[k] <= vars[k].lower && g[k] > 0.0) || (x[k] >= vars[k].upper && g[k] < 0.0);
    Eigen::VectorXd gv(n);
    for (std::size_t k = 0; k < n; ++k) gv(k) = active[k] ? 0.0 : g[k];
    double projected = 0.0;
    for (std::size_t k = 0; k < n; ++k) projected = std::max(projected, std::abs(gv(k)) * typical(vars[k], x[k]));
    if (projected <= problem.tol * std::max(std::abs(f), 1e-300)) {
      out.converged = true;
      out.message = "converged: projected gradient below tolerance";
      break;
    }
    Eigen::VectorXd dir = -inverse * gv;
    for (std::size_t k = 0; k < n; ++k)
      if (active[k]) dir(k) = 0.0;
    if (gv.dot(dir) >= 0.0) {
      reset();
      dir = -inverse * gv;
    }
    double t = 1.0;
    bool accepted = false;
    std::vector<double> trial;
    double f_trial = infinity;
    for (int back = 0; back < 50; ++back, t *= 0.5) {
      trial.assign(n, 0.0);
      for (std::size_t k = 0; k < n; ++k) trial[k] = x[k] + t * dir(k);
      trial = clamp_to_box(std::move(trial), vars);
      double decrease = 0.0;
      for (std::size_t k = 0; k < n; ++k) decrease += gv(k) * (trial[k] - x[k]);
      f_trial = objective(trial);
      if (std::isfinite(f_trial) && f_trial <= f + 1e-4 * decrease) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      out.message = "line search failed";
      break;
    }
    const std::vector<double> g_trial = gradient(trial);
    Eigen::VectorXd s(n), y(n);
    for (std::size_t k = 0; k < n; ++k) {
      s(k) = trial[k] - x[k];
      y(k) = g_trial[k] - g[k];
    }
    const double sy = s.dot(y);
    if (sy > 0.0) {
      const double rho = 1.0 / sy;
      const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
      inverse = (id - rho * s * y.transpose()) * inverse * (id - rho * y * s.transpose()) + rho * s * s.transpose();
    }
    const double change = std::abs(f_trial - f);
    x = std::move(trial);
    g = g_trial;
    f = f_trial;
    if (change <= 1e-15 * std::max(std::abs(f), 1e-300)) {
      out.converged = true;
      out.message = "converged: action stationary";
      break;
    }
    if (it + 1 == problem.max_iterations) out.message = "iteration limit reached";
  }
  out.x = x;
  out.value = f;
  return out;
}

}  // namespace

SolutionRecord minimize_action(const SolveProblem& problem) {
  validate_problem(problem);
  if (problem.free_vars.empty()) {
    SolutionRecord rec =
        make_record(problem, problem.sea, problem.couplings, el_residuals(problem.sea, problem.couplings, problem.quad));
    rec.converged = true;
    rec.message = "no free variables: input evaluated";
    attach_stability(rec, problem);
    return rec;
  }
  ConstrainedAction objective(problem);
  std::vector<std::size_t> all(problem.free_vars.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  auto starts = start_points(problem, all);
  if (problem.constraint == ConstraintHandling::penalty) {
    const double t = compute_constraint_T(problem.sea);
    if (!(t > 0.0)) throw Error(Errc::invalid_argument, "weights: the constraint needs a nonzero weight");
    for (auto& x : starts) x.push_back(problem.sea.weights[0]);
    const double scale = std::abs(action_extended(problem.sea, problem.couplings, problem.quad));
    objective.set_penalty_scale(problem.penalty_weight * std::max(scale, 1e-300));
  }
  std::vector<DescentResult> runs(starts.size());
  detail::parallel_for(starts.size(), [&](std::size_t s) {
    try {
      runs[s] = projected_bfgs(objective, problem, starts[s]);
    } catch (const Error& e) {
      runs[s].message = std::string("start failed: ") + e.what();
    }
  });
  std::size_t best = runs.size();
  for (std::size_t s = 0; s < runs.size(); ++s)
    if (std::isfinite(runs[s].value) && (best == runs.size() || runs[s].value < runs[best].value)) best = s;
  if (best == runs.size()) {
    if (!runs.empty() && runs.front().message.rfind("infeasible", 0) == 0)
      throw Error(Errc::invalid_argument, "weights: " + runs.front().message);
    throw Error(Errc::no_convergence, "minimize: no start produced a finite action (" + runs.front().message + ")");
  }
  const auto [sea, couplings] = objective.point(runs[best].x);
  SolutionRecord rec = make_record(problem, sea, couplings, el_residuals(sea, couplings, problem.quad));
  rec.converged = runs[best].converged;
  rec.iterations = runs[best].iterations;
  rec.start_index = best;
  rec.message = runs[best].message;
  attach_stability(rec, problem);
  return rec;
}

VerificationReport verify_solution(const SolutionRecord& record, double tol, const QuadSettings& quad,
                                   const std::optional<GridSpec>& grid) {
  VerificationReport out;
  auto relative = [](const ELResiduals& r) { return r.norm() / (r.scale > 0.0 ? r.scale : 1.0); };
  try {
    out.residuals = el_residuals(record.sea, record.couplings, quad);
    out.residual_norm = relative(out.residuals);
    QuadSettings tight = quad;
    // Below ~1e-13 the seam derivative is dominated by roundoff amplified by
    // the extrapolation, so tightening stops there.
    tight.tol = quad.tol * 1e-1;
    tight.rel_tol = std::max(quad.rel_tol * 1e-1, 1e-13);
    tight.max_subdiv = quad.max_subdiv * 4;
    out.refined_residuals = el_residuals(record.sea, record.couplings, tight);
    out.refined_norm = relative(out.refined_residuals);
    out.degraded = out.refined_norm > 10.0 * out.residual_norm && out.refined_norm > tol;
    const VCurve curve =
        sample_vcurve(record.sea, record.couplings, grid.value_or(default_stability_grid(record.sea)), quad);
    out.stability = classify_stability(curve, 1e-9);
    out.passed = out.residual_norm <= tol && out.refined_norm <= tol && !out.degraded;
    if (!out.passed)
      out.message = out.degraded ? "residuals degrade under tighter quadrature" : "residuals above tolerance";
  } catch (const Error& e) {
    out.passed = false;
    out.message = e.what();
  }
  return out;
}

SolveProblem one_generation_problem(double c1_native) {
  SolveProblem p;
  p.sea = {{1.0}, {1.0}};
  p.couplings.c1 = c1_native;
  p.free_vars = {make_variable(VarKind::coupling, slot_c0)};
  p.starts = 1;
  return p;
}

SolveProblem two_generation_problem(double m2, double rho2_start) {
  SolveProblem p;
  p.sea = {{1.0, m2}, {1.0, rho2_start}};
  p.free_vars = {make_variable(VarKind::weight, 1), make_variable(VarKind::coupling, slot_c0),
                 make_variable(VarKind::coupling, slot_c1)};
  return p;
}

SolveProblem three_generation_problem(const Sea& seed_sea, const Couplings& seed_couplings) {
  SolveProblem p;
  p.sea = seed_sea;
  p.couplings = seed_couplings;
  p.free_vars = {make_variable(VarKind::weight, 2), make_variable(VarKind::coupling, slot_c0),
                 make_variable(VarKind::coupling, slot_c1), make_variable(VarKind::coupling, slot_c3),
                 make_variable(VarKind::coupling, slot_c4)};
  return p;
}

}  // namespace dsea
