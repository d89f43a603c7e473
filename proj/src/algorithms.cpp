#include "egap/algorithms.hpp"

#include <chrono>
#include <cmath>
#include <ostream>

#include "egap/errors.hpp"

namespace egap {

namespace {

Primal combine(double a, const Primal& x, double b, const Primal& z) {
  Primal out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = a * x[i] + b * z[i];
  return out;
}

double default_tau0(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::alg1:
      return 0.499;
    case Algorithm::alg2:
    case Algorithm::alg2_symmetric:
      return 0.998;
    case Algorithm::alg3:
      return 0.5;
    case Algorithm::baseline_fixed:
      break;
  }
  return 0.0;
}

TauSchedule make_schedule(const SolverConfig& config) {
  switch (config.tau_rule) {
    case TauRule::harmonic:
      return TauSchedule::harmonic(config.tau_a);
    case TauRule::shifted:
      return TauSchedule::shifted(config.tau_a, config.tau_b);
    case TauRule::tightest:
      break;
  }
  const double tau0 = config.tau0.value_or(default_tau0(config.algorithm));
  if (config.algorithm == Algorithm::alg1) return TauSchedule::alg1(tau0);
  return TauSchedule::alg2(tau0);
}

class Stopwatch {
 public:
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void emit(const SolverConfig& config, const TraceRecord& record, bool first) {
  if (!config.trace_sink) return;
  if (first) *config.trace_sink << kTraceHeader << '\n';
  *config.trace_sink << format_trace_row(record) << '\n';
}

}  // namespace

std::optional<Algorithm> parse_algorithm(const std::string& name) {
  if (name == "alg1") return Algorithm::alg1;
  if (name == "alg2") return Algorithm::alg2;
  if (name == "alg2sym" || name == "alg2_symmetric") return Algorithm::alg2_symmetric;
  if (name == "alg3") return Algorithm::alg3;
  if (name == "baseline" || name == "baseline_fixed") return Algorithm::baseline_fixed;
  return std::nullopt;
}

std::string to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::alg1:
      return "alg1";
    case Algorithm::alg2:
      return "alg2";
    case Algorithm::alg2_symmetric:
      return "alg2sym";
    case Algorithm::alg3:
      return "alg3";
    case Algorithm::baseline_fixed:
      return "baseline";
  }
  return "alg1";
}

double invariant_slack(double dual_value) { return kInvariantRelativeSlack * (1.0 + std::abs(dual_value)); }

InitialPoint initial_point_primal(const SeparableProblem& problem, const SmoothingConstants& constants, double beta2,
                                  const KernelOptions& options) {
  if (!(beta2 > 0.0)) throw ConfigError("initial point needs beta2 > 0");
  const Primal centers = problem.prox_centers();
  InitialPoint p;
  p.y_bar = residual(problem, centers) / beta2;
  p.x_bar = proximal_map(problem, constants, centers, beta2, options);
  return p;
}

InitialPoint initial_point_dual(const SeparableProblem& problem, const SmoothingConstants& constants, double beta1,
                                const KernelOptions& options) {
  const Vector origin = Vector::Zero(problem.num_rows());
  SmoothedDualEval eval = smoothed_dual(problem, origin, beta1, options);
  const double lipschitz = beta1 > 0.0 ? constants.dual_lipschitz(beta1) : constants.smooth_dual_lipschitz();
  InitialPoint p;
  p.y_bar = origin + eval.gradient / lipschitz;
  p.x_bar = std::move(eval.minimizers);
  return p;
}

void step_Ap(IterateState& s, const StepContext& ctx, const SmoothedDualEval* cached) {
  SmoothedDualEval local;
  if (!cached) {
    local = smoothed_dual(ctx.problem, s.y_bar, s.beta1, ctx.options);
    cached = &local;
  }
  const double t = s.tau;
  const Primal x_hat = combine(1.0 - t, s.x_bar, t, cached->minimizers);
  const Vector multiplier = residual(ctx.problem, x_hat) / s.beta2;
  s.y_bar = (1.0 - t) * s.y_bar + t * multiplier;
  s.x_bar = primal_map(ctx.problem, ctx.constants, x_hat, s.beta2, ctx.map_kinds, ctx.options);
  s.beta1 *= 1.0 - t;
}

void step_Apm(IterateState& s, const StepContext& ctx, const SmoothedDualEval* cached) {
  s.beta2 *= 1.0 - s.tau;
  step_Ap(s, ctx, cached);
}

void step_Ad(IterateState& s, const StepContext& ctx) {
  const double t = s.tau;
  const Vector y_hat = (1.0 - t) * s.y_bar + t * residual(ctx.problem, s.x_bar) / s.beta2;
  const SmoothedDualEval eval = smoothed_dual(ctx.problem, y_hat, s.beta1, ctx.options);
  s.x_bar = combine(1.0 - t, s.x_bar, t, eval.minimizers);
  s.y_bar = y_hat + eval.gradient / ctx.constants.dual_lipschitz(s.beta1);
  s.beta2 *= 1.0 - t;
}

void step_Ads(IterateState& s, const StepContext& ctx) {
  const double lphi = ctx.constants.smooth_dual_lipschitz();
  const double t = s.tau;
  const Vector y_hat = (1.0 - t) * s.y_bar + t * residual(ctx.problem, s.x_bar) / s.beta2;
  const SmoothedDualEval eval = smoothed_dual(ctx.problem, y_hat, 0.0, ctx.options);
  s.x_bar = combine(1.0 - t, s.x_bar, t, eval.minimizers);
  s.y_bar = y_hat + eval.gradient / lphi;
  s.beta2 *= 1.0 - t;
}

double schedule_condition_ratio(const SmoothingConstants& constants, const std::vector<PrimalMapKind>& kinds,
                                const SeparableProblem& problem, double beta1, double beta2_used, double tau) {
  double worst = std::numeric_limits<double>::infinity();
  const double m = static_cast<double>(constants.num_components);
  for (std::size_t i = 0; i < constants.num_components; ++i) {
    const double lhs = (1.0 - tau) * beta1 * constants.prox_sigmas[i] / (tau * tau);
    double rhs = m * constants.block_norms[i] * constants.block_norms[i] / beta2_used;
    if (kinds[i] == PrimalMapKind::gradient) rhs += problem.component(i).gradient_lipschitz.value_or(0.0);
    if (rhs > 0.0) worst = std::min(worst, lhs / rhs);
  }
  return worst;
}

double strongly_convex_condition_ratio(const SmoothingConstants& constants, double beta2, double tau) {
  const double rhs = tau * tau * constants.smooth_dual_lipschitz() / (1.0 - tau);
  return rhs > 0.0 ? beta2 / rhs : std::numeric_limits<double>::infinity();
}

RunResult run(const SeparableProblem& problem, const SolverConfig& config) {
  if (config.algorithm == Algorithm::baseline_fixed) return run_baseline_fixed(problem, config);
  if (config.max_iter < 0) throw ConfigError("max_iter must be nonnegative");

  const Algorithm alg = config.algorithm;
  const bool strongly_convex = alg == Algorithm::alg3;
  const SmoothingConstants constants = compute_constants(problem);
  const std::vector<PrimalMapKind> kinds = default_primal_map_kinds(problem);
  const KernelOptions options = config.kernel();
  const StepContext ctx{problem, constants, kinds, options};
  const bool strict = config.strict_schedule.value_or(alg == Algorithm::alg1 || alg == Algorithm::alg3);
  const TauSchedule schedule = make_schedule(config);
  const double sum_d = constants.sum_prox_diameters();

  Stopwatch clock;
  IterateState s;
  s.tau = schedule.initial();
  if (strongly_convex) {
    s.beta1 = 0.0;
    s.beta2 = config.beta2_0.value_or(constants.smooth_dual_lipschitz());
    InitialPoint p = initial_point_dual(problem, constants, 0.0, options);
    s.x_bar = std::move(p.x_bar);
    s.y_bar = std::move(p.y_bar);
  } else {
    double beta_bar = std::sqrt(constants.lbar);
    if (config.schedule_consistent_start && alg != Algorithm::alg1)
      beta_bar *= std::max(1.0, s.tau / std::sqrt(1.0 - s.tau));
    s.beta1 = config.beta1_0.value_or(beta_bar);
    s.beta2 = config.beta2_0.value_or(beta_bar);
    if (!(s.beta1 > 0.0 && s.beta2 > 0.0)) throw ConfigError("initial smoothness parameters must be positive");
    InitialPoint p = alg == Algorithm::alg2 ? initial_point_dual(problem, constants, s.beta1, options)
                                            : initial_point_primal(problem, constants, s.beta2, options);
    s.x_bar = std::move(p.x_bar);
    s.y_bar = std::move(p.y_bar);
  }

  RunResult result;
  ProxDiameterEstimates estimates(config.omega);

  for (;;) {
    // Evaluate the current pair; the dual minimizers are reused by primal steps.
    const SmoothedDualEval eval = smoothed_dual(problem, s.y_bar, s.beta1, options);
    const PenaltyEval pen = penalty_eval(problem, s.x_bar, s.beta2);
    s.phi = pen.phi;
    s.smoothed_dual_value = eval.value;
    s.residual_norm = pen.residual.norm();

    const double excess = pen.f_value - eval.value - invariant_slack(eval.value);
    result.diagnostics.worst_invariant_excess = std::max(result.diagnostics.worst_invariant_excess, excess);
    if (excess > 0.0) {
      ++result.diagnostics.invariant_violations;
      if (s.k == 0 || config.check_invariant_every_iter) throw InvariantError(static_cast<int>(s.k), pen.f_value, eval.value);
    }

    estimates.observe(problem, s.x_bar, s.y_bar);
    const double d_hat = estimates.sum_diameters();
    const double y_hat = estimates.dual_radius();

    TraceRecord r;
    r.k = s.k;
    r.tau = s.tau;
    r.beta1 = s.beta1;
    r.beta2 = s.beta2;
    r.phi = s.phi;
    r.dual_smoothed = eval.value;
    r.gap_surrogate = s.phi - eval.value;
    r.feas_norm = s.residual_norm;
    r.rpfgap = relative_feasibility(pen.residual, problem.rhs());
    r.rdfgap = strongly_convex ? std::max(0.0, s.phi - eval.value) : std::max(0.0, s.beta1 * sum_d - pen.psi_value);
    r.e_d = s.beta1 * d_hat;
    r.e_p = s.beta2 * (y_hat + std::sqrt(y_hat * y_hat + 2.0 * d_hat));
    r.time_ms = config.record_time ? clock.elapsed_ms() : 0.0;
    result.trace.records.push_back(r);
    emit(config, r, s.k == 0);
    if (config.observer) config.observer(s, r);

    if (config.use_stopping_rule) {
      const StopDecision decision = stopping_check(result.trace, config);
      if (decision.stop) {
        result.reason = decision.reason;
        break;
      }
    }
    if (s.k >= config.max_iter) {
      result.reason = StopReason::max_iter;
      break;
    }

    // Step-size condition for the step about to be taken.
    const bool primal_step = alg == Algorithm::alg1 || (alg == Algorithm::alg2 && s.k % 2 == 0) ||
                             (alg == Algorithm::alg2_symmetric && s.k % 2 == 1);
    double ratio = 0.0;
    if (strongly_convex)
      ratio = strongly_convex_condition_ratio(constants, s.beta2, s.tau);
    else if (alg == Algorithm::alg1)
      ratio = schedule_condition_ratio(constants, kinds, problem, s.beta1, (1.0 - s.tau) * s.beta2, s.tau);
    else
      ratio = schedule_condition_ratio(constants, primal_step ? kinds : std::vector<PrimalMapKind>(kinds.size(), PrimalMapKind::proximal),
                                       problem, s.beta1, s.beta2, s.tau);
    result.diagnostics.worst_schedule_ratio = std::min(result.diagnostics.worst_schedule_ratio, ratio);
    if (ratio < 1.0 - 1e-12) {
      ++result.diagnostics.schedule_violations;
      if (strict) throw ScheduleError(static_cast<int>(s.k), ratio, 1.0, "step-size condition violated");
    }

    if (strongly_convex)
      step_Ads(s, ctx);
    else if (alg == Algorithm::alg1)
      step_Apm(s, ctx, &eval);
    else if (primal_step)
      step_Ap(s, ctx, &eval);
    else
      step_Ad(s, ctx);

    s.tau = schedule.next(s.k, s.tau);
    ++s.k;
  }

  result.iterations = s.k;
  result.phi = s.phi;
  result.feas_norm = s.residual_norm;
  result.state = std::move(s);
  result.time_ms = clock.elapsed_ms();
  return result;
}

RunResult run_baseline_fixed(const SeparableProblem& problem, const SolverConfig& config) {
  if (!(config.eps_p > 0.0)) throw ConfigError("baseline needs eps_p > 0");
  if (config.max_iter < 0) throw ConfigError("max_iter must be nonnegative");
  const SmoothingConstants constants = compute_constants(problem);
  const KernelOptions options = config.kernel();
  const double sum_d = constants.sum_prox_diameters();
  const double c = config.eps_p / (sum_d > 0.0 ? sum_d : 1.0);
  const double lipschitz = constants.dual_lipschitz(c);

  Stopwatch clock;
  RunResult result;
  ProxDiameterEstimates estimates(config.omega);
  IterateState s;
  s.beta1 = c;
  s.y_bar = Vector::Zero(problem.num_rows());
  Vector weighted_gradients = Vector::Zero(problem.num_rows());
  Primal average;

  for (;;) {
    const double k = static_cast<double>(s.k);
    const SmoothedDualEval eval = smoothed_dual(problem, s.y_bar, c, options);
    // Running average with weights 2(l+1)/((k+1)(k+2)).
    if (s.k == 0)
      average = eval.minimizers;
    else
      average = combine(k / (k + 2.0), average, 2.0 / (k + 2.0), eval.minimizers);
    s.x_bar = average;
    s.tau = 2.0 / (k + 3.0);
    s.phi = objective_value(problem, average);
    s.smoothed_dual_value = eval.value;
    const Vector r_avg = residual(problem, average);
    s.residual_norm = r_avg.norm();
    estimates.observe(problem, s.x_bar, s.y_bar);

    TraceRecord r;
    r.k = s.k;
    r.tau = s.tau;
    r.beta1 = c;
    r.beta2 = 0.0;
    r.phi = s.phi;
    r.dual_smoothed = eval.value;
    r.gap_surrogate = s.phi - eval.value;
    r.feas_norm = s.residual_norm;
    r.rpfgap = relative_feasibility(r_avg, problem.rhs());
    r.rdfgap = c * sum_d;
    r.e_d = c * estimates.sum_diameters();
    r.e_p = 0.0;
    r.time_ms = config.record_time ? clock.elapsed_ms() : 0.0;
    result.trace.records.push_back(r);
    emit(config, r, s.k == 0);
    if (config.observer) config.observer(s, r);

    if (config.use_stopping_rule) {
      const StopDecision decision = stopping_check(result.trace, config);
      if (decision.stop) {
        result.reason = decision.reason;
        break;
      }
    }
    if (s.k >= config.max_iter) {
      result.reason = StopReason::max_iter;
      break;
    }

    const Vector u = s.y_bar + eval.gradient / lipschitz;
    weighted_gradients += 0.5 * (k + 1.0) * eval.gradient;
    const Vector v = weighted_gradients / lipschitz;
    s.y_bar = ((k + 1.0) / (k + 3.0)) * u + (2.0 / (k + 3.0)) * v;
    ++s.k;
  }

  result.iterations = s.k;
  result.phi = s.phi;
  result.feas_norm = s.residual_norm;
  result.state = std::move(s);
  result.time_ms = clock.elapsed_ms();
  return result;
}

}  // namespace egap
