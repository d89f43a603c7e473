#pragma once

#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>

#include "egap/schedules.hpp"
#include "egap/smoothing.hpp"
#include "egap/trace.hpp"

namespace egap {

enum class Algorithm { alg1, alg2, alg2_symmetric, alg3, baseline_fixed };

/// Accepts alg1, alg2, alg2sym (or alg2_symmetric), alg3, baseline (or baseline_fixed).
std::optional<Algorithm> parse_algorithm(const std::string& name);
std::string to_string(Algorithm algorithm);

enum class TauRule { tightest, harmonic, shifted };

struct IterateState {
  Primal x_bar;
  Vector y_bar;
  double beta1 = 0.0;
  double beta2 = 0.0;
  double tau = 0.0;
  long k = 0;

  double phi = 0.0;
  double smoothed_dual_value = 0.0;
  double residual_norm = 0.0;
};

struct SolverConfig {
  Algorithm algorithm = Algorithm::alg1;
  std::optional<double> tau0;  // 0.499 / 0.998 / 0.5 by algorithm when unset
  TauRule tau_rule = TauRule::tightest;
  double tau_a = 0.0;  // parameters of the harmonic and shifted rules
  double tau_b = 0.0;
  std::optional<double> beta1_0;  // default sqrt(Lbar_M)
  std::optional<double> beta2_0;  // default sqrt(Lbar_M), or L^phi for alg3
  /// alg2 variants: start from beta_bar = sqrt(Lbar_M) max(1, tau0/sqrt(1 - tau0)) so
  /// that beta1 beta2 >= tau0^2/(1 - tau0) Lbar_M already holds at k = 0.
  bool schedule_consistent_start = false;

  double eps_p = 1e-2;
  double eps_d = 1e-1;
  double eps_phi = 1e-5;
  double omega = 1e-2;
  long max_iter = 10000;
  bool use_stopping_rule = true;  // false runs exactly max_iter iterations

  double inner_tolerance = kDefaultInnerTolerance;
  Execution exec = Execution::parallel();

  bool check_invariant_every_iter = false;  // throw InvariantError on the first violation
  /// Throw ScheduleError when the step-size condition fails. Unset means:
  /// enforce for alg1 and alg3, record only for the alg2 variants.
  std::optional<bool> strict_schedule;
  bool record_time = false;  // time_ms stays 0 otherwise so traces are reproducible

  std::optional<double> baseline_target;  // objective value the baseline must reach
  std::ostream* trace_sink = nullptr;     // rows streamed here as they are produced
  /// Called once per recorded row with the iterate that row describes.
  std::function<void(const IterateState&, const TraceRecord&)> observer;

  KernelOptions kernel() const { return {exec, inner_tolerance}; }
};

/// Relative slack used when checking f(x;beta2) <= d(y;beta1): 1e-8 (1 + |d|).
inline constexpr double kInvariantRelativeSlack = 1e-8;
double invariant_slack(double dual_value);


struct InitialPoint {
  Primal x_bar;
  Vector y_bar;
};

/// y = (A x^c - b)/beta2, x = P(x^c; beta2).
InitialPoint initial_point_primal(const SeparableProblem& problem, const SmoothingConstants& constants, double beta2,
                                  const KernelOptions& options = {});

/// x = x*(0; beta1), y = G(0; beta1). beta1 = 0 gives the strongly convex start
/// x = x*(0), y = (A x - b)/L^phi.
InitialPoint initial_point_dual(const SeparableProblem& problem, const SmoothingConstants& constants, double beta1,
                                const KernelOptions& options = {});

/// Steps move (x_bar, y_bar) and the smoothness parameters they own; tau and k
/// are advanced by the driver. `cached` may carry the smoothed dual at (y_bar, beta1).
struct StepContext {
  const SeparableProblem& problem;
  const SmoothingConstants& constants;
  const std::vector<PrimalMapKind>& map_kinds;
  KernelOptions options;
};

/// Primal step with simultaneous decrease: beta2 <- (1 - tau) beta2 first, the
/// step runs with the new beta2, then beta1 <- (1 - tau) beta1.
void step_Apm(IterateState& state, const StepContext& ctx, const SmoothedDualEval* cached = nullptr);
/// Primal step with beta2 fixed; updates beta1.
void step_Ap(IterateState& state, const StepContext& ctx, const SmoothedDualEval* cached = nullptr);
/// Dual step with beta1 fixed; updates beta2.
void step_Ad(IterateState& state, const StepContext& ctx);
/// Dual step for strongly convex objectives (no prox term); updates beta2.
void step_Ads(IterateState& state, const StepContext& ctx);

/// Worst ratio over components of the step-size condition
///   (1 - tau) beta1 sigma_i / tau^2 >= L_phi_i + M ||A_i||^2 / beta2_used,
/// where L_phi_i counts only for gradient-mapped components and beta2_used is
/// the beta2 the primal map sees. Values >= 1 mean the condition holds.
double schedule_condition_ratio(const SmoothingConstants& constants, const std::vector<PrimalMapKind>& kinds,
                                const SeparableProblem& problem, double beta1, double beta2_used, double tau);
/// beta2 / (tau^2 L^phi / (1 - tau)) for the strongly convex step.
double strongly_convex_condition_ratio(const SmoothingConstants& constants, double beta2, double tau);

enum class StopReason { none, gap, stall, target, max_iter };
std::string to_string(StopReason reason);

struct StopDecision {
  bool stop = false;
  StopReason reason = StopReason::none;
};

/// rpfgap <= eps_p and (rdfgap <= eps_d (|phi| + 1) or phi stalled over three
/// successive iterations within eps_phi). With a baseline target the second
/// part becomes phi <= target + eps_d (|target| + 1).
StopDecision stopping_check(const ConvergenceTrace& trace, const SolverConfig& config);

/// rpfgap denominator: ||b||, or 1 when b = 0.
double relative_feasibility(const Vector& residual, const Vector& rhs);

struct RunDiagnostics {
  long invariant_violations = 0;
  double worst_invariant_excess = -std::numeric_limits<double>::infinity();  // max of f - d - slack
  long schedule_violations = 0;
  double worst_schedule_ratio = std::numeric_limits<double>::infinity();  // min lhs/rhs
};

struct RunResult {
  IterateState state;
  ConvergenceTrace trace;
  StopReason reason = StopReason::none;
  long iterations = 0;
  double phi = 0.0;
  double feas_norm = 0.0;
  double time_ms = 0.0;
  RunDiagnostics diagnostics;
};

RunResult run(const SeparableProblem& problem, const SolverConfig& config);
RunResult run_baseline_fixed(const SeparableProblem& problem, const SolverConfig& config);

}  // namespace egap
