#include <algorithm>
#include <cmath>

#include "egap/algorithms.hpp"

namespace egap {

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::none:
      return "none";
    case StopReason::gap:
      return "gap";
    case StopReason::stall:
      return "stall";
    case StopReason::target:
      return "target";
    case StopReason::max_iter:
      return "max_iter";
  }
  return "none";
}

double relative_feasibility(const Vector& residual, const Vector& rhs) {
  const double scale = rhs.norm();
  return residual.norm() / (scale > 0.0 ? scale : 1.0);
}

StopDecision stopping_check(const ConvergenceTrace& trace, const SolverConfig& config) {
  if (trace.empty()) return {};
  const TraceRecord& now = trace.back();
  if (!(now.rpfgap <= config.eps_p)) return {};

  if (config.baseline_target) {
    const double target = *config.baseline_target;
    if (now.phi <= target + config.eps_d * (std::abs(target) + 1.0)) return {true, StopReason::target};
    return {};
  }

  if (now.rdfgap <= config.eps_d * (std::abs(now.phi) + 1.0)) return {true, StopReason::gap};

  const std::size_t n = trace.size();
  if (n >= 4) {
    const double scale = std::max(1.0, std::abs(now.phi));
    bool stalled = true;
    for (std::size_t j = 1; j <= 3 && stalled; ++j)
      stalled = std::abs(now.phi - trace.records[n - 1 - j].phi) / scale <= config.eps_phi;
    if (stalled) return {true, StopReason::stall};
  }
  return {};
}

}  // namespace egap
