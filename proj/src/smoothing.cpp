#include "egap/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace egap {

namespace {

SubproblemSpec dual_subproblem(const ComponentSpec& c, const Vector& y, double beta1) {
  SubproblemSpec s;
  s.objective = &c.objective;
  s.linear = c.block.apply_transpose(y);
  s.quad_weight = beta1 * c.prox.rho;
  s.quad_center = c.prox.center;
  s.box = &c.box;
  s.objective_sigma = c.sigma_phi;
  s.objective_lipschitz = c.gradient_lipschitz;
  return s;
}

// beta1 actually used for component c when the plain dual is requested.
double plain_dual_weight(const ComponentSpec& c) {
  if (std::holds_alternative<WeightedAbs>(c.objective) || std::holds_alternative<ZeroObjective>(c.objective)) return 0.0;
  if (c.sigma_phi > 0.0) return 0.0;
  if (auto* l = std::get_if<LinearMinusLog>(&c.objective); l && l->weight == 0.0) return 0.0;
  if (auto* q = std::get_if<ConvexQuadratic>(&c.objective)) {
    bool diagonal = true;
    for (Eigen::Index r = 0; r < q->hessian.rows() && diagonal; ++r)
      for (Eigen::Index k = 0; k < q->hessian.cols(); ++k)
        if (r != k && q->hessian(r, k) != 0.0) diagonal = false;
    if (diagonal) return 0.0;
  }
  return kNonsmoothDualProxy;
}

SmoothedDualEval evaluate_dual(const SeparableProblem& problem, const Vector& y, const std::vector<double>& weights,
                               const KernelOptions& options) {
  const std::size_t count = problem.num_components();
  const double share = 1.0 / static_cast<double>(count);
  SmoothedDualEval out;
  out.minimizers.resize(count);
  std::vector<double> local(count, 0.0);

  for_each_component(options.exec, count, [&](std::size_t i) {
    const auto& c = problem.component(i);
    const SubproblemSpec s = dual_subproblem(c, y, weights[i]);
    Vector x;
    try {
      x = solve(s, options.inner_tolerance);
    } catch (const InnerSolveError&) {
      throw;
    } catch (const Error& e) {
      throw InnerSolveError(i, e.what());
    }
    local[i] = objective_value(c.objective, x) + s.linear.dot(x) + weights[i] * c.prox.value(x) - share * problem.rhs().dot(y);
    out.minimizers[i] = std::move(x);
  });

  // Fixed-order reduction keeps the value independent of the thread count.
  out.value = std::accumulate(local.begin(), local.end(), 0.0);
  out.gradient = residual(problem, out.minimizers);
  return out;
}

Primal mapped_point(const SeparableProblem& problem, const SmoothingConstants& constants, const Primal& x_hat, double beta2,
                    const std::vector<PrimalMapKind>& kinds, const KernelOptions& options) {
  const std::size_t count = problem.num_components();
  const Vector multiplier = residual(problem, x_hat) / beta2;
  Primal out(count);
  static const ObjectiveOracle kZero = ZeroObjective{};

  for_each_component(options.exec, count, [&](std::size_t i) {
    const auto& c = problem.component(i);
    SubproblemSpec s;
    s.box = &c.box;
    s.quad_center = x_hat[i];
    s.linear = c.block.apply_transpose(multiplier);
    const double coupling = constants.psi_lipschitz(i, beta2);
    if (kinds[i] == PrimalMapKind::gradient) {
      if (!c.gradient_lipschitz) throw ConfigError("component " + std::to_string(i) + ": gradient mapping needs gradient_lipschitz");
      s.objective = &kZero;
      s.linear += objective_gradient(c.objective, x_hat[i]);
      s.quad_weight = *c.gradient_lipschitz + coupling;
    } else {
      s.objective = &c.objective;
      s.quad_weight = coupling;
      s.objective_sigma = c.sigma_phi;
      s.objective_lipschitz = c.gradient_lipschitz;
    }
    try {
      out[i] = solve(s, options.inner_tolerance);
    } catch (const InnerSolveError&) {
      throw;
    } catch (const Error& e) {
      throw InnerSolveError(i, e.what());
    }
  });
  return out;
}

}  // namespace

SmoothedDualEval smoothed_dual(const SeparableProblem& problem, const Vector& y, double beta1, const KernelOptions& options) {
  if (!(beta1 >= 0.0)) throw ConfigError("smoothness parameter beta1 must be nonnegative");
  return evaluate_dual(problem, y, std::vector<double>(problem.num_components(), beta1), options);
}

SmoothedDualEval dual_function(const SeparableProblem& problem, const Vector& y, const KernelOptions& options) {
  std::vector<double> weights;
  for (const auto& c : problem.components()) weights.push_back(plain_dual_weight(c));
  return evaluate_dual(problem, y, weights, options);
}

double smoothed_dual_gradient_check(const SeparableProblem& problem, const Vector& y, double beta1, double h,
                                    const KernelOptions& options) {
  if (h <= 0.0) h = 1e-5 * (1.0 + y.norm());
  const Vector grad = smoothed_dual(problem, y, beta1, options).gradient;
  double worst = 0.0;
  for (Eigen::Index j = 0; j < y.size(); ++j) {
    Vector plus = y, minus = y;
    plus[j] += h;
    minus[j] -= h;
    const double fd = (smoothed_dual(problem, plus, beta1, options).value - smoothed_dual(problem, minus, beta1, options).value) / (2.0 * h);
    worst = std::max(worst, std::abs(fd - grad[j]) / std::max(1.0, std::abs(grad[j])));
  }
  return worst;
}

PenaltyEval penalty_eval(const SeparableProblem& problem, const Primal& x, double beta2) {
  if (!(beta2 > 0.0)) throw ConfigError("smoothness parameter beta2 must be positive");
  PenaltyEval out;
  out.phi = objective_value(problem, x);
  out.residual = residual(problem, x);
  out.multiplier = out.residual / beta2;
  out.psi_value = out.residual.squaredNorm() / (2.0 * beta2);
  out.f_value = out.phi + out.psi_value;
  return out;
}

std::vector<PrimalMapKind> default_primal_map_kinds(const SeparableProblem& problem) {
  std::vector<PrimalMapKind> kinds;
  for (const auto& c : problem.components())
    kinds.push_back(c.gradient_lipschitz ? PrimalMapKind::gradient : PrimalMapKind::proximal);
  return kinds;
}

Primal proximal_map(const SeparableProblem& problem, const SmoothingConstants& constants, const Primal& x_hat, double beta2,
                    const KernelOptions& options) {
  return mapped_point(problem, constants, x_hat, beta2, std::vector<PrimalMapKind>(problem.num_components(), PrimalMapKind::proximal),
                      options);
}

Primal gradient_map(const SeparableProblem& problem, const SmoothingConstants& constants, const Primal& x_hat, double beta2,
                    const KernelOptions& options) {
  return mapped_point(problem, constants, x_hat, beta2, std::vector<PrimalMapKind>(problem.num_components(), PrimalMapKind::gradient),
                      options);
}

Primal primal_map(const SeparableProblem& problem, const SmoothingConstants& constants, const Primal& x_hat, double beta2,
                  const std::vector<PrimalMapKind>& kinds, const KernelOptions& options) {
  return mapped_point(problem, constants, x_hat, beta2, kinds, options);
}

double gradient_map_model(const SeparableProblem& problem, const SmoothingConstants& constants, const Primal& x_hat, double beta2,
                          const Primal& x) {
  const PenaltyEval at = penalty_eval(problem, x_hat, beta2);
  double model = at.f_value;
  for (std::size_t i = 0; i < problem.num_components(); ++i) {
    const auto& c = problem.component(i);
    if (!c.gradient_lipschitz) throw ConfigError("component " + std::to_string(i) + ": gradient mapping needs gradient_lipschitz");
    const Vector d = x[i] - x_hat[i];
    const Vector g = objective_gradient(c.objective, x_hat[i]) + c.block.apply_transpose(at.multiplier);
    const double l = *c.gradient_lipschitz + constants.psi_lipschitz(i, beta2);
    model += g.dot(d) + 0.5 * l * d.squaredNorm();
  }
  return model;
}

Vector dual_gradient_map(const SeparableProblem& problem, const SmoothingConstants& constants, const Vector& y_hat, double beta1,
                         const KernelOptions& options, SmoothedDualEval* eval) {
  SmoothedDualEval local = smoothed_dual(problem, y_hat, beta1, options);
  Vector next = y_hat + local.gradient / constants.dual_lipschitz(beta1);
  if (eval) *eval = std::move(local);
  return next;
}

void ProxDiameterEstimates::observe(const SeparableProblem& problem, const Primal& x, const Vector& y) {
  if (max_prox_.empty()) max_prox_.assign(problem.num_components(), 0.0);
  for (std::size_t i = 0; i < problem.num_components(); ++i)
    max_prox_[i] = std::max(max_prox_[i], problem.component(i).prox.value(x[i]));
  max_dual_norm_ = std::max(max_dual_norm_, y.norm());
  ++observed_;
}

std::vector<double> ProxDiameterEstimates::diameters() const {
  std::vector<double> d = max_prox_;
  for (double& v : d) v += omega_;
  return d;
}

double ProxDiameterEstimates::sum_diameters() const {
  const auto d = diameters();
  return std::accumulate(d.begin(), d.end(), 0.0);
}

}  // namespace egap
