#pragma once

#include <vector>

#include "egap/inner_solver.hpp"
#include "egap/parallel.hpp"
#include "egap/problem.hpp"

namespace egap {

/// Shared settings for every per-component kernel.
struct KernelOptions {
  Execution exec = Execution::parallel();
  double inner_tolerance = kDefaultInnerTolerance;
};

/// d(y;beta1) together with its minimizers x*(y;beta1) and gradient A x* - b.
struct SmoothedDualEval {
  double value = 0.0;
  Primal minimizers;
  Vector gradient;
};

/// Smoothed dual, one independent subproblem per component:
///   d_i(y;beta1) = -(1/M) b'y + min_{x_i in X_i} phi_i(x_i) + y'A_i x_i + beta1 p_i(x_i)
/// beta1 = 0 evaluates the plain dual d(y); that requires every subproblem to
/// be uniquely solvable (strongly convex objective or a closed form).
SmoothedDualEval smoothed_dual(const SeparableProblem& problem, const Vector& y, double beta1, const KernelOptions& options = {});

/// Plain dual d(y). Exact for weighted_abs, zero and strongly convex components;
/// log components fall back to beta1 = 1e-9 smoothing (error <= 1e-9 D_i).
SmoothedDualEval dual_function(const SeparableProblem& problem, const Vector& y, const KernelOptions& options = {});

inline constexpr double kNonsmoothDualProxy = 1e-9;

/// Max relative error between the assembled gradient of d(.;beta1) and central
/// finite differences. h <= 0 selects 1e-5 (1 + ||y||).
double smoothed_dual_gradient_check(const SeparableProblem& problem, const Vector& y, double beta1, double h = 0.0,
                                    const KernelOptions& options = {});

/// psi(x;beta2) = ||Ax - b||^2 / (2 beta2), its maximizer y*(x;beta2) and f = phi + psi.
struct PenaltyEval {
  double phi = 0.0;
  double psi_value = 0.0;
  Vector multiplier;
  Vector residual;
  double f_value = 0.0;
};

PenaltyEval penalty_eval(const SeparableProblem& problem, const Primal& x, double beta2);

/// Per-component primal map used by the primal steps. Components with a known
/// gradient Lipschitz constant use the gradient mapping, all others the
/// proximal mapping.
enum class PrimalMapKind { proximal, gradient };

/// Proximal mapping P(x_hat;beta2), with L_i = M ||A_i||^2 / beta2.
Primal proximal_map(const SeparableProblem& problem, const SmoothingConstants& constants, const Primal& x_hat, double beta2,
                    const KernelOptions& options = {});

/// Gradient mapping G(x_hat;beta2), with L_i = L_phi_i + M ||A_i||^2 / beta2.
/// Throws ConfigError naming the first component without gradient_lipschitz.
Primal gradient_map(const SeparableProblem& problem, const SmoothingConstants& constants, const Primal& x_hat, double beta2,
                    const KernelOptions& options = {});

/// Mixed map: gradient mapping where `kinds[i] == gradient`, proximal mapping elsewhere.
Primal primal_map(const SeparableProblem& problem, const SmoothingConstants& constants, const Primal& x_hat, double beta2,
                  const std::vector<PrimalMapKind>& kinds, const KernelOptions& options = {});

/// Default per-component choice: gradient mapping when gradient_lipschitz is given.
std::vector<PrimalMapKind> default_primal_map_kinds(const SeparableProblem& problem);

/// Upper quadratic model of f(.;beta2) around x_hat used by the gradient mapping.
double gradient_map_model(const SeparableProblem& problem, const SmoothingConstants& constants, const Primal& x_hat, double beta2,
                          const Primal& x);

/// G(y_hat;beta1) = y_hat + (A x*(y_hat;beta1) - b) / L^d(beta1). `eval` receives
/// the smoothed dual at y_hat when non-null.
Vector dual_gradient_map(const SeparableProblem& problem, const SmoothingConstants& constants, const Vector& y_hat, double beta1,
                         const KernelOptions& options = {}, SmoothedDualEval* eval = nullptr);

/// Running estimates D^_i^k = max_j p_i(x_i^j) + omega and y^k = max_j ||y^j|| + omega.
class ProxDiameterEstimates {
 public:
  explicit ProxDiameterEstimates(double omega) : omega_(omega) {}

  void observe(const SeparableProblem& problem, const Primal& x, const Vector& y);

  bool empty() const { return observed_ == 0; }
  std::vector<double> diameters() const;
  double sum_diameters() const;
  double dual_radius() const { return max_dual_norm_ + omega_; }

 private:
  double omega_;
  std::size_t observed_ = 0;
  std::vector<double> max_prox_;
  double max_dual_norm_ = 0.0;
};

}  // namespace egap
