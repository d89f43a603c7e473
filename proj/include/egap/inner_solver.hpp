#pragma once

#include <optional>

#include "egap/problem.hpp"

namespace egap {

/// argmin_{x in box} phi(x) + linear'x + (quad_weight/2)||x - quad_center||^2
///
/// Every smoothing primitive reduces to this form. The minimizer is unique
/// whenever quad_weight + objective_sigma > 0.
struct SubproblemSpec {
  const ObjectiveOracle* objective = nullptr;
  Vector linear;
  double quad_weight = 0.0;
  Vector quad_center;
  const Box* box = nullptr;
  double objective_sigma = 0.0;                 // strong convexity of phi itself
  std::optional<double> objective_lipschitz;    // Lipschitz constant of grad phi, if known

  double strong_convexity() const { return quad_weight + objective_sigma; }
  double model_value(const Vector& x) const;
};

/// Default accuracy for subproblems; invariant checks at 1e-8 rely on it.
inline constexpr double kDefaultInnerTolerance = 1e-11;

/// Unique minimizer within `tolerance` (Euclidean). Dispatches to closed
/// forms when the objective has one, projected gradient otherwise.
Vector solve(const SubproblemSpec& spec, double tolerance = kDefaultInnerTolerance);

/// Exact 1-D minimizer of w|x - a| + l x + (q/2)(x - z)^2 on [lo, hi], q > 0.
double solve_weighted_abs_closed_form(double w, double a, double l, double q, double z, double lo, double hi);

/// Exact minimizer for a_lin'x - w ln(1 + b'x) + l'x + (q/2)||x - z||^2 on a box,
/// by bisection on the scalar multiplier t = w / (1 + b'x).
Vector solve_linear_minus_log(const LinearMinusLog& objective, const Vector& linear, double q, const Vector& z, const Box& box);

struct ProjectedGradientStats {
  int iterations = 0;
  double final_gradient_mapping_norm = 0.0;
  bool monotone = true;  // model value never increased along the iterates
};

struct ProjectedGradientOptions {
  int max_iterations = 100000;
  ProjectedGradientStats* stats = nullptr;
};

/// Projected gradient with step 1/(L_grad + q). Stops once the gradient-mapping
/// norm certifies ||x - x_exact|| <= tolerance through strong convexity.
/// Throws ConvergenceError with the achieved gradient-mapping norm at the cap.
Vector projected_gradient_solve(const SubproblemSpec& spec, double tolerance, const ProjectedGradientOptions& options = {});

/// Lipschitz constant of grad phi over the box, computed from the oracle data.
double objective_gradient_lipschitz(const ObjectiveOracle& objective, const Box& box);

}  // namespace egap
