#include "egap/inner_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace egap {

namespace {

Vector clamp_to(const Box& box, const Vector& x) { return x.cwiseMax(box.lower).cwiseMin(box.upper); }

bool is_diagonal(const Matrix& q) {
  for (Eigen::Index c = 0; c < q.cols(); ++c)
    for (Eigen::Index r = 0; r < q.rows(); ++r)
      if (r != c && q(r, c) != 0.0) return false;
  return true;
}

// Minimizer of the separable quadratic (h/2) x^2 + g x on [lo, hi]; h >= 0.
double minimize_scalar_quadratic(double h, double g, double lo, double hi, double fallback) {
  if (h > 0.0) return std::clamp(-g / h, lo, hi);
  if (g > 0.0) return lo;
  if (g < 0.0) return hi;
  return std::clamp(fallback, lo, hi);
}

Vector solve_zero(const SubproblemSpec& s) {
  Vector x(s.linear.size());
  for (Eigen::Index j = 0; j < x.size(); ++j)
    x[j] = minimize_scalar_quadratic(s.quad_weight, s.linear[j] - s.quad_weight * s.quad_center[j], s.box->lower[j],
                                     s.box->upper[j], s.quad_center[j]);
  return x;
}

Vector solve_weighted_abs(const WeightedAbs& o, const SubproblemSpec& s) {
  Vector x(s.linear.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double lo = s.box->lower[j], hi = s.box->upper[j];
    if (s.quad_weight > 0.0) {
      x[j] = solve_weighted_abs_closed_form(o.weights[j], o.anchors[j], s.linear[j], s.quad_weight, s.quad_center[j], lo, hi);
      continue;
    }
    // Piecewise linear: the minimum sits at the kink or at a bound.
    const double w = o.weights[j], a = o.anchors[j], l = s.linear[j];
    const double candidates[3] = {std::clamp(a, lo, hi), lo, hi};
    double best = candidates[0];
    double best_value = std::numeric_limits<double>::infinity();
    for (double c : candidates) {
      const double v = w * std::abs(c - a) + l * c;
      if (v < best_value) {
        best_value = v;
        best = c;
      }
    }
    x[j] = best;
  }
  return x;
}

Vector solve_diagonal_quadratic(const ConvexQuadratic& o, const SubproblemSpec& s) {
  Vector x(s.linear.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double h = o.hessian(j, j) + s.quad_weight;
    const double g = o.linear[j] + s.linear[j] - s.quad_weight * s.quad_center[j];
    x[j] = minimize_scalar_quadratic(h, g, s.box->lower[j], s.box->upper[j], s.quad_center[j]);
  }
  return x;
}

}  // namespace

double SubproblemSpec::model_value(const Vector& x) const {
  return objective_value(*objective, x) + linear.dot(x) + 0.5 * quad_weight * (x - quad_center).squaredNorm();
}

double solve_weighted_abs_closed_form(double w, double a, double l, double q, double z, double lo, double hi) {
  // Stationary point on each smooth branch, then the kink; a 1-D strongly
  // convex problem restricted to an interval is solved by clipping.
  double x = a;
  const double right = z - (l + w) / q;
  const double left = z - (l - w) / q;
  if (right > a)
    x = right;
  else if (left < a)
    x = left;
  return std::clamp(x, lo, hi);
}

Vector solve_linear_minus_log(const LinearMinusLog& o, const Vector& linear, double q, const Vector& z, const Box& box) {
  const Vector c = o.linear + linear;
  auto point = [&](double t) { return clamp_to(box, z - (c - t * o.log_coeffs) / q); };
  if (o.weight == 0.0) return point(0.0);

  // h(t) = t - w / (1 + b'x(t)) is strictly increasing; its root is the
  // multiplier of the log term at the minimizer.
  double lo = 0.0;
  double hi = o.weight / (1.0 + o.log_coeffs.dot(box.lower));
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double h = mid - o.weight / (1.0 + o.log_coeffs.dot(point(mid)));
    if (h < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return point(0.5 * (lo + hi));
}

double objective_gradient_lipschitz(const ObjectiveOracle& objective, const Box& box) {
  if (auto* o = std::get_if<ConvexQuadratic>(&objective)) return o->hessian.size() ? spectral_norm(o->hessian) : 0.0;
  if (auto* o = std::get_if<LinearMinusLog>(&objective)) {
    const double floor = 1.0 + o->log_coeffs.dot(box.lower);
    return o->weight * o->log_coeffs.squaredNorm() / (floor * floor);
  }
  if (std::holds_alternative<ZeroObjective>(objective)) return 0.0;
  throw ConfigError("weighted_abs objective has no gradient Lipschitz constant");
}

Vector projected_gradient_solve(const SubproblemSpec& s, double tolerance, const ProjectedGradientOptions& options) {
  const double mu = s.strong_convexity();
  if (!(mu > 0.0)) throw ConfigError("projected gradient needs a strongly convex subproblem");
  const double lgrad = s.objective_lipschitz ? *s.objective_lipschitz : objective_gradient_lipschitz(*s.objective, *s.box);
  const double step_l = lgrad + s.quad_weight;

  Vector x = clamp_to(*s.box, s.quad_center);
  double value = s.model_value(x);
  ProjectedGradientStats local;
  ProjectedGradientStats& stats = options.stats ? *options.stats : local;
  stats = {};

  for (int it = 0; it <= options.max_iterations; ++it) {
    const Vector g = objective_gradient(*s.objective, x) + s.linear + s.quad_weight * (x - s.quad_center);
    Vector next = clamp_to(*s.box, x - g / step_l);
    const double mapping_norm = step_l * (x - next).norm();
    stats.iterations = it;
    stats.final_gradient_mapping_norm = mapping_norm;
    // ||x - x*|| <= 2 ||G(x)|| / mu for a mu-strongly convex model.
    if (2.0 * mapping_norm <= mu * tolerance) return x;
    if (it == options.max_iterations) break;
    const double next_value = s.model_value(next);
    if (next_value > value + 1e-14 * (1.0 + std::abs(value))) stats.monotone = false;
    value = next_value;
    x = std::move(next);
  }
  throw ConvergenceError("projected gradient reached the iteration cap", stats.final_gradient_mapping_norm);
}

Vector solve(const SubproblemSpec& s, double tolerance) {
  if (auto* o = std::get_if<WeightedAbs>(s.objective)) return solve_weighted_abs(*o, s);
  if (std::holds_alternative<ZeroObjective>(*s.objective)) return solve_zero(s);
  if (auto* o = std::get_if<LinearMinusLog>(s.objective)) {
    if (!(s.quad_weight > 0.0)) {
      if (o->weight != 0.0) throw ConfigError("linear_minus_log subproblem needs a positive quadratic weight");
      Vector x(s.linear.size());
      for (Eigen::Index j = 0; j < x.size(); ++j)
        x[j] = minimize_scalar_quadratic(0.0, o->linear[j] + s.linear[j], s.box->lower[j], s.box->upper[j], s.quad_center[j]);
      return x;
    }
    return solve_linear_minus_log(*o, s.linear, s.quad_weight, s.quad_center, *s.box);
  }
  const auto& quad = std::get<ConvexQuadratic>(*s.objective);
  if (is_diagonal(quad.hessian)) return solve_diagonal_quadratic(quad, s);
  return projected_gradient_solve(s, tolerance);
}

}  // namespace egap
