#include "egap/reference.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>

#include "egap/errors.hpp"
#include "egap/generators.hpp"

namespace egap {

namespace {

struct Certificate {
  double feasibility = std::numeric_limits<double>::infinity();
  double gap = std::numeric_limits<double>::infinity();
  double worst() const { return std::max(feasibility, gap); }
};

Certificate certify(const SeparableProblem& problem, const Primal& x, const Vector& y, const KernelOptions& options) {
  Certificate c;
  c.feasibility = residual(problem, x).norm();
  c.gap = std::abs(objective_value(problem, x) - dual_function(problem, y, options).value);
  return c;
}

ReferenceSolution finish(const SeparableProblem& problem, Primal x, Vector y, const Certificate& c, const char* method) {
  ReferenceSolution out;
  out.phi_star = objective_value(problem, x);
  out.x_star = std::move(x);
  out.y_star = std::move(y);
  out.certified_tolerance = c.worst();
  out.method = method;
  return out;
}

bool all_strongly_convex(const SeparableProblem& problem) {
  for (const auto& c : problem.components())
    if (!(c.sigma_phi > 0.0)) return false;
  return true;
}

ReferenceSolution solve_scalar_coupling(const SeparableProblem& problem, double tol, const KernelOptions& options) {
  auto grad = [&](double y, Primal* x) {
    SmoothedDualEval e = smoothed_dual(problem, Vector::Constant(1, y), kNonsmoothDualProxy, options);
    if (x) *x = std::move(e.minimizers);
    return e.gradient[0];
  };

  // The gradient of a concave function of one variable is nonincreasing.
  double lo = -1.0, hi = 1.0;
  int expansions = 0;
  while (grad(lo, nullptr) < 0.0) {
    lo *= 2.0;
    if (++expansions > 200) throw ConvergenceError("no dual bracket: the coupling constraint is infeasible", lo);
  }
  expansions = 0;
  while (grad(hi, nullptr) > 0.0) {
    hi *= 2.0;
    if (++expansions > 200) throw ConvergenceError("no dual bracket: the coupling constraint is infeasible", hi);
  }
  for (int it = 0; it < 300; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double g = grad(mid, nullptr);
    if (g == 0.0) {
      lo = hi = mid;
      break;
    }
    (g > 0.0 ? lo : hi) = mid;
  }

  Primal x_lo, x_hi;
  const double g_lo = grad(lo, &x_lo);
  const double g_hi = grad(hi, &x_hi);
  // theta g_lo + (1 - theta) g_hi = 0 makes the combination feasible.
  const double theta = (g_lo - g_hi) > 0.0 ? -g_hi / (g_lo - g_hi) : 1.0;
  Primal x(x_lo.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = theta * x_lo[i] + (1.0 - theta) * x_hi[i];
  const Vector y = Vector::Constant(1, theta * lo + (1.0 - theta) * hi);

  const Certificate c = certify(problem, x, y, options);
  if (c.worst() > tol) throw ConvergenceError("scalar dual bisection could not certify the reference", c.worst());
  return finish(problem, std::move(x), y, c, "bisection");
}

// Restarted accelerated ascent on y -> d(y; beta). Returns the last iterate
// and its minimizers once ||grad|| <= target or the budget is exhausted.
struct AscentResult {
  Vector y;
  Primal x;
  double grad_norm = 0.0;
};

AscentResult accelerated_ascent(const SeparableProblem& problem, double beta, double lipschitz, Vector y0, double target, long budget,
                                const KernelOptions& options) {
  Vector y_prev = y0;
  Vector z = std::move(y0);
  double t = 1.0;
  AscentResult best;
  best.grad_norm = std::numeric_limits<double>::infinity();
  for (long it = 0; it < budget; ++it) {
    SmoothedDualEval e = smoothed_dual(problem, z, beta, options);
    const double gn = e.gradient.norm();
    if (gn < best.grad_norm) {
      best.grad_norm = gn;
      best.y = z;
      best.x = e.minimizers;
    }
    if (gn <= target) break;
    const Vector y_next = z + e.gradient / lipschitz;
    double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    if (e.gradient.dot(y_next - y_prev) < 0.0) {
      z = y_next;
      t_next = 1.0;
    } else {
      z = y_next + ((t - 1.0) / t_next) * (y_next - y_prev);
    }
    y_prev = y_next;
    t = t_next;
  }
  return best;
}

ReferenceSolution solve_strongly_convex(const SeparableProblem& problem, double tol, const KernelOptions& options) {
  const SmoothingConstants constants = compute_constants(problem);
  const double lipschitz = constants.smooth_dual_lipschitz();
  Vector y = Vector::Zero(problem.num_rows());
  Certificate c;
  double target = 0.1 * tol;
  for (int round = 0; round < 6; ++round) {
    AscentResult r = accelerated_ascent(problem, 0.0, lipschitz, y, target / (1.0 + y.norm()), 200000, options);
    y = r.y;
    c = certify(problem, r.x, r.y, options);
    if (c.worst() <= tol) return finish(problem, std::move(r.x), std::move(r.y), c, "accelerated_dual");
    target *= 0.1;
  }
  throw ConvergenceError("accelerated dual ascent could not certify the reference", c.worst());
}

ReferenceSolution solve_by_continuation(const SeparableProblem& problem, double tol, const KernelOptions& options) {
  const SmoothingConstants constants = compute_constants(problem);
  Vector y = Vector::Zero(problem.num_rows());
  Certificate best;
  for (double beta = 1e-2; beta >= 1e-10; beta *= 0.1) {
    AscentResult r = accelerated_ascent(problem, beta, constants.dual_lipschitz(beta), y, 0.1 * tol, 50000, options);
    y = r.y;
    const Certificate c = certify(problem, r.x, r.y, options);
    if (c.worst() <= tol) return finish(problem, std::move(r.x), std::move(r.y), c, "continuation");
    if (c.worst() < best.worst()) best = c;
  }
  throw ConvergenceError("smoothed dual continuation could not certify the reference", best.worst());
}

}  // namespace

ReferenceSolution reference_solve(const SeparableProblem& problem, double tol, const KernelOptions& options) {
  if (problem.num_rows() == 1) return solve_scalar_coupling(problem, tol, options);
  if (all_strongly_convex(problem)) return solve_strongly_convex(problem, tol, options);
  return solve_by_continuation(problem, tol, options);
}

BruteForceResult brute_force_tiny(const SeparableProblem& problem, double grid_step) {
  const Eigen::Index n = problem.num_vars();
  if (n > 4) throw ConfigError("brute_force_tiny handles at most 4 variables");
  if (!(grid_step > 0.0)) throw ConfigError("grid_step must be positive");

  Vector lower(n), upper(n);
  {
    Eigen::Index j = 0;
    for (const auto& c : problem.components()) {
      lower.segment(j, c.size()) = c.box.lower;
      upper.segment(j, c.size()) = c.box.upper;
      j += c.size();
    }
  }
  std::vector<std::vector<double>> axes(static_cast<std::size_t>(n));
  double total = 1.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    auto& axis = axes[static_cast<std::size_t>(j)];
    for (long t = 0;; ++t) {
      const double v = lower[j] + static_cast<double>(t) * grid_step;
      if (v > upper[j] - 1e-12 * grid_step) break;
      axis.push_back(v);
    }
    axis.push_back(upper[j]);
    total *= static_cast<double>(axis.size());
  }
  if (total > 5e7) throw ConfigError("grid too fine for brute_force_tiny");

  const Matrix a = assemble_coupling_matrix(problem);
  const Vector& b = problem.rhs();
  const double residual_tol = grid_step * static_cast<double>(n);
  auto phi_at = [&](const Vector& flat) { return objective_value(problem, unflatten(problem, flat)); };

  BruteForceResult out;
  Vector best;
  double best_phi = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
  Vector x(n);
  for (;;) {
    for (Eigen::Index j = 0; j < n; ++j) x[j] = axes[static_cast<std::size_t>(j)][idx[static_cast<std::size_t>(j)]];
    ++out.grid_points;
    if ((a * x - b).norm() <= residual_tol) {
      ++out.feasible_points;
      const double v = phi_at(x);
      if (v < best_phi) {
        best_phi = v;
        best = x;
      }
    }
    std::size_t j = 0;
    while (j < idx.size() && ++idx[j] == axes[j].size()) idx[j++] = 0;
    if (j == idx.size()) break;
  }
  if (out.feasible_points == 0) throw ConvergenceError("no near-feasible grid point", residual_tol);

  // Polish: move onto A x = b inside the box by alternating projections, then
  // pattern search along null-space directions of A.
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const double cutoff = 1e-12 * std::max(1.0, svd.singularValues().size() ? svd.singularValues()(0) : 1.0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > cutoff) ++rank;
  const Matrix null_basis = svd.matrixV().rightCols(n - rank);
  const Matrix pinv = a.completeOrthogonalDecomposition().pseudoInverse();

  Vector y = best;
  for (int it = 0; it < 2000; ++it) {
    y = y - pinv * (a * y - b);
    const Vector clipped = y.cwiseMax(lower).cwiseMin(upper);
    if ((clipped - y).norm() <= 1e-15) break;
    y = clipped;
  }
  const bool on_affine_set = (a * y - b).norm() <= 1e-10 * (1.0 + b.norm()) &&
                             (y.array() >= lower.array() - 1e-12).all() && (y.array() <= upper.array() + 1e-12).all();
  if (on_affine_set && null_basis.cols() > 0) {
    std::vector<Vector> dirs;
    for (Eigen::Index i = 0; i < null_basis.cols(); ++i) {
      dirs.push_back(null_basis.col(i));
      for (Eigen::Index k = i + 1; k < null_basis.cols(); ++k) {
        dirs.push_back((null_basis.col(i) + null_basis.col(k)).normalized());
        dirs.push_back((null_basis.col(i) - null_basis.col(k)).normalized());
      }
    }
    Rng rng(0x5eed);
    for (int r = 0; r < 8 && null_basis.cols() > 1; ++r) {
      Vector coeff(null_basis.cols());
      for (auto& c : coeff) c = rng.uniform(-1.0, 1.0);
      dirs.push_back((null_basis * coeff).normalized());
    }
    double value = phi_at(y);
    for (double h = grid_step; h > 1e-12; h *= 0.5) {
      bool improved = true;
      while (improved) {
        improved = false;
        for (const auto& d : dirs) {
          for (double sign : {1.0, -1.0}) {
            const Vector trial = y + sign * h * d;
            if ((trial.array() < lower.array()).any() || (trial.array() > upper.array()).any()) continue;
            const double v = phi_at(trial);
            if (v < value - 1e-15 * (1.0 + std::abs(value))) {
              value = v;
              y = trial;
              improved = true;
            }
          }
        }
      }
    }
    best = y;
    best_phi = value;
  } else if (on_affine_set) {
    best = y;
    best_phi = phi_at(y);
  }
  out.x_star = unflatten(problem, best);
  out.phi_star = best_phi;
  return out;
}

}  // namespace egap
