#pragma once

#include <string>

#include "egap/problem.hpp"
#include "egap/smoothing.hpp"

namespace egap {

/// Independent high-accuracy solution used to build bound constants in tests.
struct ReferenceSolution {
  Primal x_star;
  Vector y_star;
  double phi_star = 0.0;
  double certified_tolerance = 0.0;  // max of ||A x* - b|| and |phi(x*) - d(y*)|
  std::string method;                // "bisection", "accelerated_dual" or "continuation"
};

/// Scalar coupling (m = 1): bisection on the sign of the dual gradient, then an
/// exact convex combination of the bracketing minimizers. Strongly convex
/// objectives: restarted accelerated ascent on the exact dual. Otherwise:
/// accelerated ascent on d(.;beta) for decreasing beta. Throws ConvergenceError
/// when the certificate cannot reach `tol`.
ReferenceSolution reference_solve(const SeparableProblem& problem, double tol = 1e-7, const KernelOptions& options = {});

struct BruteForceResult {
  Primal x_star;
  double phi_star = 0.0;
  std::size_t grid_points = 0;     // points visited
  std::size_t feasible_points = 0; // points within the residual tolerance
};

/// Exhaustive grid over the boxes (n <= 4), keeping points with
/// ||A x - b|| <= grid_step * n, followed by a pattern-search polish on the
/// affine set A x = b. Throws ConvergenceError when no grid point is near-feasible.
BruteForceResult brute_force_tiny(const SeparableProblem& problem, double grid_step);

}  // namespace egap
