#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "egap/errors.hpp"

namespace egap {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// A point of the full primal space, stored block by block (one entry per component).
using Primal = std::vector<Vector>;

// ---------------------------------------------------------------------------
// Objective oracles
// ---------------------------------------------------------------------------

/// phi(x) = sum_j w_j |x_j - a_j|
struct WeightedAbs {
  Vector weights;
  Vector anchors;
};

/// phi(x) = a'x - w ln(1 + b'x), with b >= 0.
struct LinearMinusLog {
  Vector linear;
  double weight = 0.0;
  Vector log_coeffs;
};

/// phi(x) = 0.5 x'Qx + q'x, Q symmetric positive semidefinite.
struct ConvexQuadratic {
  Matrix hessian;
  Vector linear;
};

struct ZeroObjective {};

using ObjectiveOracle = std::variant<WeightedAbs, LinearMinusLog, ConvexQuadratic, ZeroObjective>;

double objective_value(const ObjectiveOracle& objective, const Vector& x);

/// Gradient of a differentiable objective. Throws ConfigError for weighted_abs.
Vector objective_gradient(const ObjectiveOracle& objective, const Vector& x);

bool is_differentiable(const ObjectiveOracle& objective);

// ---------------------------------------------------------------------------
// Components
// ---------------------------------------------------------------------------

struct Box {
  Vector lower;
  Vector upper;

  Eigen::Index size() const { return lower.size(); }
  Vector center() const { return 0.5 * (lower + upper); }
  Vector clamp(const Vector& x) const { return x.cwiseMax(lower).cwiseMin(upper); }
  bool contains(const Vector& x, double slack = 0.0) const;
};

/// Coupling block A_i. An empty `dense` means the identity tag.
class CouplingBlock {
 public:
  static CouplingBlock identity(Eigen::Index n) { return CouplingBlock(n); }
  static CouplingBlock dense(Matrix a) { return CouplingBlock(std::move(a)); }

  bool is_identity() const { return !dense_.has_value(); }
  Eigen::Index rows() const { return dense_ ? dense_->rows() : n_; }
  Eigen::Index cols() const { return dense_ ? dense_->cols() : n_; }
  const Matrix& matrix() const { return *dense_; }

  /// out += A x
  void apply_add(const Vector& x, Vector& out) const;
  /// A' y
  Vector apply_transpose(const Vector& y) const;
  Matrix to_dense() const;

 private:
  explicit CouplingBlock(Eigen::Index n) : n_(n) {}
  explicit CouplingBlock(Matrix a) : n_(a.cols()), dense_(std::move(a)) {}

  Eigen::Index n_ = 0;
  std::optional<Matrix> dense_;
};

/// p(x) = (rho/2) ||x - center||^2, strongly convex with sigma = rho.
struct ProxFunction {
  Vector center;
  double rho = 1.0;

  double sigma() const { return rho; }
  double value(const Vector& x) const { return 0.5 * rho * (x - center).squaredNorm(); }
};

struct ComponentSpec {
  ObjectiveOracle objective;
  Box box;
  CouplingBlock block = CouplingBlock::identity(0);
  ProxFunction prox;
  double sigma_phi = 0.0;
  std::optional<double> gradient_lipschitz;

  Eigen::Index size() const { return box.size(); }
};

enum class CouplingKind { equality, inequality };

/// min sum_i phi_i(x_i)  s.t.  sum_i A_i x_i = b (or <= b),  x_i in box_i.
/// Immutable once validated; safe to share between workers.
class SeparableProblem {
 public:
  /// Validates and takes ownership. Throws ValidationError naming the component.
  SeparableProblem(std::vector<ComponentSpec> components, Vector rhs, CouplingKind kind = CouplingKind::equality);

  std::size_t num_components() const { return components_.size(); }
  Eigen::Index num_rows() const { return rhs_.size(); }
  Eigen::Index num_vars() const { return num_vars_; }
  CouplingKind coupling_kind() const { return kind_; }

  const ComponentSpec& component(std::size_t i) const { return components_[i]; }
  const std::vector<ComponentSpec>& components() const { return components_; }
  const Vector& rhs() const { return rhs_; }

  Primal prox_centers() const;
  Primal zeros() const;

 private:
  std::vector<ComponentSpec> components_;
  Vector rhs_;
  CouplingKind kind_;
  Eigen::Index num_vars_ = 0;
};

/// Turns sum A_i x_i <= b into an equality by appending a zero-cost slack component.
/// On an equality problem this is a no-op; `warning` is set when provided.
SeparableProblem add_slack_component(const SeparableProblem& problem, bool* warning = nullptr);

double objective_value(const SeparableProblem& problem, const Primal& x);

/// A x - b accumulated block by block in component order.
Vector residual(const SeparableProblem& problem, const Primal& x);

Vector flatten(const Primal& x);
Primal unflatten(const SeparableProblem& problem, const Vector& flat);
Matrix assemble_coupling_matrix(const SeparableProblem& problem);

struct PowerIterationOptions {
  double relative_tolerance = 1e-10;
  int max_iterations = 10000;
};

/// ||A||_2 by power iteration on A'A. The identity tag returns exactly 1.
double spectral_norm(const CouplingBlock& block, const PowerIterationOptions& options = {});
double spectral_norm(const Matrix& a, const PowerIterationOptions& options = {});

// ---------------------------------------------------------------------------
// Structural constants
// ---------------------------------------------------------------------------

class SmoothingConstants {
 public:
  std::vector<double> block_norms;     // ||A_i||
  std::vector<double> prox_diameters;  // D_i = max_{x in X_i} p_i(x)
  std::vector<double> prox_sigmas;     // sigma_i
  double lbar = 0.0;                   // M max_i ||A_i||^2 / sigma_i
  double sum_norm_over_sigma = 0.0;    // sum_i ||A_i||^2 / sigma_i
  std::optional<double> lphi;          // sum_i ||A_i||^2 / sigma_phi_i, strongly convex case only
  std::size_t num_components = 0;

  double dual_lipschitz(double beta1) const { return sum_norm_over_sigma / beta1; }
  double psi_lipschitz(std::size_t i, double beta2) const;
  double sum_prox_diameters() const;
  /// Throws ConfigError("objective not strongly convex") when unavailable.
  double smooth_dual_lipschitz() const;
};

SmoothingConstants compute_constants(const SeparableProblem& problem);

}  // namespace egap
