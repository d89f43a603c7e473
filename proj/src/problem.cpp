#include "egap/problem.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace egap {

namespace {

using VE = ValidationError;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool all_finite(const Vector& v) { return v.allFinite(); }

void validate_objective(const ObjectiveOracle& objective, const Box& box, std::size_t i) {
  const Eigen::Index n = box.size();
  auto fail = [&](const std::string& what) { throw VE(VE::Kind::invalid_objective, i, what); };
  auto dims = [&](const std::string& what) { throw VE(VE::Kind::dimension_mismatch, i, what); };
  std::visit(overloaded{
                 [&](const WeightedAbs& o) {
                   if (o.weights.size() != n || o.anchors.size() != n) dims("weighted_abs parameter length differs from box");
                   if ((o.weights.array() < 0.0).any()) fail("weighted_abs weights must be nonnegative");
                 },
                 [&](const LinearMinusLog& o) {
                   if (o.linear.size() != n || o.log_coeffs.size() != n) dims("linear_minus_log parameter length differs from box");
                   if (o.weight < 0.0) fail("linear_minus_log weight must be nonnegative");
                   if ((o.log_coeffs.array() < 0.0).any()) fail("linear_minus_log log coefficients must be nonnegative");
                   if (1.0 + o.log_coeffs.dot(box.lower) <= 0.0) fail("1 + b'x must stay positive on the box");
                 },
                 [&](const ConvexQuadratic& o) {
                   if (o.hessian.rows() != n || o.hessian.cols() != n || o.linear.size() != n)
                     dims("convex_quadratic parameter size differs from box");
                   const double scale = std::max(1.0, o.hessian.cwiseAbs().maxCoeff());
                   if ((o.hessian - o.hessian.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
                     fail("convex_quadratic hessian must be symmetric");
                   if (n > 0) {
                     Eigen::SelfAdjointEigenSolver<Matrix> eig(o.hessian, Eigen::EigenvaluesOnly);
                     if (eig.eigenvalues().minCoeff() < -1e-10 * scale) fail("convex_quadratic hessian must be positive semidefinite");
                   }
                 },
                 [](const ZeroObjective&) {},
             },
             objective);
}

}  // namespace

// ---------------------------------------------------------------------------

double objective_value(const ObjectiveOracle& objective, const Vector& x) {
  return std::visit(overloaded{
                        [&](const WeightedAbs& o) { return o.weights.dot((x - o.anchors).cwiseAbs()); },
                        [&](const LinearMinusLog& o) {
                          const double arg = 1.0 + o.log_coeffs.dot(x);
                          if (o.weight != 0.0 && !(arg > 0.0)) throw DomainError("linear_minus_log: 1 + b'x <= 0");
                          return o.linear.dot(x) - (o.weight == 0.0 ? 0.0 : o.weight * std::log(arg));
                        },
                        [&](const ConvexQuadratic& o) { return 0.5 * x.dot(o.hessian * x) + o.linear.dot(x); },
                        [](const ZeroObjective&) { return 0.0; },
                    },
                    objective);
}

Vector objective_gradient(const ObjectiveOracle& objective, const Vector& x) {
  return std::visit(overloaded{
                        [&](const WeightedAbs&) -> Vector { throw ConfigError("weighted_abs objective is not differentiable"); },
                        [&](const LinearMinusLog& o) -> Vector {
                          const double arg = 1.0 + o.log_coeffs.dot(x);
                          if (o.weight != 0.0 && !(arg > 0.0)) throw DomainError("linear_minus_log: 1 + b'x <= 0");
                          return o.linear - (o.weight / arg) * o.log_coeffs;
                        },
                        [&](const ConvexQuadratic& o) -> Vector { return o.hessian * x + o.linear; },
                        [&](const ZeroObjective&) -> Vector { return Vector::Zero(x.size()); },
                    },
                    objective);
}

bool is_differentiable(const ObjectiveOracle& objective) { return !std::holds_alternative<WeightedAbs>(objective); }

bool Box::contains(const Vector& x, double slack) const {
  return x.size() == lower.size() && (x.array() >= lower.array() - slack).all() && (x.array() <= upper.array() + slack).all();
}

void CouplingBlock::apply_add(const Vector& x, Vector& out) const {
  if (dense_)
    out.noalias() += *dense_ * x;
  else
    out += x;
}

Vector CouplingBlock::apply_transpose(const Vector& y) const {
  if (dense_) return dense_->transpose() * y;
  return y;
}

Matrix CouplingBlock::to_dense() const {
  if (dense_) return *dense_;
  return Matrix::Identity(n_, n_);
}

// ---------------------------------------------------------------------------

SeparableProblem::SeparableProblem(std::vector<ComponentSpec> components, Vector rhs, CouplingKind kind)
    : components_(std::move(components)), rhs_(std::move(rhs)), kind_(kind) {
  if (components_.empty()) throw VE(VE::Kind::dimension_mismatch, std::nullopt, "problem needs at least one component");
  if (!all_finite(rhs_)) throw VE(VE::Kind::malformed_document, std::nullopt, "right-hand side must be finite");
  const Eigen::Index m = rhs_.size();
  for (std::size_t i = 0; i < components_.size(); ++i) {
    auto& c = components_[i];
    const Eigen::Index n = c.box.lower.size();
    if (c.box.upper.size() != n) throw VE(VE::Kind::dimension_mismatch, i, "box bounds differ in length");
    if (n == 0) throw VE(VE::Kind::dimension_mismatch, i, "component has no variables");
    if (!all_finite(c.box.lower) || !all_finite(c.box.upper)) throw VE(VE::Kind::unbounded_box, i, "box bounds must be finite");
    if ((c.box.lower.array() > c.box.upper.array()).any()) throw VE(VE::Kind::unbounded_box, i, "lower bound exceeds upper bound");
    if (c.block.rows() != m) {
      throw VE(VE::Kind::dimension_mismatch, i,
               "coupling block has " + std::to_string(c.block.rows()) + " rows, b has " + std::to_string(m));
    }
    if (c.block.cols() != n) throw VE(VE::Kind::dimension_mismatch, i, "coupling block column count differs from box");
    if (!(c.prox.rho > 0.0) || !std::isfinite(c.prox.rho)) throw VE(VE::Kind::nonpositive_prox_scale, i, "prox scale must be positive");
    if (c.prox.center.size() == 0) c.prox.center = c.box.center();
    if (c.prox.center.size() != n) throw VE(VE::Kind::dimension_mismatch, i, "prox center length differs from box");
    if (!c.box.contains(c.prox.center)) throw VE(VE::Kind::malformed_document, i, "prox center must lie in the box");
    if (!(c.sigma_phi >= 0.0)) throw VE(VE::Kind::invalid_objective, i, "sigma_phi must be nonnegative");
    validate_objective(c.objective, c.box, i);
    if (c.gradient_lipschitz) {
      if (!(*c.gradient_lipschitz >= 0.0)) throw VE(VE::Kind::invalid_objective, i, "gradient Lipschitz constant must be nonnegative");
      if (!is_differentiable(c.objective))
        throw VE(VE::Kind::invalid_objective, i, "gradient Lipschitz constant given for a nonsmooth objective");
    }
    num_vars_ += n;
  }
}

Primal SeparableProblem::prox_centers() const {
  Primal x;
  x.reserve(components_.size());
  for (const auto& c : components_) x.push_back(c.prox.center);
  return x;
}

Primal SeparableProblem::zeros() const {
  Primal x;
  x.reserve(components_.size());
  for (const auto& c : components_) x.push_back(Vector::Zero(c.size()));
  return x;
}

SeparableProblem add_slack_component(const SeparableProblem& problem, bool* warning) {
  if (warning) *warning = false;
  if (problem.coupling_kind() == CouplingKind::equality) {
    if (warning) *warning = true;
    return problem;
  }
  const Eigen::Index m = problem.num_rows();
  // Smallest value each row of sum A_i x_i can take over the boxes.
  Vector row_min = Vector::Zero(m);
  for (const auto& c : problem.components()) {
    const Matrix a = c.block.to_dense();
    for (Eigen::Index r = 0; r < m; ++r)
      for (Eigen::Index j = 0; j < a.cols(); ++j) row_min[r] += std::min(a(r, j) * c.box.lower[j], a(r, j) * c.box.upper[j]);
  }
  ComponentSpec slack;
  slack.objective = ZeroObjective{};
  slack.box.lower = Vector::Zero(m);
  slack.box.upper = (problem.rhs() - row_min).cwiseMax(0.0);
  slack.block = CouplingBlock::identity(m);
  slack.prox.center = slack.box.center();
  slack.prox.rho = 1.0;
  slack.gradient_lipschitz = 0.0;

  auto components = problem.components();
  components.push_back(std::move(slack));
  return SeparableProblem(std::move(components), problem.rhs(), CouplingKind::equality);
}

double objective_value(const SeparableProblem& problem, const Primal& x) {
  double total = 0.0;
  for (std::size_t i = 0; i < problem.num_components(); ++i) total += objective_value(problem.component(i).objective, x[i]);
  return total;
}

Vector residual(const SeparableProblem& problem, const Primal& x) {
  Vector r = -problem.rhs();
  for (std::size_t i = 0; i < problem.num_components(); ++i) problem.component(i).block.apply_add(x[i], r);
  return r;
}

Vector flatten(const Primal& x) {
  Eigen::Index n = 0;
  for (const auto& xi : x) n += xi.size();
  Vector flat(n);
  Eigen::Index offset = 0;
  for (const auto& xi : x) {
    flat.segment(offset, xi.size()) = xi;
    offset += xi.size();
  }
  return flat;
}

Primal unflatten(const SeparableProblem& problem, const Vector& flat) {
  Primal x;
  Eigen::Index offset = 0;
  for (const auto& c : problem.components()) {
    x.push_back(flat.segment(offset, c.size()));
    offset += c.size();
  }
  return x;
}

Matrix assemble_coupling_matrix(const SeparableProblem& problem) {
  Matrix a(problem.num_rows(), problem.num_vars());
  Eigen::Index offset = 0;
  for (const auto& c : problem.components()) {
    a.middleCols(offset, c.size()) = c.block.to_dense();
    offset += c.size();
  }
  return a;
}

// ---------------------------------------------------------------------------

double spectral_norm(const Matrix& a, const PowerIterationOptions& options) {
  if (a.size() == 0) return 0.0;
  const Eigen::Index n = a.cols();
  Vector v(n);
  for (Eigen::Index j = 0; j < n; ++j) v[j] = 1.0 + static_cast<double>(j + 1) / static_cast<double>(n + 1);
  v.normalize();

  double lambda = 0.0;
  for (int it = 0; it < options.max_iterations; ++it) {
    Vector w = a.transpose() * (a * v);
    lambda = v.dot(w);
    const double wn = w.norm();
    if (wn == 0.0) return 0.0;
    const double res = (w - lambda * v).norm();
    if (res <= options.relative_tolerance * lambda) return std::sqrt(lambda);
    v = w / wn;
  }
  throw ConvergenceError("spectral_norm: power iteration did not converge", std::sqrt(std::max(lambda, 0.0)));
}

double spectral_norm(const CouplingBlock& block, const PowerIterationOptions& options) {
  if (block.is_identity()) return 1.0;
  return spectral_norm(block.matrix(), options);
}

double SmoothingConstants::psi_lipschitz(std::size_t i, double beta2) const {
  return static_cast<double>(num_components) * block_norms[i] * block_norms[i] / beta2;
}

double SmoothingConstants::sum_prox_diameters() const {
  return std::accumulate(prox_diameters.begin(), prox_diameters.end(), 0.0);
}

double SmoothingConstants::smooth_dual_lipschitz() const {
  if (!lphi) throw ConfigError("objective not strongly convex");
  return *lphi;
}

SmoothingConstants compute_constants(const SeparableProblem& problem) {
  SmoothingConstants k;
  const std::size_t m = problem.num_components();
  k.num_components = m;
  double max_ratio = 0.0;
  double lphi = 0.0;
  bool strongly_convex = true;
  for (const auto& c : problem.components()) {
    const double norm = spectral_norm(c.block);
    const double sq = norm * norm;
    k.block_norms.push_back(norm);
    k.prox_sigmas.push_back(c.prox.sigma());
    const Vector reach = (c.box.upper - c.prox.center).cwiseMax(c.prox.center - c.box.lower);
    k.prox_diameters.push_back(0.5 * c.prox.rho * reach.squaredNorm());
    max_ratio = std::max(max_ratio, sq / c.prox.sigma());
    k.sum_norm_over_sigma += sq / c.prox.sigma();
    if (c.sigma_phi > 0.0)
      lphi += sq / c.sigma_phi;
    else
      strongly_convex = false;
  }
  k.lbar = static_cast<double>(m) * max_ratio;
  if (strongly_convex) k.lphi = lphi;
  return k;
}

}  // namespace egap
