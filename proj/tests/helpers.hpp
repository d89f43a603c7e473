#pragma once

#include <Eigen/SVD>
#include <cmath>
#include <random>
#include <vector>

#include "egap/generators.hpp"
#include "egap/problem.hpp"

namespace egap::test {

/// Scalar weighted-abs components coupled by sum x_i = b, prox centers at box centers.
inline SeparableProblem scalar_abs_problem(const std::vector<double>& weights, const std::vector<double>& anchors, double lo, double hi,
                                           double b, CouplingKind kind = CouplingKind::equality) {
  std::vector<ComponentSpec> comps;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    ComponentSpec c;
    c.objective = WeightedAbs{Vector::Constant(1, weights[i]), Vector::Constant(1, anchors[i])};
    c.box = {Vector::Constant(1, lo), Vector::Constant(1, hi)};
    c.block = CouplingBlock::identity(1);
    c.prox.center = c.box.center();
    comps.push_back(std::move(c));
  }
  return SeparableProblem(std::move(comps), Vector::Constant(1, b), kind);
}

/// Zero objectives on boxes [lo, hi]^n with dense blocks.
inline SeparableProblem zero_problem(const std::vector<Matrix>& blocks, const std::vector<std::pair<double, double>>& boxes, Vector b) {
  std::vector<ComponentSpec> comps;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    ComponentSpec c;
    c.objective = ZeroObjective{};
    const Eigen::Index n = blocks[i].cols();
    c.box = {Vector::Constant(n, boxes[i].first), Vector::Constant(n, boxes[i].second)};
    c.block = CouplingBlock::dense(blocks[i]);
    c.prox.center = c.box.center();
    c.gradient_lipschitz = 0.0;
    comps.push_back(std::move(c));
  }
  return SeparableProblem(std::move(comps), std::move(b));
}

/// Example-1 truncated to its first two components with x1 + x2 = 3.
inline SeparableProblem example1_truncated() { return scalar_abs_problem({1.0, 2.0}, {1.0, 2.0}, -5.0, 7.0, 3.0); }

inline Vector random_vector(std::mt19937_64& gen, Eigen::Index n, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vector v(n);
  for (auto& x : v) x = u(gen);
  return v;
}

inline Matrix random_matrix(std::mt19937_64& gen, Eigen::Index r, Eigen::Index c) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix m(r, c);
  for (Eigen::Index j = 0; j < c; ++j)
    for (Eigen::Index i = 0; i < r; ++i) m(i, j) = u(gen);
  return m;
}

inline double svd_norm(const Matrix& a) { return Eigen::JacobiSVD<Matrix>(a).singularValues()(0); }

inline Primal random_box_point(std::mt19937_64& gen, const SeparableProblem& p) {
  Primal x;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& c : p.components()) {
    Vector v(c.size());
    for (Eigen::Index j = 0; j < v.size(); ++j) v[j] = c.box.lower[j] + u(gen) * (c.box.upper[j] - c.box.lower[j]);
    x.push_back(v);
  }
  return x;
}

}  // namespace egap::test
