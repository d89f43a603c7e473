#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "egap/problem.hpp"

namespace egap {

/// std::mt19937_64 with uniforms built from the top 53 bits: u = (x >> 11) * 2^-53.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

 private:
  std::mt19937_64 engine_;
};

/// M = 5 scalar components, phi_i(x) = i |x - i| on [-5, 7], sum x_i = 10.
SeparableProblem generate_example1();

struct AllocationOptions {
  bool force_zero_weights = false;  // w_i = 0: linear objectives with L_phi_i = 0
};

/// phi_i(x) = a_i'x - w_i ln(1 + b_i'x) on [0,1]^nx with a in [0,5], b in [0,10],
/// w in [0,5]; sum_i x_i = sum_i t_i for interior points t_i in (0.1, 0.9)^nx.
SeparableProblem generate_random_allocation(std::uint64_t seed, std::size_t num_components, std::size_t nx,
                                            const AllocationOptions& options = {});

struct StronglyConvexOptions {
  bool identity_hessian = false;  // Q_i = I, q_i = 0
};

/// phi_i(x) = x'Q_i x/2 + q_i'x on [-1,1]^nx with Q_i = diag(d) + u u', d >= sigma_min;
/// sigma_phi_i is the smallest eigenvalue of Q_i. sum_i x_i = sum_i t_i, t_i in (-0.8, 0.8)^nx.
SeparableProblem generate_strongly_convex(std::uint64_t seed, std::size_t num_components, std::size_t nx, double sigma_min,
                                          const StronglyConvexOptions& options = {});

/// Interior points t_i used to build b; generate_* derive b from exactly these.
Primal allocation_witness(std::uint64_t seed, std::size_t num_components, std::size_t nx);
Primal strongly_convex_witness(std::uint64_t seed, std::size_t num_components, std::size_t nx);

struct FamilyMember {
  std::string name;  // gen:alloc:SEED:M:NX
  std::uint64_t seed = 0;
  std::size_t num_components = 0;
  std::size_t nx = 0;
};

/// Desk-scale random allocation family: seeds 1..count cycling over
/// M in {10, 50, 200} x nx in {5, 20}.
std::vector<FamilyMember> desk_family(std::size_t count = 10);

/// Resolves gen:example1, gen:alloc:SEED:M:NX, gen:sconvex:SEED:M:NX or a JSON file path.
/// `seed` receives the generator seed (0 for files and example1).
SeparableProblem load_problem_source(const std::string& source, std::uint64_t* seed = nullptr);

}  // namespace egap
