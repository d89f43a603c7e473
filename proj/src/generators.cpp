#include "egap/generators.hpp"

#include <Eigen/Eigenvalues>
#include <random>
#include <sstream>

#include "egap/errors.hpp"
#include "egap/problem_io.hpp"

namespace egap {

namespace {

// Streams are derived per purpose so that, for instance, the witness points
// do not depend on the objective draws.
constexpr std::uint64_t kObjectiveStream = 0x9e3779b97f4a7c15ull;
constexpr std::uint64_t kWitnessStream = 0xbf58476d1ce4e5b9ull;

Vector uniform_vector(Rng& rng, std::size_t n, double lo, double hi) {
  Vector v(static_cast<Eigen::Index>(n));
  for (auto& x : v) x = rng.uniform(lo, hi);
  return v;
}

Primal witness(std::uint64_t seed, std::size_t m, std::size_t nx, double lo, double hi) {
  Rng rng(seed ^ kWitnessStream);
  Primal t(m);
  for (auto& ti : t) ti = uniform_vector(rng, nx, lo, hi);
  return t;
}

Vector sum_of(const Primal& t) {
  Vector b = Vector::Zero(t.front().size());
  for (const auto& ti : t) b += ti;
  return b;
}

}  // namespace

SeparableProblem generate_example1() {
  std::vector<ComponentSpec> comps;
  for (int i = 1; i <= 5; ++i) {
    ComponentSpec c;
    c.objective = WeightedAbs{Vector::Constant(1, i), Vector::Constant(1, i)};
    c.box = Box{Vector::Constant(1, -5.0), Vector::Constant(1, 7.0)};
    c.block = CouplingBlock::identity(1);
    comps.push_back(std::move(c));
  }
  return SeparableProblem(std::move(comps), Vector::Constant(1, 10.0));
}

Primal allocation_witness(std::uint64_t seed, std::size_t num_components, std::size_t nx) {
  return witness(seed, num_components, nx, 0.1, 0.9);
}

Primal strongly_convex_witness(std::uint64_t seed, std::size_t num_components, std::size_t nx) {
  return witness(seed, num_components, nx, -0.8, 0.8);
}

SeparableProblem generate_random_allocation(std::uint64_t seed, std::size_t num_components, std::size_t nx,
                                            const AllocationOptions& options) {
  if (num_components < 2 || nx < 1) throw ConfigError("random allocation needs M >= 2 and nx >= 1");
  Rng rng(seed ^ kObjectiveStream);
  std::vector<ComponentSpec> comps;
  for (std::size_t i = 0; i < num_components; ++i) {
    LinearMinusLog o;
    o.linear = uniform_vector(rng, nx, 0.0, 5.0);
    o.log_coeffs = uniform_vector(rng, nx, 0.0, 10.0);
    o.weight = rng.uniform(0.0, 5.0);
    if (options.force_zero_weights) o.weight = 0.0;
    ComponentSpec c;
    c.objective = std::move(o);
    c.box = Box{Vector::Zero(static_cast<Eigen::Index>(nx)), Vector::Ones(static_cast<Eigen::Index>(nx))};
    c.block = CouplingBlock::identity(static_cast<Eigen::Index>(nx));
    if (options.force_zero_weights) c.gradient_lipschitz = 0.0;
    comps.push_back(std::move(c));
  }
  return SeparableProblem(std::move(comps), sum_of(allocation_witness(seed, num_components, nx)));
}

SeparableProblem generate_strongly_convex(std::uint64_t seed, std::size_t num_components, std::size_t nx, double sigma_min,
                                          const StronglyConvexOptions& options) {
  if (!(sigma_min > 0.0)) throw ConfigError("strongly convex generator needs sigma_min > 0");
  if (num_components < 1 || nx < 1) throw ConfigError("strongly convex generator needs M >= 1 and nx >= 1");
  const auto n = static_cast<Eigen::Index>(nx);
  Rng rng(seed ^ kObjectiveStream);
  std::vector<ComponentSpec> comps;
  for (std::size_t i = 0; i < num_components; ++i) {
    ConvexQuadratic o;
    if (options.identity_hessian) {
      o.hessian = Matrix::Identity(n, n);
      o.linear = Vector::Zero(n);
    } else {
      const Vector d = uniform_vector(rng, nx, sigma_min, sigma_min + 2.0);
      const Vector u = uniform_vector(rng, nx, -0.5, 0.5);
      o.hessian = Matrix(d.asDiagonal()) + u * u.transpose();
      o.linear = uniform_vector(rng, nx, -1.0, 1.0);
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(o.hessian, Eigen::EigenvaluesOnly);
    ComponentSpec c;
    c.sigma_phi = eig.eigenvalues()(0);
    c.objective = std::move(o);
    c.box = Box{Vector::Constant(n, -1.0), Vector::Constant(n, 1.0)};
    c.block = CouplingBlock::identity(n);
    comps.push_back(std::move(c));
  }
  return SeparableProblem(std::move(comps), sum_of(strongly_convex_witness(seed, num_components, nx)));
}

std::vector<FamilyMember> desk_family(std::size_t count) {
  static const std::size_t sizes[3] = {10, 50, 200};
  static const std::size_t widths[2] = {5, 20};
  std::vector<FamilyMember> out;
  for (std::size_t j = 0; j < count; ++j) {
    FamilyMember f;
    f.seed = j + 1;
    f.num_components = sizes[j % 3];
    f.nx = widths[(j / 3) % 2];
    f.name = "gen:alloc:" + std::to_string(f.seed) + ":" + std::to_string(f.num_components) + ":" + std::to_string(f.nx);
    out.push_back(f);
  }
  return out;
}

SeparableProblem load_problem_source(const std::string& source, std::uint64_t* seed) {
  if (seed) *seed = 0;
  if (source == "gen:example1") return generate_example1();
  if (source.rfind("gen:", 0) == 0) {
    std::vector<std::string> parts;
    std::stringstream ss(source);
    std::string part;
    while (std::getline(ss, part, ':')) parts.push_back(part);
    if (parts.size() != 5 || (parts[1] != "alloc" && parts[1] != "sconvex"))
      throw ConfigError("unknown generator '" + source + "'; expected gen:example1, gen:alloc:SEED:M:NX or gen:sconvex:SEED:M:NX");
    std::uint64_t s = 0;
    std::size_t m = 0, nx = 0;
    try {
      s = std::stoull(parts[2]);
      m = std::stoul(parts[3]);
      nx = std::stoul(parts[4]);
    } catch (const std::exception&) {
      throw ConfigError("malformed generator arguments in '" + source + "'");
    }
    if (seed) *seed = s;
    if (parts[1] == "alloc") return generate_random_allocation(s, m, nx);
    return generate_strongly_convex(s, m, nx, 0.5);
  }
  return load_problem(source);
}

}  // namespace egap
