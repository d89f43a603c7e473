#include <doctest.h>

#include <Eigen/SVD>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "egap/generators.hpp"
#include "egap/problem_io.hpp"
#include "egap/profile.hpp"
#include "egap/runner.hpp"
#include "egap/trace.hpp"

using namespace egap;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("egap_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("Example-1 generator") {
  const SeparableProblem p = generate_example1();
  CHECK(p.num_components() == 5);
  CHECK(p.num_rows() == 1);
  CHECK(p.rhs()[0] == 10.0);
  const SmoothingConstants c = compute_constants(p);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(p.component(i).box.lower[0] == -5.0);
    CHECK(p.component(i).box.upper[0] == 7.0);
    CHECK(p.component(i).prox.center[0] == 1.0);
    CHECK(c.prox_diameters[i] == 18.0);
  }
  CHECK(c.sum_prox_diameters() == 90.0);
}

TEST_CASE("random allocation generator") {
  CHECK(to_json(generate_random_allocation(42, 10, 5)).dump() == to_json(generate_random_allocation(42, 10, 5)).dump());
  CHECK(to_json(generate_random_allocation(42, 10, 5)).dump() != to_json(generate_random_allocation(43, 10, 5)).dump());

  AllocationOptions zero;
  zero.force_zero_weights = true;
  const SeparableProblem lin = generate_random_allocation(1, 6, 3, zero);
  for (const auto& c : lin.components()) {
    CHECK(std::get<LinearMinusLog>(c.objective).weight == 0.0);
    CHECK(c.gradient_lipschitz == std::optional<double>(0.0));
  }

  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const SeparableProblem p = generate_random_allocation(seed, 7, 4);
    const Primal t = allocation_witness(seed, 7, 4);
    CHECK(residual(p, t).norm() <= 1e-12);
    for (const auto& c : p.components()) {
      const auto& o = std::get<LinearMinusLog>(c.objective);
      CHECK((o.linear.array() >= 0.0).all());
      CHECK((o.linear.array() <= 5.0).all());
      CHECK((o.log_coeffs.array() >= 0.0).all());
      CHECK((o.log_coeffs.array() <= 10.0).all());
      CHECK(o.weight >= 0.0);
      CHECK(o.weight <= 5.0);
    }
  }
}

TEST_CASE("strongly convex generator") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const SeparableProblem p = generate_strongly_convex(seed, 4, 3, 0.5);
    for (const auto& c : p.components()) {
      const Matrix& q = std::get<ConvexQuadratic>(c.objective).hessian;
      // Q is positive definite, so its singular values are its eigenvalues.
      const Vector sv = Eigen::JacobiSVD<Matrix>(q).singularValues();
      CHECK(std::abs(c.sigma_phi - sv[sv.size() - 1]) <= 1e-10);
      CHECK(c.sigma_phi >= 0.5 - 1e-12);
    }
    CHECK(residual(p, strongly_convex_witness(seed, 4, 3)).norm() <= 1e-12);
  }
}

TEST_CASE("problem sources") {
  std::uint64_t seed = 99;
  CHECK(load_problem_source("gen:example1", &seed).num_components() == 5);
  CHECK(seed == 0);
  const SeparableProblem a = load_problem_source("gen:alloc:7:12:3", &seed);
  CHECK(seed == 7);
  CHECK(a.num_components() == 12);
  CHECK(a.num_rows() == 3);
  CHECK(load_problem_source("gen:sconvex:2:4:2").num_components() == 4);
  CHECK_THROWS_AS(load_problem_source("gen:nothing"), Error);
  CHECK_THROWS_AS(load_problem_source("/nonexistent/problem.json"), Error);

  const fs::path dir = scratch_dir("sources");
  const fs::path file = dir / "p.json";
  std::ofstream(file) << to_json(generate_example1()).dump();
  CHECK(to_json(load_problem_source(file.string())) == to_json(generate_example1()));
}

TEST_CASE("desk family") {
  const auto family = desk_family(10);
  REQUIRE(family.size() == 10);
  CHECK(family[0].name == "gen:alloc:1:10:5");
  CHECK(family[2].num_components == 200);
  CHECK(family[3].nx == 20);
  CHECK(family[9].seed == 10);
}

TEST_CASE("performance profile") {
  SUBCASE("identical results jump to 1 at theta = 0") {
    const ProfileTable t = performance_profile({{"p1", "a", 10, 1.0, true}, {"p1", "b", 10, 1.0, true},
                                                {"p2", "a", 20, 2.0, true}, {"p2", "b", 20, 2.0, true}});
    CHECK(t.fraction_within("a", 0.0, ProfileMetric::iterations) == 1.0);
    CHECK(t.fraction_within("b", 0.0, ProfileMetric::time) == 1.0);
  }
  SUBCASE("an algorithm that always fails stays at 0") {
    const ProfileTable t = performance_profile({{"p1", "a", 10, 1.0, true}, {"p1", "b", 10, 1.0, false},
                                                {"p2", "a", 20, 2.0, true}, {"p2", "b", 5, 2.0, false}});
    for (double theta : {0.0, 1.0, 10.0, 1e6}) CHECK(t.fraction_within("b", theta, ProfileMetric::iterations) == 0.0);
  }
  SUBCASE("curves are monotone and end at the success fraction") {
    std::vector<ProfileEntry> entries;
    for (int p = 0; p < 6; ++p) {
      entries.push_back({"p" + std::to_string(p), "a", 10 + p * 7, 1.0 + p, p != 3});
      entries.push_back({"p" + std::to_string(p), "b", 40 - p * 5, 3.0 - 0.4 * p, p % 2 == 0});
    }
    const ProfileTable t = performance_profile(entries);
    for (const std::string a : {"a", "b"}) {
      double last = 0.0;
      for (double theta : t.thetas(ProfileMetric::iterations)) {
        const double v = t.fraction_within(a, theta, ProfileMetric::iterations);
        CHECK(v >= last);
        CHECK(v <= 1.0);
        last = v;
      }
      CHECK(last == doctest::Approx(a == "a" ? 5.0 / 6.0 : 3.0 / 6.0));
    }
    std::ostringstream csv;
    write_profile_csv(csv, t, ProfileMetric::iterations);
    CHECK(csv.str().rfind("theta,a,b\n", 0) == 0);
  }
  CHECK_THROWS_AS(performance_profile({{"p1", "a", 1, 1.0, true}, {"p2", "a", 1, 1.0, true}}), ConfigError);
}

TEST_CASE("trace CSV round trip") {
  ConvergenceTrace t;
  for (long k = 0; k < 3; ++k) {
    TraceRecord r;
    r.k = k;
    r.tau = 0.1 / (k + 1.0);
    r.phi = 1.0 / 3.0 + k;
    r.rdfgap = 1e-300;
    t.records.push_back(r);
  }
  const fs::path dir = scratch_dir("trace");
  write_trace_csv((dir / "t.csv").string(), t);
  const std::string text = slurp(dir / "t.csv");
  CHECK(text.rfind(std::string(kTraceHeader) + "\n", 0) == 0);
  const ConvergenceTrace back = read_trace_csv((dir / "t.csv").string());
  REQUIRE(back.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(back.records[i].k == t.records[i].k);
    CHECK(back.records[i].tau == t.records[i].tau);
    CHECK(back.records[i].phi == t.records[i].phi);
    CHECK(back.records[i].rdfgap == t.records[i].rdfgap);
  }
}

TEST_CASE("manifest parsing") {
  using nlohmann::json;
  const RunManifest m = parse_manifest(json::parse(R"({"problems":["gen:example1"],"desk_family":2,
      "algorithms":["alg1","baseline"],"config":{"max_iter":50,"serial":true},"baseline_target_from":"alg1"})"));
  CHECK(m.problems.size() == 3);
  CHECK(m.algorithms.size() == 2);
  CHECK(m.config.max_iter == 50);
  CHECK(m.config.exec.mode == Execution::Mode::serial);
  CHECK(m.baseline_target_from == Algorithm::alg1);
  CHECK_THROWS_AS(parse_manifest(json::parse(R"({"problems":["gen:example1"],"algorithms":["alg9"]})")), ConfigError);
  CHECK_THROWS_AS(parse_manifest(json::parse(R"({"problems":[],"algorithms":["alg1"]})")), ConfigError);
  CHECK_THROWS_AS(parse_manifest(json::parse(R"({"problems":["gen:example1"],"algorithms":["alg1"],"config":{"max_iter":"x"}})")), ConfigError);
}

TEST_CASE("run_command writes one trace per run and a summary") {
  RunManifest m;
  m.problems = {"gen:example1"};
  m.algorithms = {Algorithm::alg1, Algorithm::alg2, Algorithm::baseline_fixed};
  const fs::path dir = scratch_dir("run");
  CHECK(run_command(m, dir.string()) == 0);
  int csv = 0;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".csv") ++csv;
  CHECK(csv == 3);
  const auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
  REQUIRE(summary.size() == 3);
  for (const auto& s : summary)
    for (const char* key : {"instance", "algorithm", "iterations", "stop_reason", "phi", "feas_norm", "time_ms", "seed"})
      CHECK(s.contains(key));
  CHECK(summary[2]["algorithm"] == "baseline");
}

TEST_CASE("a failing run does not stop the batch") {
  RunManifest m;
  m.problems = {"/nonexistent/problem.json", "gen:example1"};
  m.algorithms = {Algorithm::alg1, Algorithm::alg3};
  m.config.max_iter = 20;
  const fs::path dir = scratch_dir("errors");
  const BatchResult r = run_manifest(m, dir.string());
  CHECK(r.exit_code != 0);
  REQUIRE(r.runs.size() == 4);
  CHECK(r.runs[0].error.has_value());
  CHECK(r.runs[2].iterations > 0);
  CHECK_FALSE(r.runs[2].error.has_value());
  CHECK(r.runs[3].error.has_value());  // alg3 needs strong convexity
  CHECK(fs::exists(dir / "summary.json"));
}

TEST_CASE("max_iter 0 yields the initialization row only") {
  RunManifest m;
  m.problems = {"gen:example1"};
  m.algorithms = {Algorithm::alg1};
  m.config.max_iter = 0;
  const fs::path dir = scratch_dir("zero");
  const BatchResult r = run_manifest(m, dir.string());
  CHECK(read_trace_csv((dir / r.runs[0].trace_file).string()).size() == 1);
}

TEST_CASE("traces are byte-identical across repeats and worker counts") {
  RunManifest m;
  m.problems = {"gen:alloc:3:40:5", "gen:sconvex:2:30:3", "gen:example1"};
  m.algorithms = {Algorithm::alg1, Algorithm::alg2, Algorithm::alg3, Algorithm::baseline_fixed};
  m.config.max_iter = 60;
  std::vector<std::string> dirs;
  for (auto exec : {Execution::serial(), Execution::parallel(1), Execution::parallel(3), Execution::parallel(8), Execution::parallel(8)}) {
    m.config.exec = exec;
    const fs::path dir = scratch_dir("det" + std::to_string(dirs.size()));
    run_manifest(m, dir.string());
    dirs.push_back(dir.string());
  }
  for (const auto& e : fs::directory_iterator(dirs[0])) {
    if (e.path().extension() != ".csv" || e.path().filename().string().rfind("profile", 0) == 0) continue;
    const std::string ref = slurp(e.path());
    for (std::size_t i = 1; i < dirs.size(); ++i) CHECK(slurp(fs::path(dirs[i]) / e.path().filename()) == ref);
  }
}
