#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "egap/algorithms.hpp"
#include "egap/generators.hpp"
#include "egap/profile.hpp"
#include "egap/reference.hpp"
#include "egap/runner.hpp"
#include "egap/schedules.hpp"
#include "tiny_corpus.hpp"

using namespace egap;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* format, ...) {
  char buf[1024];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

SolverConfig fixed(Algorithm alg, long iterations) {
  SolverConfig c;
  c.algorithm = alg;
  c.max_iter = iterations;
  c.use_stopping_rule = false;
  return c;
}

Vector example1_optimum() { return (Vector(5) << -4, 2, 3, 4, 5).finished(); }

// ---------------------------------------------------------------------------

Outcome example1_alg1() {
  SolverConfig c = fixed(Algorithm::alg1, 100);
  c.exec = Execution::serial();
  const auto start = std::chrono::steady_clock::now();
  const RunResult r = run(generate_example1(), c);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const Vector x = flatten(r.state.x_bar);
  const double rel = (x - example1_optimum()).norm() / example1_optimum().norm();
  const bool pass = rel <= 0.02 && std::abs(r.phi - 5.0) <= 0.1 && seconds < 1.0;
  return {pass, fmt("x100=(%.4f, %.4f, %.4f, %.4f, %.4f) rel.err=%.4g (<=0.02) phi=%.5f (|phi-5|<=0.1) time=%.3fs single-threaded (<1s)", x[0], x[1],
                    x[2], x[3], x[4], rel, r.phi, seconds)};
}

Outcome example1_alg2() {
  const RunResult r = run(generate_example1(), fixed(Algorithm::alg2, 100));
  const Vector x = flatten(r.state.x_bar);
  const double rel = (x - example1_optimum()).norm() / example1_optimum().norm();
  const bool pass = rel <= 0.05 && std::abs(r.phi - 5.0) <= 0.15;
  return {pass, fmt("x100=(%.4f, %.4f, %.4f, %.4f, %.4f) rel.err=%.4g (<=0.05) phi=%.5f (|phi-5|<=0.15)", x[0], x[1], x[2], x[3], x[4], rel,
                    r.phi)};
}

Outcome invariant_suite() {
  std::vector<std::pair<std::string, SeparableProblem>> instances;
  instances.emplace_back("example1", generate_example1());
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const std::size_t m = 10 * (1 + (seed - 1) % 5);
    const std::size_t nx = 2 + seed % 3;
    instances.emplace_back(fmt("alloc:%llu:%zu:%zu", static_cast<unsigned long long>(seed), m, nx), generate_random_allocation(seed, m, nx));
  }

  long runs = 0, alg1_viol = 0, alg2_viol = 0, alg3_viol = 0;
  for (const auto& [name, p] : instances) {
    alg1_viol += run(p, fixed(Algorithm::alg1, 300)).diagnostics.invariant_violations;
    SolverConfig c2 = fixed(Algorithm::alg2, 300);
    c2.schedule_consistent_start = true;
    c2.strict_schedule = true;
    alg2_viol += run(p, c2).diagnostics.invariant_violations;
    runs += 2;
  }
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    alg3_viol += run(generate_strongly_convex(seed, 5 + seed, 3, 0.5), fixed(Algorithm::alg3, 300)).diagnostics.invariant_violations;
    ++runs;
  }
  // The alg2 start listed with the algorithm (beta1 = beta2 = sqrt(Lbar)) does not meet the
  // step-size condition at k = 0; its violations are reported alongside.
  const RunResult listed = run(generate_example1(), fixed(Algorithm::alg2, 300));
  const bool pass = alg1_viol == 0 && alg2_viol == 0 && alg3_viol == 0;
  return {pass, fmt("%ld runs to k=300: violations alg1=%ld alg2=%ld alg3=%ld (alg2 started with beta1*beta2 >= tau0^2/(1-tau0) Lbar, "
                    "schedule enforced); with beta1=beta2=sqrt(Lbar) alg2 violates on Example-1 at %ld/301 iterations",
                    runs, alg1_viol, alg2_viol, alg3_viol, listed.diagnostics.invariant_violations)};
}

Outcome bound_suite() {
  const SeparableProblem p = generate_example1();
  const ReferenceSolution ref = reference_solve(p);
  const double ys = ref.y_star.norm(), lbar = 5.0, sum_d = 90.0;
  const double feas_const = ys + std::sqrt(ys * ys + 2.0 * sum_d);

  long checked = 0, gap1 = 0, feas1 = 0, gap2 = 0, feas2 = 0;
  double worst_gap1 = 0, worst_feas1 = 0, worst_gap2 = 0, worst_feas2 = 0;
  SolverConfig c1 = fixed(Algorithm::alg1, 500);
  c1.observer = [&](const IterateState& s, const TraceRecord& r) {
    const double k = static_cast<double>(r.k);
    const double gap = r.phi - dual_function(p, s.y_bar).value;
    const double gb = std::sqrt(lbar) * sum_d / (0.499 * k + 1.0), fb = std::sqrt(lbar) / (0.499 * k + 1.0) * feas_const;
    worst_gap1 = std::max(worst_gap1, gap / gb);
    worst_feas1 = std::max(worst_feas1, r.feas_norm / fb);
    gap1 += gap > gb;
    feas1 += r.feas_norm > fb;
    ++checked;
  };
  run(p, c1);
  SolverConfig c2 = fixed(Algorithm::alg2, 500);
  c2.observer = [&](const IterateState& s, const TraceRecord& r) {
    if (r.k < 1) return;
    const double k = static_cast<double>(r.k);
    const double gap = r.phi - dual_function(p, s.y_bar).value;
    const double gb = 2.0 * std::sqrt(lbar) * sum_d / (0.998 * k), fb = 2.0 * std::sqrt(lbar) / (0.998 * k) * feas_const;
    worst_gap2 = std::max(worst_gap2, gap / gb);
    worst_feas2 = std::max(worst_feas2, r.feas_norm / fb);
    gap2 += gap > gb;
    feas2 += r.feas_norm > fb;
    ++checked;
  };
  run(p, c2);
  const bool pass = gap1 + feas1 + gap2 + feas2 == 0;
  return {pass, fmt("||y*||=%.9f; %ld iterates; violations alg1 gap=%ld feas=%ld (worst ratio %.3f, %.3f), alg2 gap=%ld feas=%ld (worst ratio %.3f, %.3f)", ys,
                    checked, gap1, feas1, worst_gap1, worst_feas1, gap2, feas2, worst_gap2, worst_feas2)};
}

Outcome strongly_convex_suite() {
  long gap_viol = 0, feas_viol = 0, derived_viol = 0, rows = 0, instances_hit = 0;
  long first_k = -1, last_k = -1;
  double worst_gap = -std::numeric_limits<double>::infinity();
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const SeparableProblem p = generate_strongly_convex(seed, 5 + seed, 3, 0.5);
    const ReferenceSolution ref = reference_solve(p);
    const double lphi = compute_constants(p).smooth_dual_lipschitz();
    const double ys = ref.y_star.norm();
    long before = feas_viol;
    SolverConfig c = fixed(Algorithm::alg3, 200);
    c.observer = [&](const IterateState& s, const TraceRecord& r) {
      const double d = dual_function(p, s.y_bar).value;
      const double gap = r.phi - d;
      worst_gap = std::max(worst_gap, gap);
      gap_viol += gap > invariant_slack(d);
      const double k = static_cast<double>(r.k);
      if (r.feas_norm > 8.0 * lphi * ys / ((k + 4.0) * (k + 4.0))) {
        ++feas_viol;
        if (first_k < 0 || r.k < first_k) first_k = r.k;
        last_k = std::max(last_k, r.k);
      }
      derived_viol += r.feas_norm > 16.0 * lphi * ys / ((k + 3.0) * (k + 3.0));
      ++rows;
    };
    run(p, c);
    instances_hit += feas_viol > before;
  }
  const bool pass = gap_viol == 0 && feas_viol == 0;
  return {pass, fmt("10 instances x k<=200 (%ld iterates): gap<=0 violations=%ld (max gap %.3g); ||Ax-b||<=8L||y*||/(k+4)^2 violations=%ld on %ld "
                    "instances (k=%ld..%ld); the form 16L||y*||/(k+3)^2 implied by ||Ax-b||<=2 beta2^k ||y*|| and beta2^(k+1)<8L/(k+4)^2 has %ld violations",
                    rows, gap_viol, worst_gap, feas_viol, instances_hit, first_k, last_k, derived_viol)};
}

Outcome schedule_suite() {
  // Recurrences as the algorithms run them.
  const double tau0 = 0.499, beta0 = 1.7;
  double tau = tau0, beta = beta0, worst_tau = 0.0, worst_beta_stated = 0.0, worst_beta_exact = 0.0;
  long first_beta_fail = -1;
  for (long k = 0; k <= 10000; ++k) {
    worst_tau = std::max(worst_tau, std::abs(tau - tau_alg1_closed_form(tau0, k)) / tau);
    const double stated = std::abs(beta - beta_alg1_upper_bound(beta0, tau0, k)) / beta;
    worst_beta_stated = std::max(worst_beta_stated, stated);
    if (stated > 1e-12 && first_beta_fail < 0) first_beta_fail = k;
    worst_beta_exact = std::max(worst_beta_exact, std::abs(beta - beta_alg1_closed_form(beta0, tau0, k)) / beta);
    beta *= 1.0 - tau;
    tau = tau_next_alg1(tau);
  }

  // Interleaved alg2 parameters and the tau sandwich, tau0 = 0.998.
  const double t0 = 0.998, bb = 2.3;
  double t = t0, b1 = bb, b2 = bb;
  long lemma_viol = 0, tau_viol = 0;
  for (long k = 0; k < 1000; ++k) {
    if (k % 2 == 0)
      b1 *= 1.0 - t;
    else
      b2 *= 1.0 - t;
    t = tau_next_alg2(t);
    const double kk = static_cast<double>(k + 1);
    lemma_viol += !((1.0 - t0) * bb / (2.0 * t0 * kk + 1.0) < b1 && b1 < 2.0 * bb * std::sqrt(1.0 - t0) / (t0 * kk));
    lemma_viol += !(bb * std::sqrt(1.0 - t0) / (2.0 * t0 * kk + 1.0) < b2 && b2 < 2.0 * bb / (t0 * kk));
    tau_viol += !(t0 / (1.0 + 2.0 * t0 * kk) < t && t < 2.0 * t0 / (2.0 + t0 * kk));
  }
  const bool pass = worst_tau <= 1e-12 && worst_beta_stated <= 1e-12 && lemma_viol == 0 && tau_viol == 0;
  return {pass, fmt("tau_k=tau0/(1+tau0 k) max rel.err=%.2g; beta_k=beta0/(tau0 k+1) vs beta_(k+1)=(1-tau_k)beta_k max rel.err=%.3g (first >1e-12 at k=%ld), "
                    "telescoped form beta0(1-tau0)/(1+tau0(k-1)) max rel.err=%.2g; beta sandwich violations=%ld, tau sandwich violations=%ld",
                    worst_tau, worst_beta_stated, first_beta_fail, worst_beta_exact, lemma_viol, tau_viol)};
}

Outcome gradient_suite() {
  std::vector<SeparableProblem> problems{generate_example1(), generate_random_allocation(1, 5, 3), generate_random_allocation(2, 8, 2),
                                         generate_strongly_convex(3, 4, 3, 0.5), generate_strongly_convex(4, 6, 2, 0.5)};
  Rng rng(2718);
  double worst_fd = 0.0, worst_lip = 0.0;
  for (const auto& p : problems) {
    const double beta = std::sqrt(compute_constants(p).lbar);
    for (int i = 0; i < 10; ++i) {
      Vector y(p.num_rows());
      for (auto& v : y) v = rng.uniform(-2.0, 2.0);
      worst_fd = std::max(worst_fd, smoothed_dual_gradient_check(p, y, beta));
    }
  }
  for (int i = 0; i < 100; ++i) {
    const SeparableProblem& p = problems[static_cast<std::size_t>(i) % problems.size()];
    const double beta = rng.uniform(0.05, 2.0);
    Vector y1(p.num_rows()), y2(p.num_rows());
    for (auto& v : y1) v = rng.uniform(-3.0, 3.0);
    for (auto& v : y2) v = rng.uniform(-3.0, 3.0);
    const double lhs = (smoothed_dual(p, y1, beta).gradient - smoothed_dual(p, y2, beta).gradient).norm();
    worst_lip = std::max(worst_lip, lhs / (compute_constants(p).dual_lipschitz(beta) * (y1 - y2).norm()));
  }
  const bool pass = worst_fd <= 1e-5 && worst_lip <= 1.0 + 1e-9;
  return {pass, fmt("finite differences: max rel.err=%.3g over 50 duals on 5 instances (<=1e-5); Lipschitz: max ||dg||/(L^d ||dy||)=%.4f over 100 pairs (<=1)",
                    worst_fd, worst_lip)};
}

Outcome xi_suite() {
  Rng rng(31415);
  double min_low = std::numeric_limits<double>::infinity(), min_high = min_low;
  for (int i = 0; i < 1000; ++i) {
    double tau = rng.uniform01();
    while (tau <= 0.0) tau = rng.uniform01();
    const XiPair x = xi_comparison(tau);
    min_low = std::min(min_low, x.xi2 - x.xi1);
    min_high = std::min(min_high, 2.0 * x.xi1 - x.xi2);
  }
  return {min_low > 0.0 && min_high > 0.0, fmt("1000 draws: min(xi2-xi1)=%.3g, min(2xi1-xi2)=%.3g (both >0)", min_low, min_high)};
}

Outcome oracle_suite() {
  int agree = 0, total = 0;
  double worst = 0.0;
  std::string misses;
  for (const auto& inst : test::tiny_corpus()) {
    ++total;
    const ReferenceSolution ref = reference_solve(inst.problem, 1e-7);
    const BruteForceResult grid = brute_force_tiny(inst.problem, inst.grid_step);
    const double diff = std::abs(grid.phi_star - ref.phi_star);
    const double allowed = 2.0 * inst.grid_step + 1e-7;
    worst = std::max(worst, diff / allowed);
    if (diff <= allowed)
      ++agree;
    else
      misses += " " + inst.name;
  }
  return {agree == total, fmt("%d/%d tiny instances agree in phi* within 2*grid_step+tol (worst |diff|/allowed=%.3g)%s", agree, total, worst,
                              misses.empty() ? "" : (" misses:" + misses).c_str())};
}

Outcome comparative_suite(const fs::path& scratch) {
  RunManifest m;
  for (const auto& f : desk_family(10)) m.problems.push_back(f.name);
  m.algorithms = {Algorithm::alg1, Algorithm::baseline_fixed};
  m.baseline_target_from = Algorithm::alg1;
  const BatchResult r = run_manifest(m, (scratch / "desk").string());
  int alg1_no_worse = 0, baseline_maxiter = 0;
  std::string counts;
  for (std::size_t i = 0; i < m.problems.size(); ++i) {
    const RunSummary& a = r.runs[2 * i];
    const RunSummary& b = r.runs[2 * i + 1];
    alg1_no_worse += a.iterations <= b.iterations;
    baseline_maxiter += b.stop_reason == "max_iter";
    counts += fmt(" %ld/%ld", a.iterations, b.iterations);
  }
  const ProfileTable table = performance_profile(profile_entries(r.runs));
  const double f1 = table.fraction_within("alg1", 0.0, ProfileMetric::iterations);
  const double fb = table.fraction_within("baseline", 0.0, ProfileMetric::iterations);
  const bool share = alg1_no_worse >= 6;
  const bool second = baseline_maxiter >= 1 || fb < f1;
  return {share && second && r.exit_code == 0,
          fmt("alg1 <= baseline iterations on %d/10 (>=6); baseline max_iter hits=%d, profile at theta=0 alg1=%.2f baseline=%.2f; alg1/baseline iterations:%s",
              alg1_no_worse, baseline_maxiter, f1, fb, counts.c_str())};
}

Outcome determinism_suite(const fs::path& scratch) {
  RunManifest m;
  m.problems = {"gen:example1", "gen:alloc:1:10:5", "gen:alloc:2:50:5", "gen:sconvex:1:20:3"};
  m.algorithms = {Algorithm::alg1, Algorithm::alg2, Algorithm::alg2_symmetric, Algorithm::alg3, Algorithm::baseline_fixed};
  m.config.max_iter = 300;
  const std::vector<Execution> runs{Execution::serial(), Execution::parallel(1), Execution::parallel(2), Execution::parallel(4),
                                    Execution::parallel(8), Execution::parallel(8)};
  std::vector<fs::path> dirs;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    m.config.exec = runs[i];
    dirs.push_back(scratch / fmt("det%zu", i));
    run_manifest(m, dirs.back().string());
  }
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  };
  int files = 0, mismatches = 0;
  for (const auto& e : fs::directory_iterator(dirs[0])) {
    const std::string name = e.path().filename().string();
    if (e.path().extension() != ".csv" || name.rfind("profile", 0) == 0) continue;
    ++files;
    const std::string ref = slurp(e.path());
    for (std::size_t i = 1; i < dirs.size(); ++i) mismatches += slurp(dirs[i] / name) != ref;
  }
  return {files > 0 && mismatches == 0, fmt("%d trace CSVs x %zu runs (serial, 1, 2, 4, 8, 8 threads): %d byte mismatches", files, runs.size(), mismatches)};
}

}  // namespace

int main(int argc, char** argv) {
  bool strict = false;
  for (int i = 1; i < argc; ++i)
    if (std::string(argv[i]) == "--strict") strict = true;

  const fs::path scratch = fs::temp_directory_path() / "egap_acceptance";
  fs::remove_all(scratch);
  fs::create_directories(scratch);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"Example-1 reproduction, alg1", example1_alg1},
      {"Example-1 reproduction, alg2", example1_alg2},
      {"Excessive-gap invariant suite", invariant_suite},
      {"Duality/feasibility bound suite, alg1 and alg2", bound_suite},
      {"Strongly convex bound suite, alg3", strongly_convex_suite},
      {"Schedule closed forms and sandwiches", schedule_suite},
      {"Smoothed dual gradient correctness", gradient_suite},
      {"xi comparison", xi_suite},
      {"Reference oracle vs brute force", oracle_suite},
      {"Comparative behavior vs fixed-smoothness baseline", [&] { return comparative_suite(scratch); }},
      {"Determinism across worker counts", [&] { return determinism_suite(scratch); }},
  };

  int passed = 0, errors = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
      ++errors;
    }
    passed += o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << (i + 1) << ". " << criteria[i].first << " -- " << o.detail << std::endl;
  }
  std::cout << passed << "/" << criteria.size() << " criteria passed" << std::endl;
  fs::remove_all(scratch);
  if (errors > 0) return 2;
  return strict && passed != static_cast<int>(criteria.size()) ? 1 : 0;
}
