#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>

#include "egap/algorithms.hpp"
#include "egap/errors.hpp"
#include "egap/generators.hpp"
#include "egap/problem_io.hpp"
#include "egap/runner.hpp"

namespace {

struct SolveArgs {
  std::string problem;
  std::string alg;
  std::optional<double> tau0;
  long max_iter = 10000;
  double eps_p = 1e-2;
  double eps_d = 1e-1;
  double eps_phi = 1e-5;
  double omega = 1e-2;
  std::string trace;
  bool check_invariants = false;
  bool trace_timing = false;
  bool no_stop = false;
  bool serial = false;
  int threads = 0;
  std::optional<double> target;
  bool consistent_start = false;
};

int usage_error(const CLI::App& app, const std::string& message) {
  std::cerr << "error: " << message << "\n\n" << app.help();
  return 2;
}

int do_solve(const SolveArgs& a, const CLI::App& sub) {
  const auto alg = egap::parse_algorithm(a.alg);
  if (!alg) return usage_error(sub, "unknown algorithm '" + a.alg + "' (expected alg1, alg2, alg2sym, alg3 or baseline)");

  egap::SolverConfig config;
  config.algorithm = *alg;
  config.tau0 = a.tau0;
  config.max_iter = a.max_iter;
  config.eps_p = a.eps_p;
  config.eps_d = a.eps_d;
  config.eps_phi = a.eps_phi;
  config.omega = a.omega;
  config.check_invariant_every_iter = a.check_invariants;
  config.record_time = a.trace_timing;
  config.use_stopping_rule = !a.no_stop;
  config.exec = a.serial ? egap::Execution::serial() : egap::Execution::parallel(a.threads);
  config.baseline_target = a.target;
  config.schedule_consistent_start = a.consistent_start;

  const egap::SolveOutcome out = egap::solve_source(a.problem, config);
  if (!a.trace.empty()) egap::write_trace_csv(a.trace, out.result.trace);
  nlohmann::json j = egap::to_json(out.summary);
  j["invariant_violations"] = out.result.diagnostics.invariant_violations;
  j["schedule_violations"] = out.result.diagnostics.schedule_violations;
  std::cout << j.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Excessive-gap solvers for separable convex problems"};
  app.require_subcommand(1);

  SolveArgs s;
  CLI::App* solve = app.add_subcommand("solve", "Run one algorithm on one problem and print a JSON summary");
  solve->add_option("--problem", s.problem, "JSON file, gen:example1, gen:alloc:SEED:M:NX or gen:sconvex:SEED:M:NX")->required();
  solve->add_option("--alg", s.alg, "alg1 | alg2 | alg2sym | alg3 | baseline")->required();
  solve->add_option("--tau0", s.tau0, "Initial tau");
  solve->add_option("--max-iter", s.max_iter, "Iteration cap")->check(CLI::NonNegativeNumber);
  solve->add_option("--eps-p", s.eps_p, "Relative feasibility tolerance");
  solve->add_option("--eps-d", s.eps_d, "Relative duality gap tolerance");
  solve->add_option("--eps-phi", s.eps_phi, "Objective stall tolerance");
  solve->add_option("--omega", s.omega, "Prox-diameter estimate padding");
  solve->add_option("--trace", s.trace, "Write the per-iteration trace CSV here");
  solve->add_flag("--check-invariants", s.check_invariants, "Fail on the first excessive-gap violation");
  solve->add_flag("--trace-timing", s.trace_timing, "Record wall time in the trace (makes it non-reproducible)");
  solve->add_flag("--no-stop", s.no_stop, "Ignore the stopping rule and run exactly --max-iter iterations");
  solve->add_flag("--serial", s.serial, "Use the serial kernels");
  solve->add_option("--threads", s.threads, "OpenMP threads (0 = default)");
  solve->add_option("--target", s.target, "Objective value the baseline must reach");
  solve->add_flag("--consistent-start", s.consistent_start, "alg2 variants: scale the initial smoothness so the step condition holds at k = 0");

  std::string manifest_path, out_dir;
  CLI::App* profile = app.add_subcommand("profile", "Run a manifest and write traces, summary.json and profile CSVs");
  profile->add_option("--manifest", manifest_path, "Manifest JSON file")->required();
  profile->add_option("--out", out_dir, "Output directory")->required();

  std::string gen_source, gen_out;
  CLI::App* generate = app.add_subcommand("generate", "Write a generated problem as JSON");
  generate->add_option("--problem", gen_source, "gen:example1, gen:alloc:SEED:M:NX or gen:sconvex:SEED:M:NX")->required();
  generate->add_option("--out", gen_out, "Output file (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (*solve) return do_solve(s, *solve);
    if (*profile) {
      egap::RunManifest manifest;
      try {
        manifest = egap::load_manifest(manifest_path);
      } catch (const egap::ConfigError& e) {
        return usage_error(*profile, e.what());
      }
      return egap::run_command(manifest, out_dir, &std::cerr);
    }
    if (*generate) {
      const std::string doc = egap::to_json(egap::load_problem_source(gen_source)).dump(2) + "\n";
      if (gen_out.empty()) {
        std::cout << doc;
      } else {
        std::ofstream out(gen_out);
        if (!(out << doc)) throw egap::Error("cannot write " + gen_out);
      }
      return 0;
    }
  } catch (const egap::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
