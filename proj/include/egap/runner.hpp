#pragma once

#include <cstdint>
#include <iosfwd>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "egap/algorithms.hpp"
#include "egap/profile.hpp"

namespace egap {

/// Batch description read by `egap profile`:
///
///   {"problems": ["gen:example1", "gen:alloc:1:10:5", "path/to/problem.json", ...],
///    "desk_family": 10,                 // optional, appends desk_family(10)
///    "algorithms": ["alg1", "baseline"],
///    "config": {"max_iter": 10000, "eps_p": 1e-2, "eps_d": 1e-1, "eps_phi": 1e-5,
///               "omega": 1e-2, "tau0": 0.499, "threads": 0, "serial": false,
///               "record_time": false, "check_invariants": false},
///    "baseline_target_from": "alg1"}    // optional
///
/// With baseline_target_from, the baseline on each instance stops once it
/// reaches the objective value the named algorithm stopped at.
struct RunManifest {
  std::vector<std::string> problems;
  std::vector<Algorithm> algorithms;
  SolverConfig config;
  std::optional<Algorithm> baseline_target_from;
};

/// Throws ConfigError on unknown algorithms or keys of the wrong type.
RunManifest parse_manifest(const nlohmann::json& document);
RunManifest load_manifest(const std::string& path);

struct RunSummary {
  std::string instance;
  std::string algorithm;
  long iterations = 0;
  std::string stop_reason;
  double phi = 0.0;
  double feas_norm = 0.0;
  double time_ms = 0.0;
  std::uint64_t seed = 0;
  std::string trace_file;
  std::optional<std::string> error;

  bool success() const { return !error && (stop_reason == "gap" || stop_reason == "stall" || stop_reason == "target"); }
};

nlohmann::json to_json(const RunSummary& summary);

/// One solve with the trace returned alongside its summary.
struct SolveOutcome {
  RunSummary summary;
  RunResult result;
};
SolveOutcome solve_source(const std::string& source, const SolverConfig& config);

struct BatchResult {
  std::vector<RunSummary> runs;
  int exit_code = 0;  // 1 when any run errored
};

/// Runs every (problem, algorithm) pair, writing <out>/<NN>_<instance>__<alg>.csv
/// per run, <out>/summary.json, and profile_iterations.csv / profile_time.csv
/// when the batch has at least two algorithms and two instances. A failed run
/// is recorded in the summary and the batch continues.
BatchResult run_manifest(const RunManifest& manifest, const std::string& out_dir, std::ostream* log = nullptr);

/// run_manifest's exit code.
int run_command(const RunManifest& manifest, const std::string& out_dir, std::ostream* log = nullptr);

std::vector<ProfileEntry> profile_entries(const std::vector<RunSummary>& runs);

}  // namespace egap
