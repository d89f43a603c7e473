#include "egap/runner.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "egap/errors.hpp"
#include "egap/generators.hpp"

namespace egap {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

Algorithm algorithm_or_throw(const std::string& name) {
  const auto alg = parse_algorithm(name);
  if (!alg) throw ConfigError("unknown algorithm '" + name + "' (expected alg1, alg2, alg2sym, alg3 or baseline)");
  return *alg;
}

template <class T>
void read_if(const json& object, const char* key, T& target) {
  if (!object.contains(key)) return;
  try {
    target = object.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("manifest key '") + key + "': " + e.what());
  }
}

std::string sanitize(const std::string& name) {
  std::string s = fs::path(name).has_extension() && name.rfind("gen:", 0) != 0 ? fs::path(name).stem().string() : name;
  for (char& c : s)
    if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
  return s;
}

void write_atomically(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << content;
    if (!out) throw Error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

}  // namespace

RunManifest parse_manifest(const json& document) {
  if (!document.is_object()) throw ConfigError("manifest must be a JSON object");
  RunManifest m;
  read_if(document, "problems", m.problems);
  if (document.contains("desk_family")) {
    std::size_t count = 0;
    read_if(document, "desk_family", count);
    for (const auto& member : desk_family(count)) m.problems.push_back(member.name);
  }
  std::vector<std::string> names;
  read_if(document, "algorithms", names);
  for (const auto& n : names) m.algorithms.push_back(algorithm_or_throw(n));
  if (m.problems.empty()) throw ConfigError("manifest lists no problems");
  if (m.algorithms.empty()) throw ConfigError("manifest lists no algorithms");

  if (document.contains("config")) {
    const json& c = document.at("config");
    if (!c.is_object()) throw ConfigError("manifest 'config' must be an object");
    read_if(c, "max_iter", m.config.max_iter);
    read_if(c, "eps_p", m.config.eps_p);
    read_if(c, "eps_d", m.config.eps_d);
    read_if(c, "eps_phi", m.config.eps_phi);
    read_if(c, "omega", m.config.omega);
    read_if(c, "record_time", m.config.record_time);
    read_if(c, "check_invariants", m.config.check_invariant_every_iter);
    read_if(c, "use_stopping_rule", m.config.use_stopping_rule);
    if (c.contains("tau0")) {
      double tau0 = 0.0;
      read_if(c, "tau0", tau0);
      m.config.tau0 = tau0;
    }
    int threads = 0;
    bool serial = false;
    read_if(c, "threads", threads);
    read_if(c, "serial", serial);
    m.config.exec = serial ? Execution::serial() : Execution::parallel(threads);
  }
  if (document.contains("baseline_target_from")) {
    std::string name;
    read_if(document, "baseline_target_from", name);
    m.baseline_target_from = algorithm_or_throw(name);
    if (*m.baseline_target_from == Algorithm::baseline_fixed) throw ConfigError("baseline_target_from cannot be the baseline itself");
  }
  return m;
}

RunManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open manifest " + path);
  json document;
  try {
    in >> document;
  } catch (const json::exception& e) {
    throw ConfigError("manifest " + path + " is not valid JSON: " + e.what());
  }
  return parse_manifest(document);
}

json to_json(const RunSummary& s) {
  json j = {{"instance", s.instance},   {"algorithm", s.algorithm}, {"iterations", s.iterations},
            {"stop_reason", s.stop_reason}, {"phi", s.phi},         {"feas_norm", s.feas_norm},
            {"time_ms", s.time_ms},     {"seed", s.seed}};
  if (!s.trace_file.empty()) j["trace"] = s.trace_file;
  if (s.error) j["error"] = *s.error;
  return j;
}

SolveOutcome solve_source(const std::string& source, const SolverConfig& config) {
  SolveOutcome out;
  out.summary.instance = source;
  out.summary.algorithm = to_string(config.algorithm);
  const SeparableProblem problem = load_problem_source(source, &out.summary.seed);
  out.result = run(problem, config);
  out.summary.iterations = out.result.iterations;
  out.summary.stop_reason = to_string(out.result.reason);
  out.summary.phi = out.result.phi;
  out.summary.feas_norm = out.result.feas_norm;
  out.summary.time_ms = out.result.time_ms;
  return out;
}

BatchResult run_manifest(const RunManifest& manifest, const std::string& out_dir, std::ostream* log) {
  fs::create_directories(out_dir);
  BatchResult batch;

  // Runs whose objective value seeds the baseline target go first on each instance.
  std::vector<Algorithm> order = manifest.algorithms;
  if (manifest.baseline_target_from) {
    const auto it = std::find(order.begin(), order.end(), *manifest.baseline_target_from);
    if (it == order.end()) throw ConfigError("baseline_target_from names an algorithm that is not in the manifest");
    std::rotate(order.begin(), it, it + 1);
  }

  std::map<std::pair<std::size_t, Algorithm>, RunSummary> by_pair;
  for (std::size_t p = 0; p < manifest.problems.size(); ++p) {
    const std::string& source = manifest.problems[p];
    std::optional<double> target;
    for (Algorithm alg : order) {
      SolverConfig config = manifest.config;
      config.algorithm = alg;
      if (alg == Algorithm::baseline_fixed) config.baseline_target = target;

      char prefix[16];
      std::snprintf(prefix, sizeof prefix, "%02zu_", p);
      const std::string file = std::string(prefix) + sanitize(source) + "__" + to_string(alg) + ".csv";

      RunSummary summary;
      try {
        SolveOutcome outcome = solve_source(source, config);
        summary = std::move(outcome.summary);
        std::ostringstream csv;
        write_trace_csv(csv, outcome.result.trace);
        write_atomically(fs::path(out_dir) / file, csv.str());
        summary.trace_file = file;
        if (manifest.baseline_target_from && alg == *manifest.baseline_target_from) target = summary.phi;
      } catch (const std::exception& e) {
        summary.instance = source;
        summary.algorithm = to_string(alg);
        summary.stop_reason = "error";
        summary.error = e.what();
        batch.exit_code = 1;
        if (log) *log << "error: " << source << " / " << to_string(alg) << ": " << e.what() << '\n';
      }
      if (log && !summary.error)
        *log << source << " / " << summary.algorithm << ": " << summary.iterations << " iterations, " << summary.stop_reason << '\n';
      by_pair[{p, alg}] = std::move(summary);
    }
  }
  // Summary order follows the manifest, independent of execution order.
  for (std::size_t p = 0; p < manifest.problems.size(); ++p)
    for (Algorithm alg : manifest.algorithms) batch.runs.push_back(by_pair.at({p, alg}));

  json summary = json::array();
  for (const auto& r : batch.runs) summary.push_back(to_json(r));
  write_atomically(fs::path(out_dir) / "summary.json", summary.dump(2) + "\n");

  std::vector<std::string> distinct;
  for (const auto& s : manifest.problems)
    if (std::find(distinct.begin(), distinct.end(), s) == distinct.end()) distinct.push_back(s);
  if (manifest.algorithms.size() >= 2 && distinct.size() == manifest.problems.size() && distinct.size() >= 2) {
    const ProfileTable table = performance_profile(profile_entries(batch.runs));
    for (auto [metric, name] : {std::pair{ProfileMetric::iterations, "profile_iterations.csv"}, std::pair{ProfileMetric::time, "profile_time.csv"}}) {
      std::ostringstream csv;
      write_profile_csv(csv, table, metric);
      write_atomically(fs::path(out_dir) / name, csv.str());
    }
  }
  return batch;
}

int run_command(const RunManifest& manifest, const std::string& out_dir, std::ostream* log) {
  return run_manifest(manifest, out_dir, log).exit_code;
}

std::vector<ProfileEntry> profile_entries(const std::vector<RunSummary>& runs) {
  std::vector<ProfileEntry> out;
  for (const auto& r : runs) out.push_back({r.instance, r.algorithm, r.iterations, r.time_ms, r.success()});
  return out;
}

}  // namespace egap
