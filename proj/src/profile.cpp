#include "egap/profile.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>

#include "egap/errors.hpp"

namespace egap {

namespace {

std::size_t index_of(const std::vector<std::string>& names, const std::string& name) {
  return static_cast<std::size_t>(std::find(names.begin(), names.end(), name) - names.begin());
}

double cost(const ProfileEntry& e, ProfileMetric metric) {
  if (metric == ProfileMetric::iterations) return std::max(1.0, static_cast<double>(e.iterations));
  return std::max(1e-3, e.time_ms);
}

}  // namespace

ProfileTable performance_profile(const std::vector<ProfileEntry>& results) {
  ProfileTable t;
  std::map<std::pair<std::string, std::string>, int> seen;
  for (const auto& e : results) {
    if (std::find(t.algorithms.begin(), t.algorithms.end(), e.algorithm) == t.algorithms.end()) t.algorithms.push_back(e.algorithm);
    if (std::find(t.instances.begin(), t.instances.end(), e.instance) == t.instances.end()) t.instances.push_back(e.instance);
    if (++seen[{e.instance, e.algorithm}] > 1) throw ConfigError("duplicate profile entry for " + e.instance + " / " + e.algorithm);
  }
  if (t.algorithms.size() < 2 || t.instances.size() < 2) throw ConfigError("a performance profile needs at least two algorithms and two instances");
  if (seen.size() != t.algorithms.size() * t.instances.size()) throw ConfigError("performance profile needs every (instance, algorithm) pair");
  t.entries = results;
  return t;
}

std::vector<std::vector<double>> ProfileTable::log2_ratios(ProfileMetric metric) const {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> costs(algorithms.size(), std::vector<double>(instances.size(), inf));
  for (const auto& e : entries)
    if (e.success) costs[index_of(algorithms, e.algorithm)][index_of(instances, e.instance)] = cost(e, metric);

  std::vector<std::vector<double>> out(algorithms.size(), std::vector<double>(instances.size(), inf));
  for (std::size_t p = 0; p < instances.size(); ++p) {
    double best = inf;
    for (std::size_t a = 0; a < algorithms.size(); ++a) best = std::min(best, costs[a][p]);
    if (best == inf) continue;
    for (std::size_t a = 0; a < algorithms.size(); ++a)
      if (costs[a][p] < inf) out[a][p] = std::log2(costs[a][p] / best);
  }
  return out;
}

double ProfileTable::fraction_within(const std::string& algorithm, double theta, ProfileMetric metric) const {
  const auto ratios = log2_ratios(metric);
  const auto& row = ratios.at(index_of(algorithms, algorithm));
  const auto count = std::count_if(row.begin(), row.end(), [&](double r) { return r <= theta; });
  return static_cast<double>(count) / static_cast<double>(instances.size());
}

std::vector<double> ProfileTable::thetas(ProfileMetric metric) const {
  std::vector<double> out{0.0};
  for (const auto& row : log2_ratios(metric))
    for (double r : row)
      if (std::isfinite(r)) out.push_back(r);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void write_profile_csv(std::ostream& out, const ProfileTable& table, ProfileMetric metric) {
  out << "theta";
  for (const auto& a : table.algorithms) out << ',' << a;
  out << '\n';
  char buf[40];
  for (double theta : table.thetas(metric)) {
    std::snprintf(buf, sizeof buf, "%.17g", theta);
    out << buf;
    for (const auto& a : table.algorithms) {
      std::snprintf(buf, sizeof buf, ",%.17g", table.fraction_within(a, theta, metric));
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace egap
