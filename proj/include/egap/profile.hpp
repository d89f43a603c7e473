#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace egap {

struct ProfileEntry {
  std::string instance;
  std::string algorithm;
  long iterations = 0;
  double time_ms = 0.0;
  bool success = false;
};

enum class ProfileMetric { iterations, time };

/// Ratio-to-best performance profile. Costs are floored (1 iteration,
/// 1e-3 ms) so that a run stopping at k = 0 still has a finite ratio;
/// failures get ratio +inf.
class ProfileTable {
 public:
  std::vector<std::string> algorithms;  // in first-seen order
  std::vector<std::string> instances;   // in first-seen order
  std::vector<ProfileEntry> entries;

  /// log2 of cost / best cost, indexed [algorithm][instance].
  std::vector<std::vector<double>> log2_ratios(ProfileMetric metric) const;
  /// Fraction of instances with log2 ratio <= theta.
  double fraction_within(const std::string& algorithm, double theta, ProfileMetric metric) const;
  /// Breakpoints of all curves (finite log2 ratios) together with theta = 0, sorted.
  std::vector<double> thetas(ProfileMetric metric) const;
};

/// Requires at least two algorithms and two instances, with exactly one
/// entry per (instance, algorithm). Throws ConfigError otherwise.
ProfileTable performance_profile(const std::vector<ProfileEntry>& results);

/// Columns: theta, then one column per algorithm.
void write_profile_csv(std::ostream& out, const ProfileTable& table, ProfileMetric metric);

}  // namespace egap
