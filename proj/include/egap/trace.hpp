#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace egap {

/// One row per iteration k, describing (x_bar^k, y_bar^k, beta1^k, beta2^k, tau_k).
struct TraceRecord {
  long k = 0;
  double tau = 0.0;
  double beta1 = 0.0;
  double beta2 = 0.0;
  double phi = 0.0;
  double dual_smoothed = 0.0;  // d(y_bar; beta1), or d(y_bar) when beta1 = 0
  double gap_surrogate = 0.0;  // phi(x_bar) - dual_smoothed
  double feas_norm = 0.0;      // ||A x_bar - b||
  double rpfgap = 0.0;
  double rdfgap = 0.0;
  double e_d = 0.0;
  double e_p = 0.0;
  double time_ms = 0.0;
};

struct ConvergenceTrace {
  std::vector<TraceRecord> records;

  bool empty() const { return records.empty(); }
  std::size_t size() const { return records.size(); }
  const TraceRecord& back() const { return records.back(); }
};

inline constexpr const char* kTraceHeader = "k,tau,beta1,beta2,phi,dual_smoothed,gap_surrogate,feas_norm,rpfgap,rdfgap,e_d,e_p,time_ms";

/// CSV row with 17 significant digits per value, no trailing newline.
std::string format_trace_row(const TraceRecord& record);

void write_trace_csv(std::ostream& out, const ConvergenceTrace& trace);
void write_trace_csv(const std::string& path, const ConvergenceTrace& trace);

/// Parses a file written by write_trace_csv. Throws Error on malformed input.
ConvergenceTrace read_trace_csv(const std::string& path);

}  // namespace egap
