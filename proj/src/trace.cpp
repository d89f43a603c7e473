#include "egap/trace.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "egap/errors.hpp"

namespace egap {

namespace {

void append(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, ",%.17g", v);
  out += buf;
}

}  // namespace

std::string format_trace_row(const TraceRecord& r) {
  std::string out = std::to_string(r.k);
  for (double v : {r.tau, r.beta1, r.beta2, r.phi, r.dual_smoothed, r.gap_surrogate, r.feas_norm, r.rpfgap, r.rdfgap, r.e_d, r.e_p,
                   r.time_ms})
    append(out, v);
  return out;
}

void write_trace_csv(std::ostream& out, const ConvergenceTrace& trace) {
  out << kTraceHeader << '\n';
  for (const auto& r : trace.records) out << format_trace_row(r) << '\n';
}

void write_trace_csv(const std::string& path, const ConvergenceTrace& trace) {
  // Write to a sibling temporary and rename so readers never see a partial file.
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error("cannot open " + tmp + " for writing");
    write_trace_csv(out, trace);
    if (!out) throw Error("failed writing " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) throw Error("cannot rename " + tmp + " to " + path);
}

ConvergenceTrace read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader) throw Error(path + ": missing trace header");
  ConvergenceTrace trace;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(row, cell, ',')) v.push_back(std::stod(cell));
    if (v.size() != 13) throw Error(path + ": expected 13 columns");
    TraceRecord r;
    r.k = static_cast<long>(v[0]);
    r.tau = v[1];
    r.beta1 = v[2];
    r.beta2 = v[3];
    r.phi = v[4];
    r.dual_smoothed = v[5];
    r.gap_surrogate = v[6];
    r.feas_norm = v[7];
    r.rpfgap = v[8];
    r.rdfgap = v[9];
    r.e_d = v[10];
    r.e_p = v[11];
    r.time_ms = v[12];
    trace.records.push_back(r);
  }
  return trace;
}

}  // namespace egap
