#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hfopt {

struct TraceRow {
  std::string run_id;
  std::string solver;
  std::string problem;
  double eps = 0.0;
  std::uint64_t seed = 0;
  std::string phase;
  long iteration = 0;
  double f = 0.0;
  double grad_norm = 0.0;
  long cum_grad_calls = 0;
  long cum_hvp_calls = 0;
};

struct TraceFile {
  std::uint64_t seed = 0;
  std::string rng_name;
  std::vector<TraceRow> rows;
};

/// Fixed column order, header row, '#'-prefixed metadata lines carrying
/// the seed and generator name. Doubles are written at full precision so
/// the reader round-trips without loss.
void write_trace_csv(const std::string& path, const TraceFile& trace);
TraceFile read_trace_csv(const std::string& path);

void write_trace_json(const std::string& path, const TraceFile& trace);
TraceFile read_trace_json(const std::string& path);

/// %.17g rendering shared by every artifact writer (shortest lossless
/// form differs across standard libraries; a fixed format does not).
std::string format_double(double v);

}  // namespace hfopt
