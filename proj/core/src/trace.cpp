#include "hfopt/trace.hpp"

#include "hfopt/oracle.hpp"

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace hfopt {

namespace {

constexpr const char* kHeader =
    "run_id,solver,problem,eps,seed,phase,iteration,f,grad_norm,cum_grad_calls,cum_hvp_calls";

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, sep)) out.push_back(field);
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trace_csv(const std::string& path, const TraceFile& trace) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open trace file for writing: " + path);
  os << "# seed=" << trace.seed << ", rng=" << trace.rng_name << "\n" << kHeader << "\n";
  for (const TraceRow& r : trace.rows) {
    os << r.run_id << ',' << r.solver << ',' << r.problem << ',' << format_double(r.eps) << ','
       << r.seed << ',' << r.phase << ',' << r.iteration << ',' << format_double(r.f) << ','
       << format_double(r.grad_norm) << ',' << r.cum_grad_calls << ',' << r.cum_hvp_calls << "\n";
  }
  if (!os.flush()) throw ConfigError("short write on trace file: " + path);
}

TraceFile read_trace_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open trace file: " + path);
  TraceFile trace;
  std::string line;
  bool header_seen = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto seed_pos = line.find("seed=");
      if (seed_pos != std::string::npos)
        trace.seed = std::strtoull(line.c_str() + seed_pos + 5, nullptr, 10);
      auto rng_pos = line.find("rng=");
      if (rng_pos != std::string::npos) trace.rng_name = line.substr(rng_pos + 4);
      continue;
    }
    if (!header_seen) {
      if (line != kHeader) throw ConfigError("unexpected trace header in " + path + ": " + line);
      header_seen = true;
      continue;
    }
    std::vector<std::string> f = split(line, ',');
    if (f.size() != 11) throw ConfigError("malformed trace row in " + path + ": " + line);
    TraceRow r;
    r.run_id = f[0];
    r.solver = f[1];
    r.problem = f[2];
    r.eps = std::strtod(f[3].c_str(), nullptr);
    r.seed = std::strtoull(f[4].c_str(), nullptr, 10);
    r.phase = f[5];
    r.iteration = std::strtol(f[6].c_str(), nullptr, 10);
    r.f = std::strtod(f[7].c_str(), nullptr);
    r.grad_norm = std::strtod(f[8].c_str(), nullptr);
    r.cum_grad_calls = std::strtol(f[9].c_str(), nullptr, 10);
    r.cum_hvp_calls = std::strtol(f[10].c_str(), nullptr, 10);
    trace.rows.push_back(std::move(r));
  }
  return trace;
}

void write_trace_json(const std::string& path, const TraceFile& trace) {
  nlohmann::json j;
  j["seed"] = trace.seed;
  j["rng"] = trace.rng_name;
  j["rows"] = nlohmann::json::array();
  for (const TraceRow& r : trace.rows) {
    // doubles serialized as strings: JSON number printing is not
    // guaranteed lossless across libraries
    j["rows"].push_back({{"run_id", r.run_id},
                         {"solver", r.solver},
                         {"problem", r.problem},
                         {"eps", format_double(r.eps)},
                         {"seed", r.seed},
                         {"phase", r.phase},
                         {"iteration", r.iteration},
                         {"f", format_double(r.f)},
                         {"grad_norm", format_double(r.grad_norm)},
                         {"cum_grad_calls", r.cum_grad_calls},
                         {"cum_hvp_calls", r.cum_hvp_calls}});
  }
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open trace file for writing: " + path);
  os << j.dump(1) << "\n";
  if (!os.flush()) throw ConfigError("short write on trace file: " + path);
}

TraceFile read_trace_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open trace file: " + path);
  nlohmann::json j;
  is >> j;
  TraceFile trace;
  trace.seed = j.at("seed").get<std::uint64_t>();
  trace.rng_name = j.at("rng").get<std::string>();
  for (const auto& e : j.at("rows")) {
    TraceRow r;
    r.run_id = e.at("run_id").get<std::string>();
    r.solver = e.at("solver").get<std::string>();
    r.problem = e.at("problem").get<std::string>();
    r.eps = std::strtod(e.at("eps").get<std::string>().c_str(), nullptr);
    r.seed = e.at("seed").get<std::uint64_t>();
    r.phase = e.at("phase").get<std::string>();
    r.iteration = e.at("iteration").get<long>();
    r.f = std::strtod(e.at("f").get<std::string>().c_str(), nullptr);
    r.grad_norm = std::strtod(e.at("grad_norm").get<std::string>().c_str(), nullptr);
    r.cum_grad_calls = e.at("cum_grad_calls").get<long>();
    r.cum_hvp_calls = e.at("cum_hvp_calls").get<long>();
    trace.rows.push_back(std::move(r));
  }
  return trace;
}

}  // namespace hfopt
