#include "sciontology/features.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>

#include "sciontology/error.hpp"

namespace sciontology {

namespace {

[[noreturn]] void row_error(const std::string& id, std::size_t row, const std::string& what) {
  throw ParseError("trace '" + id + "' row " + std::to_string(row) + ": " + what, row);
}

}  // namespace

double PowerTrace::max_power() const {
  double m = 0.0;
  for (const auto& s : samples) m = std::max(m, s.power_w);
  return m;
}

PowerTrace parse_trace(std::istream& in, std::string workload_id) {
  PowerTrace trace{std::move(workload_id), {}};
  std::string line;
  std::size_t row = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!header_seen) {
      if (line != kTraceHeader) {
        row_error(trace.workload_id, row, "expected header '" + std::string(kTraceHeader) + "'");
      }
      header_seen = true;
      continue;
    }
    if (line.empty()) {
      if (in.peek() == std::char_traits<char>::eof()) break;
      row_error(trace.workload_id, row, "blank row");
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      row_error(trace.workload_id, row, "malformed row '" + line + "'");
    }
    PowerSample s;
    const char* begin = line.data();
    const char* mid = begin + comma;
    const char* end = begin + line.size();
    auto [p1, e1] = std::from_chars(begin, mid, s.timestamp_ms);
    if (e1 != std::errc{} || p1 != mid || comma == 0) {
      row_error(trace.workload_id, row, "malformed timestamp in '" + line + "'");
    }
    auto [p2, e2] = std::from_chars(mid + 1, end, s.power_w, std::chars_format::fixed);
    if (e2 != std::errc{} || p2 != end || mid + 1 == end) {
      row_error(trace.workload_id, row, "malformed power in '" + line + "'");
    }
    if (!std::isfinite(s.power_w)) row_error(trace.workload_id, row, "non-finite power");
    if (s.power_w < 0.0) row_error(trace.workload_id, row, "negative power");
    if (!trace.samples.empty() && s.timestamp_ms < trace.samples.back().timestamp_ms) {
      row_error(trace.workload_id, row, "decreasing timestamp");
    }
    trace.samples.push_back(s);
  }
  if (!header_seen) throw ParseError("trace '" + trace.workload_id + "': empty input", 1);
  if (trace.samples.empty()) throw ParseError("trace '" + trace.workload_id + "': empty trace", row);
  return trace;
}

PowerTrace load_trace(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open trace '" + path.string() + "'");
  return parse_trace(in, path.stem().string());
}

std::vector<PowerTrace> load_trace_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw IoError("trace directory '" + dir.string() + "' does not exist");
  }
  std::vector<std::filesystem::path> files;
  for (const auto& de : std::filesystem::directory_iterator(dir)) {
    if (de.is_regular_file() && de.path().extension() == ".csv") files.push_back(de.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<PowerTrace> out;
  out.reserve(files.size());
  for (const auto& f : files) out.push_back(load_trace(f));
  return out;
}

FeatureVector featurize(const PowerTrace& trace, const BinningConfig& cfg, std::size_t* clamped) {
  if (cfg.n_bins < 2) throw InvalidArgument("n_bins must be >= 2");
  if (trace.samples.empty()) throw InvalidArgument("trace '" + trace.workload_id + "' is empty");
  double p_max = cfg.p_max.value_or(trace.max_power());
  if (cfg.p_max && !(*cfg.p_max > 0.0)) throw InvalidArgument("p_max must be > 0");
  // An all-zero trace with an implicit p_max lands entirely in bin 0.
  if (!(p_max > 0.0)) p_max = 1.0;

  const auto n = static_cast<std::size_t>(cfg.n_bins);
  std::vector<std::size_t> counts(n, 0);
  std::size_t over = 0;
  for (const auto& s : trace.samples) {
    std::size_t bin;
    if (s.power_w >= p_max) {
      bin = n - 1;
      if (s.power_w > p_max) ++over;
    } else {
      bin = std::min(n - 1, static_cast<std::size_t>(s.power_w * static_cast<double>(n) / p_max));
    }
    ++counts[bin];
  }
  if (clamped) *clamped = over;

  FeatureVector fv{trace.workload_id, std::vector<double>(n, 0.0)};
  const auto total = static_cast<double>(trace.samples.size());
  for (std::size_t i = 0; i < n; ++i) fv.values[i] = static_cast<double>(counts[i]) / total;
  return fv;
}

std::vector<FeatureVector> featurize_all(std::span<const PowerTrace> traces, const BinningConfig& cfg,
                                         std::vector<std::string>* warnings) {
  BinningConfig shared = cfg;
  if (!shared.p_max) {
    double m = 0.0;
    for (const auto& t : traces) m = std::max(m, t.max_power());
    shared.p_max = m > 0.0 ? m : 1.0;
  }
  std::vector<FeatureVector> out;
  out.reserve(traces.size());
  for (const auto& t : traces) {
    std::size_t clamped = 0;
    out.push_back(featurize(t, shared, &clamped));
    if (clamped > 0 && warnings) {
      warnings->push_back("trace '" + t.workload_id + "': " + std::to_string(clamped) +
                          " sample(s) above p_max clamped into the top bin");
    }
  }
  return out;
}

}  // namespace sciontology
