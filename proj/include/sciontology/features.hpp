#pragma once

// Power traces (CSV) and their N-bin normalized power-distribution histograms.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sciontology {

struct PowerSample {
  std::int64_t timestamp_ms = 0;
  double power_w = 0.0;

  bool operator==(const PowerSample&) const = default;
};

/// Non-empty; timestamps non-decreasing; powers finite and >= 0.
struct PowerTrace {
  std::string workload_id;
  std::vector<PowerSample> samples;

  double max_power() const;
  bool operator==(const PowerTrace&) const = default;
};

inline constexpr std::string_view kTraceHeader = "timestamp_ms,power_w";

/// Reads the trace CSV format: header line "timestamp_ms,power_w", then
/// "<integer>,<decimal>" rows. Throws ParseError carrying the 1-based row
/// number (the header is row 1).
PowerTrace parse_trace(std::istream& in, std::string workload_id);

/// workload id = file stem.
PowerTrace load_trace(const std::filesystem::path& path);

/// Every *.csv in `dir`, ordered by file name.
std::vector<PowerTrace> load_trace_dir(const std::filesystem::path& dir);

/// Bin i covers [i*p_max/n, (i+1)*p_max/n); the last bin is closed above and
/// also receives (with a warning) any sample above p_max.
struct BinningConfig {
  int n_bins = 16;
  std::optional<double> p_max;  // default: max power across the traces being featurized
};

struct FeatureVector {
  std::string workload_id;
  std::vector<double> values;

  bool operator==(const FeatureVector&) const = default;
};

/// Normalized sample-count histogram. `clamped`, if given, receives the number
/// of samples above p_max. Throws InvalidArgument for n_bins < 2 or p_max <= 0.
FeatureVector featurize(const PowerTrace& trace, const BinningConfig& cfg,
                        std::size_t* clamped = nullptr);

/// Featurizes a trace set against a shared p_max (cfg.p_max or the set's max).
/// Clamping notices are appended to `warnings`.
std::vector<FeatureVector> featurize_all(std::span<const PowerTrace> traces, const BinningConfig& cfg,
                                         std::vector<std::string>* warnings = nullptr);

}  // namespace sciontology
