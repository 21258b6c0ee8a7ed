#pragma once

#include <string>
#include <utility>
#include <vector>

namespace occtime {

/// printf %.*g-style rendering via to_chars: locale independent, trailing
/// zeros stripped, deterministic across runs.
std::string format_double(double v, int significant_digits);

/// Clamp round-off spill so probability columns stay in [0, 1].
double clamp_probability(double p);

/// One CSV table: ordered `# key=value` metadata lines, a header row, data
/// rows. Summary scalars ride in the metadata.
struct ExperimentReport {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void meta(const std::string& key, const std::string& value);
  void meta(const std::string& key, double value, int precision);

  /// Render the full file. A non-empty timestamp adds a `# timestamp=` line
  /// after the other metadata; the timestamp is not part of the CSV body
  /// contract.
  std::string render(const std::string& timestamp) const;
};

/// Current UTC time as 2026-01-02T03:04:05Z.
std::string iso8601_utc_now();

}  // namespace occtime
