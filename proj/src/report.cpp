#include "occtime/report.hpp"

#include <algorithm>
#include <charconv>
#include <ctime>

namespace occtime {

std::string format_double(double v, int significant_digits) {
  if (v == 0.0) v = 0.0;  // fold -0
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v,
                           std::chars_format::general, significant_digits);
  return std::string(buf, res.ptr);
}

double clamp_probability(double p) {
  return std::min(1.0, std::max(0.0, p));
}

void ExperimentReport::meta(const std::string& key, const std::string& value) {
  metadata.emplace_back(key, value);
}

void ExperimentReport::meta(const std::string& key, double value, int precision) {
  metadata.emplace_back(key, format_double(value, precision));
}

std::string ExperimentReport::render(const std::string& timestamp) const {
  std::string out;
  for (const auto& [key, value] : metadata) {
    out += "# ";
    out += key;
    out += '=';
    out += value;
    out += '\n';
  }
  if (!timestamp.empty()) {
    out += "# timestamp=";
    out += timestamp;
    out += '\n';
  }
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i > 0) out += ',';
    out += columns[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out += ',';
      out += row[i];
    }
    out += '\n';
  }
  return out;
}

std::string iso8601_utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace occtime
