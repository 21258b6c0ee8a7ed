#pragma once

#include <optional>
#include <string>
#include <vector>

#include "occtime/linalg.hpp"
#include "occtime/quadrature.hpp"

namespace occtime {

enum class Experiment { decay, occurrence, rovelli, oru, zeno, sweep };

std::string experiment_name(Experiment e);
std::optional<Experiment> experiment_from_name(const std::string& name);

/// One key = value assignment with its origin ("path:line" or "--param") for
/// error messages.
struct ConfigEntry {
  std::string key;
  std::string value;
  std::string source;
};

/// Line-oriented `key = value` file with `#` comments. Duplicate keys in one
/// file are errors.
std::vector<ConfigEntry> read_config_file(const std::string& path);

/// Validated parameters of one run. Fields are meaningful per experiment;
/// parse_config fills defaults and rejects keys the chosen experiment and
/// model do not use.
struct RunConfig {
  Experiment experiment;

  std::string model;  // rabi | rovelli | exponential
  double lambda = 1.0;
  double omega = 1.0;
  double duration = 1.0;  // rovelli T
  Complex c_a;
  Complex c_b;
  double gamma = 0.0;  // uniform absorption rate, mode = absorptive only

  double t_min = 0.0;
  double t_max = 0.0;
  bool absorptive_mode = false;
  int partitions = 8;
  int points = 101;
  QuadratureSpec quad;

  std::vector<double> times;  // oru
  std::vector<int> outcomes;  // oru

  double tau = 0.0;            // zeno, sweep
  std::vector<int> n_values;   // zeno
  std::string protocol;        // sweep: pulsed | continuous
  std::vector<double> couplings;

  std::string out;
  int precision = 12;
  bool timestamp = true;
};

/// Merge file entries and --param overrides (later entries win), fill
/// defaults, validate every invariant. Throws ParseError for malformed or
/// unknown keys, ValidationError for violated invariants.
RunConfig parse_config(Experiment experiment,
                       const std::vector<ConfigEntry>& entries);

// exposed for tests
double parse_double_value(const std::string& text, const std::string& where);
long parse_int_value(const std::string& text, const std::string& where);
Complex parse_complex_value(const std::string& text, const std::string& where);

}  // namespace occtime
