#pragma once

#include "occtime/config.hpp"
#include "occtime/report.hpp"

namespace occtime {

/// Everything one run produces: output path plus the report destined for it.
struct NamedReport {
  std::string path;
  ExperimentReport report;
};

struct RunOutput {
  std::vector<NamedReport> files;  // first entry is the primary table
};

/// Execute the configured experiment. Pure: no I/O, no clocks; identical
/// configs give identical outputs.
RunOutput run_experiment(const RunConfig& cfg);

}  // namespace occtime
