#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "occtime/experiments.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::string out_path;
  std::vector<std::string> params;
  bool no_timestamp = false;
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw occtime::IoError("cannot open output file: " + path);
  out << content;
  out.flush();
  if (!out) throw occtime::IoError("failed writing output file: " + path);
}

int run(occtime::Experiment experiment, const CommonFlags& flags) {
  using namespace occtime;

  std::vector<ConfigEntry> entries;
  if (!flags.config_path.empty()) {
    entries = read_config_file(flags.config_path);
  }
  for (const std::string& p : flags.params) {
    const std::size_t eq = p.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ParseError("--param `" + p + "`: expected key=value");
    }
    entries.push_back(ConfigEntry{p.substr(0, eq), p.substr(eq + 1), "--param"});
  }
  if (!flags.out_path.empty()) {
    entries.push_back(ConfigEntry{"out", flags.out_path, "--out"});
  }

  RunConfig cfg = parse_config(experiment, entries);
  if (flags.no_timestamp) cfg.timestamp = false;

  const RunOutput output = run_experiment(cfg);
  const std::string stamp = cfg.timestamp ? iso8601_utc_now() : "";
  for (const NamedReport& file : output.files) {
    write_file(file.path, file.report.render(stamp));
  }

  std::cout << experiment_name(experiment) << ": wrote";
  for (const NamedReport& file : output.files) std::cout << " " << file.path;
  std::cout << "\n";
  for (const auto& [key, value] : output.files.front().report.metadata) {
    std::cout << "  " << key << " = " << value << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-dimensional quantum occurrence-time experiments"};
  app.require_subcommand(1);

  std::vector<std::pair<occtime::Experiment, CLI::App*>> subcommands;
  CommonFlags flags;
  for (const auto& [experiment, blurb] :
       std::initializer_list<std::pair<occtime::Experiment, const char*>>{
           {occtime::Experiment::decay, "Exponential decay reference table"},
           {occtime::Experiment::occurrence,
            "Occurrence-time distribution and normalized POVM"},
           {occtime::Experiment::rovelli,
            "Pointer-correlation probability curve P(t)"},
           {occtime::Experiment::oru,
            "Joint probability of a repeated-measurement outcome string"},
           {occtime::Experiment::zeno, "Survival scan over measurement counts"},
           {occtime::Experiment::sweep,
            "Transition probability against coupling strength"}}) {
    CLI::App* sub = app.add_subcommand(occtime::experiment_name(experiment), blurb);
    sub->add_option("--config", flags.config_path, "key = value config file");
    sub->add_option("--out", flags.out_path, "output CSV path");
    sub->add_option("--param", flags.params,
                    "key=value override (repeatable)");
    sub->add_flag("--no-timestamp", flags.no_timestamp,
                  "omit the timestamp metadata line");
    subcommands.emplace_back(experiment, sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    for (const auto& [experiment, sub] : subcommands) {
      if (sub->parsed()) return run(experiment, flags);
    }
    std::cerr << "error: no experiment selected\n";
    return 2;
  } catch (const occtime::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const occtime::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 4;
  } catch (const occtime::Error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}
