#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "occtime/experiments.hpp"

using namespace occtime;

namespace {

std::filesystem::path write_temp_config(const std::string& content) {
  static int counter = 0;
  const auto path = std::filesystem::temp_directory_path() /
                    ("occtime_cfg_" + std::to_string(++counter) + ".cfg");
  std::ofstream out(path);
  out << content;
  return path;
}

std::vector<ConfigEntry> params(
    std::initializer_list<std::pair<std::string, std::string>> kv) {
  std::vector<ConfigEntry> entries;
  for (const auto& [k, v] : kv) entries.push_back({k, v, "--param"});
  return entries;
}

}  // namespace

TEST_CASE("value parsers") {
  CHECK(parse_double_value("1.5e-3", "t") == doctest::Approx(0.0015));
  CHECK_THROWS_AS(parse_double_value("1.5x", "t"), ParseError);
  CHECK_THROWS_AS(parse_double_value("", "t"), ParseError);
  CHECK(parse_int_value("42", "t") == 42);
  CHECK_THROWS_AS(parse_int_value("4.2", "t"), ParseError);

  CHECK(parse_complex_value("0.6", "t") == Complex(0.6, 0.0));
  CHECK(parse_complex_value("0.6+0.8i", "t") == Complex(0.6, 0.8));
  CHECK(parse_complex_value("0.6-0.8i", "t") == Complex(0.6, -0.8));
  CHECK(parse_complex_value("-0.8i", "t") == Complex(0.0, -0.8));
  CHECK(parse_complex_value("i", "t") == Complex(0.0, 1.0));
  CHECK(parse_complex_value("-i", "t") == Complex(0.0, -1.0));
  CHECK(parse_complex_value("1e-2+2e-3i", "t") == Complex(0.01, 0.002));
  CHECK_THROWS_AS(parse_complex_value("foo+2i", "t"), ParseError);
}

TEST_CASE("config files parse and reject malformed lines") {
  const auto path = write_temp_config(
      "# comment\n"
      "lambda = 1.5   # trailing comment\n"
      "\n"
      "t_max = 4\n");
  const auto entries = read_config_file(path.string());
  REQUIRE(entries.size() == 2);
  CHECK(entries[0].key == "lambda");
  CHECK(entries[0].value == "1.5");
  CHECK(entries[1].source == path.string() + ":4");
  std::filesystem::remove(path);

  const auto bad = write_temp_config("lambda 1.5\n");
  CHECK_THROWS_AS(read_config_file(bad.string()), ParseError);
  std::filesystem::remove(bad);

  const auto dup = write_temp_config("a = 1\na = 2\n");
  CHECK_THROWS_AS(read_config_file(dup.string()), ParseError);
  std::filesystem::remove(dup);

  CHECK_THROWS_AS(read_config_file("/nonexistent/occtime.cfg"), IoError);
}

TEST_CASE("minimal decay config fills defaults") {
  const RunConfig cfg = parse_config(Experiment::decay, params({{"lambda", "1.0"}}));
  CHECK(cfg.lambda == 1.0);
  CHECK(cfg.t_min == 0.0);
  CHECK(cfg.t_max == 10.0);
  CHECK(cfg.points == 101);
  CHECK(cfg.precision == 12);
  CHECK(cfg.out == "decay.csv");
}

TEST_CASE("unknown keys are refused fail-closed") {
  CHECK_THROWS_AS(parse_config(Experiment::decay,
                               params({{"lambda", "1.0"}, {"bogus", "3"}})),
                  ParseError);
  // a key of another model counts as unknown
  CHECK_THROWS_AS(
      parse_config(Experiment::occurrence,
                   params({{"model", "rabi"}, {"T", "2.0"}})),
      ParseError);
}

TEST_CASE("invariant violations are validation errors") {
  CHECK_THROWS_AS(
      parse_config(Experiment::rovelli,
                   params({{"c_a", "0.6"}, {"c_b", "0.7"}})),
      BadAmplitudes);
  CHECK_THROWS_AS(
      parse_config(Experiment::decay,
                   params({{"lambda", "1"}, {"t_min", "3"}, {"t_max", "1"}})),
      ValidationError);
  CHECK_THROWS_AS(parse_config(Experiment::decay, params({{"lambda", "-2"}})),
                  ValidationError);
  CHECK_THROWS_AS(
      parse_config(Experiment::oru, params({{"model", "rabi"},
                                            {"times", "1,2"},
                                            {"outcomes", "0,1,1"}})),
      ValidationError);
  CHECK_THROWS_AS(
      parse_config(Experiment::oru, params({{"model", "rabi"},
                                            {"times", "2,1"},
                                            {"outcomes", "0,1"}})),
      ValidationError);
  CHECK_THROWS_AS(
      parse_config(Experiment::zeno, params({{"n_values", "4,2"}})),
      ValidationError);
  CHECK_THROWS_AS(
      parse_config(Experiment::sweep, params({{"protocol", "sometimes"}})),
      ValidationError);
  CHECK_THROWS_AS(
      parse_config(Experiment::occurrence,
                   params({{"model", "exponential"}, {"mode", "window"}})),
      ValidationError);
}

TEST_CASE("float formatting is shortest-%g style") {
  CHECK(format_double(1.0, 12) == "1");
  CHECK(format_double(0.5, 12) == "0.5");
  CHECK(format_double(-0.0, 12) == "0");
  CHECK(format_double(1.0 / 3.0, 12) == "0.333333333333");
  CHECK(format_double(1e-9, 12) == "1e-09");
  CHECK(format_double(0.1234567890123456, 6) == "0.123457");
}

TEST_CASE("reports render metadata, header and rows") {
  ExperimentReport r;
  r.meta("experiment", "decay");
  r.meta("lambda", 1.0, 12);
  r.columns = {"t", "density"};
  r.rows.push_back({"0", "1"});
  r.rows.push_back({"1", "0.5"});
  CHECK(r.render("") ==
        "# experiment=decay\n# lambda=1\nt,density\n0,1\n1,0.5\n");
  CHECK(r.render("2026-01-02T03:04:05Z") ==
        "# experiment=decay\n# lambda=1\n# timestamp=2026-01-02T03:04:05Z\n"
        "t,density\n0,1\n1,0.5\n");
}

TEST_CASE("decay run matches the closed form at full precision") {
  const RunConfig cfg = parse_config(
      Experiment::decay,
      params({{"lambda", "1"}, {"t_max", "5"}, {"points", "11"}}));
  const RunOutput out = run_experiment(cfg);
  REQUIRE(out.files.size() == 1);
  const ExperimentReport& r = out.files.front().report;
  REQUIRE(r.rows.size() == 11);
  for (const auto& row : r.rows) {
    const double t = std::stod(row[0]);
    CHECK(row[1] == format_double(std::exp(-t), 12));
    CHECK(row[2] == format_double(1.0 - std::exp(-t), 12));
  }
}

TEST_CASE("identical configs give identical rendered output") {
  const auto entries = params({{"model", "rabi"},
                               {"omega", "1"},
                               {"partitions", "6"},
                               {"points", "31"}});
  const RunConfig cfg1 = parse_config(Experiment::occurrence, entries);
  const RunConfig cfg2 = parse_config(Experiment::occurrence, entries);
  const RunOutput a = run_experiment(cfg1);
  const RunOutput b = run_experiment(cfg2);
  REQUIRE(a.files.size() == b.files.size());
  for (std::size_t i = 0; i < a.files.size(); ++i) {
    CHECK(a.files[i].path == b.files[i].path);
    CHECK(a.files[i].report.render("") == b.files[i].report.render(""));
  }
}

TEST_CASE("probability columns stay in the unit interval") {
  for (const auto& [experiment, entries] :
       std::vector<std::pair<Experiment, std::vector<ConfigEntry>>>{
           {Experiment::occurrence,
            params({{"model", "rovelli"}, {"partitions", "5"}})},
           {Experiment::zeno, params({{"n_values", "1,2,4,8"}})},
           {Experiment::oru, params({{"model", "rovelli"},
                                     {"times", "0.2,0.5,1.0,1.3,2.0"},
                                     {"outcomes", "0,0,1,1,0"}})}}) {
    const RunOutput out = run_experiment(parse_config(experiment, entries));
    const ExperimentReport& r = out.files.front().report;
    const std::size_t last = r.columns.size() - 1;
    for (const auto& row : r.rows) {
      const double p = std::stod(row[last]);
      CHECK(p >= 0.0);
      CHECK(p <= 1.0);
    }
  }
}
