#include "occtime/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace occtime {

std::string experiment_name(Experiment e) {
  switch (e) {
    case Experiment::decay: return "decay";
    case Experiment::occurrence: return "occurrence";
    case Experiment::rovelli: return "rovelli";
    case Experiment::oru: return "oru";
    case Experiment::zeno: return "zeno";
    case Experiment::sweep: return "sweep";
  }
  return "?";
}

std::optional<Experiment> experiment_from_name(const std::string& name) {
  for (Experiment e : {Experiment::decay, Experiment::occurrence,
                       Experiment::rovelli, Experiment::oru, Experiment::zeno,
                       Experiment::sweep}) {
    if (experiment_name(e) == name) return e;
  }
  return std::nullopt;
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

std::vector<ConfigEntry> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::vector<ConfigEntry> entries;
  std::set<std::string> seen;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string source = path + ":" + std::to_string(lineno);
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ParseError(source + ": expected `key = value`");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) throw ParseError(source + ": empty key");
    if (value.empty()) throw ParseError(source + ": empty value for key `" + key + "`");
    if (!seen.insert(key).second) {
      throw ParseError(source + ": duplicate key `" + key + "`");
    }
    entries.push_back(ConfigEntry{key, value, source});
  }
  return entries;
}

double parse_double_value(const std::string& text, const std::string& where) {
  const std::string t = trim(text);
  double v = 0.0;
  const char* begin = t.data();
  const char* end = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end) {
    throw ParseError(where + ": `" + text + "` is not a number");
  }
  if (!std::isfinite(v)) {
    throw ParseError(where + ": `" + text + "` is not finite");
  }
  return v;
}

long parse_int_value(const std::string& text, const std::string& where) {
  const std::string t = trim(text);
  long v = 0;
  const char* begin = t.data();
  const char* end = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end) {
    throw ParseError(where + ": `" + text + "` is not an integer");
  }
  return v;
}

Complex parse_complex_value(const std::string& text, const std::string& where) {
  std::string t = trim(text);
  if (t.empty()) throw ParseError(where + ": empty complex value");
  if (t.back() != 'i' && t.back() != 'I') {
    return Complex(parse_double_value(t, where), 0.0);
  }
  t.pop_back();
  // split the trailing imaginary term off at a +/- that is not an exponent
  // sign and not the leading sign
  std::size_t split = std::string::npos;
  for (std::size_t k = t.size(); k-- > 1;) {
    if ((t[k] == '+' || t[k] == '-') && t[k - 1] != 'e' && t[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  const auto unit_or_number = [&where](const std::string& s) {
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    // from_chars takes no leading '+'
    return parse_double_value(s.front() == '+' ? s.substr(1) : s, where);
  };
  if (split == std::string::npos) {
    return Complex(0.0, unit_or_number(t));
  }
  const double re = parse_double_value(t.substr(0, split), where);
  const double im = unit_or_number(t.substr(split));
  return Complex(re, im);
}

namespace {

std::vector<double> parse_double_list(const std::string& text,
                                      const std::string& where) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(parse_double_value(item, where));
  }
  if (out.empty()) throw ParseError(where + ": empty list");
  return out;
}

std::vector<long> parse_int_list(const std::string& text,
                                 const std::string& where) {
  std::vector<long> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(parse_int_value(item, where));
  }
  if (out.empty()) throw ParseError(where + ": empty list");
  return out;
}

// Later entries override earlier ones; every surviving entry must be consumed
// by the experiment, otherwise the key is unknown and the run is refused.
class KeyValues {
 public:
  explicit KeyValues(const std::vector<ConfigEntry>& entries) {
    for (const ConfigEntry& e : entries) map_[e.key] = e;
  }

  std::optional<ConfigEntry> take(const std::string& key) {
    auto it = map_.find(key);
    if (it == map_.end()) return std::nullopt;
    ConfigEntry e = it->second;
    map_.erase(it);
    return e;
  }

  bool peek(const std::string& key) const { return map_.count(key) > 0; }

  void require_empty() const {
    if (map_.empty()) return;
    const ConfigEntry& e = map_.begin()->second;
    throw ParseError(e.source + ": unknown key `" + e.key +
                     "` for this experiment/model");
  }

 private:
  std::map<std::string, ConfigEntry> map_;
};

double take_double(KeyValues& kv, const std::string& key, double fallback) {
  auto e = kv.take(key);
  return e ? parse_double_value(e->value, e->source + " (" + key + ")") : fallback;
}

long take_int(KeyValues& kv, const std::string& key, long fallback) {
  auto e = kv.take(key);
  return e ? parse_int_value(e->value, e->source + " (" + key + ")") : fallback;
}

std::string take_string(KeyValues& kv, const std::string& key,
                        const std::string& fallback) {
  auto e = kv.take(key);
  return e ? trim(e->value) : fallback;
}

Complex take_complex(KeyValues& kv, const std::string& key, Complex fallback) {
  auto e = kv.take(key);
  return e ? parse_complex_value(e->value, e->source + " (" + key + ")")
           : fallback;
}

void require_positive(double v, const std::string& what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream os;
    os << what << " must be positive and finite, got " << v;
    throw ValidationError(os.str());
  }
}

void validate_amplitudes(Complex a, Complex b) {
  const double n = std::norm(a) + std::norm(b);
  if (std::abs(n - 1.0) > 1e-12) {
    std::ostringstream os;
    os << "|c_a|^2 + |c_b|^2 = " << n << " must equal 1 within 1e-12";
    throw BadAmplitudes(os.str());
  }
}

void read_model_params(KeyValues& kv, RunConfig& cfg,
                       const std::string& default_model) {
  cfg.model = take_string(kv, "model", default_model);
  if (cfg.model == "rabi") {
    cfg.omega = take_double(kv, "omega", 1.0);
    require_positive(cfg.omega, "omega");
  } else if (cfg.model == "rovelli") {
    cfg.duration = take_double(kv, "T", 1.0);
    require_positive(cfg.duration, "T");
    const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
    cfg.c_a = take_complex(kv, "c_a", Complex(inv_sqrt2, 0.0));
    cfg.c_b = take_complex(kv, "c_b", Complex(inv_sqrt2, 0.0));
    validate_amplitudes(cfg.c_a, cfg.c_b);
  } else if (cfg.model == "exponential") {
    cfg.lambda = take_double(kv, "lambda", 1.0);
    require_positive(cfg.lambda, "lambda");
  } else {
    throw ValidationError("unknown model `" + cfg.model +
                          "` (expected rabi, rovelli or exponential)");
  }
}

void read_quadrature(KeyValues& kv, RunConfig& cfg) {
  const std::string rule = take_string(kv, "rule", "composite-simpson");
  if (rule == "composite-simpson") {
    cfg.quad.rule = QuadratureSpec::Rule::composite_simpson;
  } else if (rule == "adaptive") {
    cfg.quad.rule = QuadratureSpec::Rule::adaptive;
  } else {
    throw ValidationError("unknown quadrature rule `" + rule + "`");
  }
  cfg.quad.abs_tol = take_double(kv, "abs_tol", cfg.quad.abs_tol);
  cfg.quad.rel_tol = take_double(kv, "rel_tol", cfg.quad.rel_tol);
  cfg.quad.max_evals = take_int(kv, "max_evals", cfg.quad.max_evals);
  cfg.quad.validate();
}

void read_grid(KeyValues& kv, RunConfig& cfg, double default_t_max,
               int default_points) {
  cfg.t_min = take_double(kv, "t_min", 0.0);
  cfg.t_max = take_double(kv, "t_max", default_t_max);
  cfg.points = int(take_int(kv, "points", default_points));
  if (!(cfg.t_min < cfg.t_max)) {
    std::ostringstream os;
    os << "t_min = " << cfg.t_min << " must be below t_max = " << cfg.t_max;
    throw ValidationError(os.str());
  }
  if (cfg.points < 2) throw ValidationError("points must be >= 2");
}

}  // namespace

RunConfig parse_config(Experiment experiment,
                       const std::vector<ConfigEntry>& entries) {
  KeyValues kv(entries);
  RunConfig cfg;
  cfg.experiment = experiment;

  cfg.out = take_string(kv, "out", experiment_name(experiment) + ".csv");
  cfg.precision = int(take_int(kv, "precision", 12));
  if (cfg.precision < 3 || cfg.precision > 17) {
    throw ValidationError("precision must be in [3, 17]");
  }

  switch (experiment) {
    case Experiment::decay: {
      cfg.lambda = take_double(kv, "lambda", 1.0);
      require_positive(cfg.lambda, "lambda");
      read_grid(kv, cfg, 10.0 / cfg.lambda, 101);
      if (cfg.t_min < 0.0) throw ValidationError("decay: t_min must be >= 0");
      break;
    }
    case Experiment::occurrence: {
      read_model_params(kv, cfg, "rabi");
      const std::string default_mode =
          cfg.model == "exponential" ? "absorptive" : "window";
      const std::string mode = take_string(kv, "mode", default_mode);
      if (mode == "window") {
        cfg.absorptive_mode = false;
      } else if (mode == "absorptive") {
        cfg.absorptive_mode = true;
      } else {
        throw ValidationError("mode must be window or absorptive");
      }
      if (cfg.model == "exponential" && !cfg.absorptive_mode) {
        throw ValidationError("model exponential requires mode = absorptive");
      }
      if (cfg.model == "rovelli" && cfg.absorptive_mode) {
        throw ValidationError("model rovelli supports mode = window only");
      }
      if (cfg.model == "rabi" && cfg.absorptive_mode) {
        cfg.gamma = take_double(kv, "gamma", 0.0);
        require_positive(cfg.gamma, "gamma (required in absorptive mode)");
      }
      double default_t_max = 1.0;
      if (cfg.model == "rabi") {
        default_t_max = 2.0 * std::numbers::pi / cfg.omega;
      } else if (cfg.model == "rovelli") {
        default_t_max = 2.0 * cfg.duration;
      } else {
        default_t_max = 30.0 / cfg.lambda;
      }
      read_grid(kv, cfg, default_t_max, 101);
      cfg.partitions = int(take_int(kv, "partitions", 8));
      if (cfg.partitions < 1 || cfg.partitions > 4096) {
        throw ValidationError("partitions must be in [1, 4096]");
      }
      read_quadrature(kv, cfg);
      break;
    }
    case Experiment::rovelli: {
      cfg.model = "rovelli";
      cfg.duration = take_double(kv, "T", 1.0);
      require_positive(cfg.duration, "T");
      const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
      cfg.c_a = take_complex(kv, "c_a", Complex(inv_sqrt2, 0.0));
      cfg.c_b = take_complex(kv, "c_b", Complex(inv_sqrt2, 0.0));
      validate_amplitudes(cfg.c_a, cfg.c_b);
      read_grid(kv, cfg, 2.0 * cfg.duration, 101);
      break;
    }
    case Experiment::oru: {
      read_model_params(kv, cfg, "rovelli");
      if (cfg.model == "exponential") {
        throw ValidationError("oru: model must be rabi or rovelli");
      }
      auto times_entry = kv.take("times");
      if (!times_entry) throw ValidationError("oru: key `times` is required");
      cfg.times = parse_double_list(times_entry->value,
                                    times_entry->source + " (times)");
      auto outcome_entry = kv.take("outcomes");
      if (!outcome_entry) {
        throw ValidationError("oru: key `outcomes` is required");
      }
      const std::vector<long> raw = parse_int_list(
          outcome_entry->value, outcome_entry->source + " (outcomes)");
      cfg.outcomes.assign(raw.begin(), raw.end());
      if (cfg.times.size() != cfg.outcomes.size()) {
        throw ValidationError("oru: times and outcomes differ in length");
      }
      for (std::size_t i = 0; i < cfg.times.size(); ++i) {
        if (i > 0 && !(cfg.times[i] > cfg.times[i - 1])) {
          throw ValidationError("oru: times must be strictly increasing");
        }
        if (cfg.outcomes[i] != 0 && cfg.outcomes[i] != 1) {
          throw ValidationError("oru: outcomes must be 0 or 1");
        }
      }
      break;
    }
    case Experiment::zeno: {
      read_model_params(kv, cfg, "rabi");
      if (cfg.model == "exponential") {
        throw ValidationError("zeno: model must be rabi or rovelli");
      }
      const double default_tau = cfg.model == "rabi"
                                     ? std::numbers::pi / cfg.omega
                                     : cfg.duration;
      cfg.tau = take_double(kv, "tau", default_tau);
      require_positive(cfg.tau, "tau");
      auto n_entry = kv.take("n_values");
      if (n_entry) {
        const std::vector<long> raw =
            parse_int_list(n_entry->value, n_entry->source + " (n_values)");
        cfg.n_values.assign(raw.begin(), raw.end());
      } else {
        for (int n = 1; n <= 1024; n *= 2) cfg.n_values.push_back(n);
      }
      for (std::size_t i = 0; i < cfg.n_values.size(); ++i) {
        if (cfg.n_values[i] < 1 ||
            (i > 0 && cfg.n_values[i] <= cfg.n_values[i - 1])) {
          throw ValidationError("zeno: n_values must be positive and increasing");
        }
      }
      break;
    }
    case Experiment::sweep: {
      read_model_params(kv, cfg, "rabi");
      if (cfg.model == "exponential") {
        throw ValidationError("sweep: model must be rabi or rovelli");
      }
      const double default_tau = cfg.model == "rabi"
                                     ? std::numbers::pi / cfg.omega
                                     : cfg.duration;
      cfg.tau = take_double(kv, "tau", default_tau);
      require_positive(cfg.tau, "tau");
      cfg.protocol = take_string(kv, "protocol", "pulsed");
      if (cfg.protocol != "pulsed" && cfg.protocol != "continuous") {
        throw ValidationError("protocol must be pulsed or continuous");
      }
      auto c_entry = kv.take("couplings");
      if (c_entry) {
        cfg.couplings = parse_double_list(c_entry->value,
                                          c_entry->source + " (couplings)");
      } else if (cfg.protocol == "pulsed") {
        for (int n = 1; n <= 1024; n *= 2) cfg.couplings.push_back(double(n));
      } else {
        cfg.couplings = {0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0};
      }
      for (double g : cfg.couplings) {
        if (!(g >= 0.0) || !std::isfinite(g)) {
          throw ValidationError("sweep: couplings must be >= 0 and finite");
        }
      }
      break;
    }
  }

  kv.require_empty();
  return cfg;
}

}  // namespace occtime
