#include "occtime/experiments.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "occtime/models.hpp"
#include "occtime/occurrence.hpp"
#include "occtime/zeno.hpp"

namespace occtime {

namespace {

constexpr const char* kVersion = "0.1.0";

std::vector<double> uniform_grid(double lo, double hi, int points) {
  std::vector<double> grid(points);
  const double h = (hi - lo) / double(points - 1);
  for (int k = 0; k < points; ++k) {
    grid[k] = k + 1 == points ? hi : lo + k * h;
  }
  return grid;
}

std::string with_density_suffix(const std::string& path) {
  const std::size_t slash = path.find_last_of('/');
  const std::size_t dot = path.find_last_of('.');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) {
    return path.substr(0, dot) + "_density" + path.substr(dot);
  }
  return path + "_density.csv";
}

struct ModelParts {
  Hamiltonian hamiltonian;
  Projector event;
  StateVector initial;
};

ModelParts unitary_model_parts(const RunConfig& cfg) {
  if (cfg.model == "rabi") {
    RabiModel m(cfg.omega);
    return ModelParts{m.hamiltonian(), m.excited(), m.ground()};
  }
  RovelliModel m(cfg.duration, cfg.c_a, cfg.c_b);
  return ModelParts{m.hamiltonian(), m.pointer_match(), m.initial_state()};
}

std::string complex_repr(Complex c, int precision) {
  std::string s = format_double(c.real(), precision);
  if (c.imag() != 0.0) {
    if (c.imag() > 0.0) s += "+";
    s += format_double(c.imag(), precision) + "i";
  }
  return s;
}

void model_metadata(const RunConfig& cfg, ExperimentReport& r) {
  r.meta("model", cfg.model);
  if (cfg.model == "rabi") {
    r.meta("omega", cfg.omega, cfg.precision);
  } else if (cfg.model == "rovelli") {
    r.meta("T", cfg.duration, cfg.precision);
    r.meta("c_a", complex_repr(cfg.c_a, cfg.precision));
    r.meta("c_b", complex_repr(cfg.c_b, cfg.precision));
  } else {
    r.meta("lambda", cfg.lambda, cfg.precision);
  }
}

ExperimentReport base_report(const RunConfig& cfg) {
  ExperimentReport r;
  r.meta("experiment", experiment_name(cfg.experiment));
  r.meta("version", kVersion);
  return r;
}

RunOutput run_decay(const RunConfig& cfg) {
  ExperimentReport r = base_report(cfg);
  r.meta("lambda", cfg.lambda, cfg.precision);
  r.meta("t_min", cfg.t_min, cfg.precision);
  r.meta("t_max", cfg.t_max, cfg.precision);
  r.meta("points", std::to_string(cfg.points));
  r.columns = {"t", "density", "cdf"};

  ExponentialModel model(cfg.lambda);
  for (double t : uniform_grid(cfg.t_min, cfg.t_max, cfg.points)) {
    r.rows.push_back({format_double(t, cfg.precision),
                      format_double(model.density(t), cfg.precision),
                      format_double(model.has_decayed(t), cfg.precision)});
  }
  r.meta("interval_probability_total", 1.0, cfg.precision);
  return RunOutput{{NamedReport{cfg.out, std::move(r)}}};
}

RunOutput run_occurrence(const RunConfig& cfg) {
  ExperimentReport r = base_report(cfg);
  model_metadata(cfg, r);
  r.meta("mode", cfg.absorptive_mode ? "absorptive" : "window");
  if (cfg.model == "rabi" && cfg.absorptive_mode) {
    r.meta("gamma", cfg.gamma, cfg.precision);
  }
  r.meta("t_min", cfg.t_min, cfg.precision);
  r.meta("t_max", cfg.t_max, cfg.precision);
  r.meta("partitions", std::to_string(cfg.partitions));
  r.meta("abs_tol", cfg.quad.abs_tol, cfg.precision);
  r.meta("rel_tol", cfg.quad.rel_tol, cfg.precision);

  const TimeHorizon horizon(cfg.t_min, cfg.t_max,
                            cfg.absorptive_mode ? TimeHorizon::Mode::absorptive
                                                : TimeHorizon::Mode::window);

  StateVector psi = StateVector::basis(2, 0);
  std::optional<EventFamily> family;
  if (cfg.model == "exponential") {
    AbsorptiveExponential surrogate = make_absorptive_exponential(cfg.lambda);
    psi = surrogate.initial;
    family = EventFamily::absorptive(std::move(surrogate.generator),
                                     Effect(surrogate.flag));
  } else {
    ModelParts parts = unitary_model_parts(cfg);
    psi = parts.initial;
    if (cfg.absorptive_mode) {
      AbsorptiveGenerator gen(
          parts.hamiltonian,
          HermitianOperator(cfg.gamma * identity(parts.hamiltonian.dim())));
      family = EventFamily::absorptive(std::move(gen), Effect(parts.event));
    } else {
      family = EventFamily::unitary(parts.hamiltonian, Effect(parts.event));
    }
  }

  const OccurrenceDistribution dist = build_occurrence_distribution(
      *family, horizon, cfg.partitions, cfg.quad);

  r.columns = {"t1", "t2", "probability"};
  double total = 0.0;
  double worst_residual = 0.0;
  const DensityOperator rho = DensityOperator::pure(psi);
  for (std::size_t k = 0; k < dist.partition.size(); ++k) {
    const double p = occurrence_probability(psi, dist.interval_ops[k],
                                            dist.first_moment);
    total += p;
    worst_residual = std::max(worst_residual, consistency_residual(rho, dist, k));
    r.rows.push_back({format_double(dist.partition[k].t1, cfg.precision),
                      format_double(dist.partition[k].t2, cfg.precision),
                      format_double(clamp_probability(p), cfg.precision)});
  }
  r.meta("normalization_residual", std::abs(total - 1.0), 3);
  r.meta("max_consistency_residual", worst_residual, 3);
  r.meta("support_rank", std::to_string(dist.support.rank()));
  r.meta("tail_indicator", dist.diagnostics.tail_indicator, 3);
  r.meta("quadrature_evaluations", std::to_string(dist.diagnostics.evaluations));

  ExperimentReport d = base_report(cfg);
  model_metadata(cfg, d);
  d.meta("mode", cfg.absorptive_mode ? "absorptive" : "window");
  d.meta("t_min", cfg.t_min, cfg.precision);
  d.meta("t_max", cfg.t_max, cfg.precision);
  d.meta("points", std::to_string(cfg.points));
  d.columns = {"t", "density", "cdf"};
  for (const CdfRow& row : cdf_table(*family, psi, horizon, cfg.points, cfg.quad)) {
    d.rows.push_back({format_double(row.t, cfg.precision),
                      format_double(std::max(0.0, row.density), cfg.precision),
                      format_double(clamp_probability(row.cdf), cfg.precision)});
  }

  RunOutput out;
  out.files.push_back(NamedReport{cfg.out, std::move(r)});
  out.files.push_back(NamedReport{with_density_suffix(cfg.out), std::move(d)});
  return out;
}

RunOutput run_rovelli(const RunConfig& cfg) {
  ExperimentReport r = base_report(cfg);
  r.meta("T", cfg.duration, cfg.precision);
  r.meta("c_a", complex_repr(cfg.c_a, cfg.precision));
  r.meta("c_b", complex_repr(cfg.c_b, cfg.precision));
  r.meta("t_min", cfg.t_min, cfg.precision);
  r.meta("t_max", cfg.t_max, cfg.precision);
  r.meta("points", std::to_string(cfg.points));
  r.columns = {"t", "P"};

  const RovelliModel model(cfg.duration, cfg.c_a, cfg.c_b);
  const std::vector<CurveSample> curve =
      model.correlation_curve(uniform_grid(cfg.t_min, cfg.t_max, cfg.points));
  for (const CurveSample& s : curve) {
    r.rows.push_back({format_double(s.t, cfg.precision),
                      format_double(clamp_probability(s.value), cfg.precision)});
  }
  const MonotonicityReport mono = monotonicity_report(curve);
  r.meta("monotone", mono.monotone ? "true" : "false");
  if (mono.first_violation_t) {
    r.meta("first_violation_t", *mono.first_violation_t, cfg.precision);
  }
  return RunOutput{{NamedReport{cfg.out, std::move(r)}}};
}

RunOutput run_oru(const RunConfig& cfg) {
  ExperimentReport r = base_report(cfg);
  model_metadata(cfg, r);
  r.columns = {"k", "t_k", "outcome_k", "cumulative_probability"};

  const ModelParts parts = unitary_model_parts(cfg);
  const OutcomeString s(cfg.times, cfg.outcomes);
  const SequenceResult result =
      sequence_probability(parts.hamiltonian, parts.event, parts.initial, s);
  for (std::size_t k = 0; k < s.size(); ++k) {
    r.rows.push_back(
        {std::to_string(k), format_double(s.times[k], cfg.precision),
         std::to_string(s.outcomes[k]),
         format_double(clamp_probability(result.cumulative[k]), cfg.precision)});
  }
  r.meta("joint_probability", clamp_probability(result.probability),
         cfg.precision);
  return RunOutput{{NamedReport{cfg.out, std::move(r)}}};
}

RunOutput run_zeno(const RunConfig& cfg) {
  ExperimentReport r = base_report(cfg);
  model_metadata(cfg, r);
  r.meta("tau", cfg.tau, cfg.precision);
  r.columns = {"n", "survival", "transition"};

  const ModelParts parts = unitary_model_parts(cfg);
  const ZenoExperiment base(parts.hamiltonian, parts.event, parts.initial,
                            cfg.tau, 1);
  const ZenoScan scan = zeno_scan(base, cfg.n_values);
  for (std::size_t i = 0; i < scan.n_values.size(); ++i) {
    r.rows.push_back(
        {std::to_string(scan.n_values[i]),
         format_double(clamp_probability(scan.survival[i]), cfg.precision),
         format_double(clamp_probability(scan.transition[i]), cfg.precision)});
  }
  r.meta("rate_coefficient", scan.rate_coefficient, cfg.precision);
  r.meta("final_survival", clamp_probability(scan.survival.back()),
         cfg.precision);
  return RunOutput{{NamedReport{cfg.out, std::move(r)}}};
}

RunOutput run_sweep(const RunConfig& cfg) {
  ExperimentReport r = base_report(cfg);
  model_metadata(cfg, r);
  r.meta("tau", cfg.tau, cfg.precision);
  r.meta("protocol", cfg.protocol);
  r.columns = {"coupling", "protocol", "transition"};

  const ModelParts parts = unitary_model_parts(cfg);
  const SweepProtocol protocol = cfg.protocol == "pulsed"
                                     ? SweepProtocol::pulsed
                                     : SweepProtocol::continuous;
  const std::vector<SweepRow> table = coupling_sweep(
      parts.hamiltonian, parts.event, parts.initial, cfg.tau, cfg.couplings,
      protocol);
  for (const SweepRow& row : table) {
    r.rows.push_back(
        {format_double(row.coupling, cfg.precision), cfg.protocol,
         format_double(clamp_probability(row.transition), cfg.precision)});
  }
  return RunOutput{{NamedReport{cfg.out, std::move(r)}}};
}

}  // namespace

RunOutput run_experiment(const RunConfig& cfg) {
  switch (cfg.experiment) {
    case Experiment::decay: return run_decay(cfg);
    case Experiment::occurrence: return run_occurrence(cfg);
    case Experiment::rovelli: return run_rovelli(cfg);
    case Experiment::oru: return run_oru(cfg);
    case Experiment::zeno: return run_zeno(cfg);
    case Experiment::sweep: return run_sweep(cfg);
  }
  throw ValidationError("unknown experiment");
}

}  // namespace occtime
