#include "occtime/occurrence.hpp"

#include <cmath>
#include <sstream>

namespace occtime {

TimeHorizon::TimeHorizon(double lo, double hi, Mode m)
    : t_min(lo), t_max(hi), mode(m) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    std::ostringstream os;
    os << "TimeHorizon: need finite t_min < t_max, got [" << lo << ", " << hi
       << "]";
    throw BadInterval(os.str());
  }
}

EventFamily EventFamily::unitary(Hamiltonian h, Effect seed) {
  return EventFamily(HeisenbergFamily(std::move(h), std::move(seed)));
}

EventFamily EventFamily::absorptive(AbsorptiveGenerator gen, Effect seed) {
  return EventFamily(AbsorptiveFamily(std::move(gen), std::move(seed)));
}

Matrix EventFamily::at(double t) const {
  return std::visit([t](const auto& f) { return f.matrix_at(t); }, fam_);
}

Eigen::Index EventFamily::dim() const {
  return std::visit([](const auto& f) { return f.dim(); }, fam_);
}

bool EventFamily::is_absorptive() const {
  return std::holds_alternative<AbsorptiveFamily>(fam_);
}

double EventFamily::propagator_gauge(double t) const {
  if (const auto* abs = std::get_if<AbsorptiveFamily>(&fam_)) {
    return max_abs(abs->generator().contraction(t));
  }
  return 1.0;
}

double density(const EventFamily& family, const StateVector& psi, double t) {
  if (psi.dim() != family.dim()) {
    throw DimensionMismatch("density: state dim does not match family");
  }
  return real_quadratic_form(psi.amplitudes(), family.at(t));
}

double density(const Hamiltonian& h, const Effect& p, const StateVector& psi,
               double t) {
  return density(EventFamily::unitary(h, p), psi, t);
}

HermitianOperator accumulate_F(const EventFamily& family, Interval iv,
                               const QuadratureSpec& q,
                               QuadratureOutcome* diagnostics) {
  if (!(iv.t1 <= iv.t2)) {
    std::ostringstream os;
    os << "accumulate_F: need t1 <= t2, got [" << iv.t1 << ", " << iv.t2 << "]";
    throw BadInterval(os.str());
  }
  QuadratureOutcome out = integrate_matrix(
      [&family](double t) { return family.at(t); }, iv.t1, iv.t2, q);
  if (diagnostics != nullptr) *diagnostics = out;
  // quadrature round-off can leave the result slightly indefinite
  return clamp_positive(HermitianOperator(std::move(out.value), 1e-10));
}

HermitianOperator accumulate_F(const Hamiltonian& h, const Effect& p,
                               Interval iv, const QuadratureSpec& q,
                               QuadratureOutcome* diagnostics) {
  return accumulate_F(EventFamily::unitary(h, p), iv, q, diagnostics);
}

namespace {

// Window mode: relative growth of S when the horizon is widened by 25%.
// Absorptive mode: how much of the propagator survives at t_max.
double tail_indicator_for(const EventFamily& family, const TimeHorizon& horizon,
                          const QuadratureSpec& q, const HermitianOperator& s,
                          long* extra_evals) {
  if (horizon.mode == TimeHorizon::Mode::absorptive) {
    return family.propagator_gauge(horizon.t_max);
  }
  const double widened_max = horizon.t_max + 0.25 * horizon.length();
  QuadratureOutcome extra;
  HermitianOperator tail =
      accumulate_F(family, Interval{horizon.t_max, widened_max}, q, &extra);
  if (extra_evals != nullptr) *extra_evals += extra.evaluations;
  const double scale = max_abs(s.matrix());
  return scale > 0.0 ? max_abs(tail.matrix()) / scale : 0.0;
}

}  // namespace

FirstMoment first_moment_S(const EventFamily& family, const TimeHorizon& horizon,
                           const QuadratureSpec& q) {
  QuadratureOutcome base;
  HermitianOperator s = accumulate_F(
      family, Interval{horizon.t_min, horizon.t_max}, q, &base);

  FirstMomentDiagnostics diag{};
  diag.evaluations = base.evaluations;
  diag.panels = base.panels;
  diag.tail_indicator =
      tail_indicator_for(family, horizon, q, s, &diag.evaluations);
  return FirstMoment{std::move(s), diag};
}

namespace {

double support_threshold(const HermitianOperator& s, double support_eps) {
  const EighResult eig = eigh(s);
  return support_eps * std::max(eig.eigenvalues(eig.eigenvalues.size() - 1), 0.0);
}

}  // namespace

double mean_occurrence(const StateVector& psi, const HermitianOperator& s,
                       double support_eps) {
  if (psi.dim() != s.dim()) {
    throw DimensionMismatch("mean_occurrence: dims do not match");
  }
  const double expectation = real_quadratic_form(psi.amplitudes(), s.matrix());
  if (expectation <= support_threshold(s, support_eps)) {
    throw NoOutcome("mean_occurrence: <S> vanishes; experiment has no outcome");
  }
  return expectation;
}

double occurrence_probability(const StateVector& psi,
                              const HermitianOperator& f_delta,
                              const HermitianOperator& s, double support_eps) {
  if (psi.dim() != f_delta.dim() || psi.dim() != s.dim()) {
    throw DimensionMismatch("occurrence_probability: dims do not match");
  }
  const double denominator = mean_occurrence(psi, s, support_eps);
  const double numerator = real_quadratic_form(psi.amplitudes(), f_delta.matrix());
  return std::min(1.0, std::max(0.0, numerator / denominator));
}

std::vector<Effect> normalized_povm(
    const std::vector<HermitianOperator>& interval_ops,
    const HermitianOperator& s, double eps) {
  const PseudoInverseSqrt pinv = pseudo_inverse_sqrt(s, eps);
  const Matrix& r = pinv.invsqrt.matrix();
  std::vector<Effect> povm;
  povm.reserve(interval_ops.size());
  for (const HermitianOperator& f : interval_ops) {
    if (f.dim() != s.dim()) {
      throw DimensionMismatch("normalized_povm: interval operator dim mismatch");
    }
    // spectrum can spill out of [0,1] by quadrature noise only
    povm.emplace_back(HermitianOperator(r * f.matrix() * r), 1e-10);
  }
  return povm;
}

OccurrenceDistribution build_occurrence_distribution(
    const EventFamily& family, const TimeHorizon& horizon, int n_intervals,
    const QuadratureSpec& q, double support_eps) {
  if (n_intervals < 1) {
    throw ValidationError("build_occurrence_distribution: need >= 1 interval");
  }

  std::vector<Interval> partition;
  partition.reserve(n_intervals);
  const double h = horizon.length() / double(n_intervals);
  for (int k = 0; k < n_intervals; ++k) {
    const double lo = horizon.t_min + k * h;
    const double hi = k + 1 == n_intervals ? horizon.t_max : horizon.t_min + (k + 1) * h;
    partition.push_back(Interval{lo, hi});
  }

  std::vector<HermitianOperator> interval_ops;
  interval_ops.reserve(partition.size());
  long evals = 0;
  long panels = 0;
  for (const Interval& iv : partition) {
    QuadratureOutcome diag;
    interval_ops.push_back(accumulate_F(family, iv, q, &diag));
    evals += diag.evaluations;
    panels += diag.panels;
  }

  // S as the exact sum of the interval operators keeps Sum F = S an identity
  // rather than a quadrature statement.
  Matrix total = Matrix::Zero(family.dim(), family.dim());
  for (const HermitianOperator& f : interval_ops) total += f.matrix();
  HermitianOperator s_op = clamp_positive(HermitianOperator(std::move(total)));

  PseudoInverseSqrt pinv = pseudo_inverse_sqrt(s_op, support_eps);
  std::vector<Effect> povm = normalized_povm(interval_ops, s_op, support_eps);

  FirstMomentDiagnostics diag{};
  diag.evaluations = evals;
  diag.panels = panels;
  diag.tail_indicator = tail_indicator_for(family, horizon, q, s_op, &diag.evaluations);

  return OccurrenceDistribution{horizon,
                                std::move(partition),
                                std::move(interval_ops),
                                s_op,
                                positive_sqrt(s_op),
                                std::move(pinv.invsqrt),
                                std::move(pinv.support),
                                std::move(povm),
                                diag};
}

double consistency_residual(const DensityOperator& rho,
                            const OccurrenceDistribution& dist,
                            std::size_t interval_index, double support_eps) {
  if (interval_index >= dist.povm.size()) {
    throw ValidationError("consistency_residual: interval index out of range");
  }
  if (rho.dim() != dist.first_moment.dim()) {
    throw DimensionMismatch("consistency_residual: dims do not match");
  }
  const Matrix complement = identity(rho.dim()) - dist.support.matrix();
  const double leakage = max_abs(complement * rho.matrix() * complement);
  if (leakage > 1e-6) {
    std::ostringstream os;
    os << "consistency_residual: state leaks outside the support by " << leakage;
    throw SupportLeakage(os.str());
  }
  const double weight = real_trace_product(dist.first_moment.matrix(), rho.matrix());
  if (weight <= support_threshold(dist.first_moment, support_eps)) {
    throw NoOutcome("consistency_residual: Tr[S rho] vanishes");
  }
  const Matrix& root = dist.sqrt_first_moment.matrix();
  const Matrix sandwiched =
      root * dist.povm[interval_index].matrix() * root;
  const double via_luders = real_trace_product(sandwiched, rho.matrix()) / weight;
  const double direct =
      real_trace_product(dist.interval_ops[interval_index].matrix(), rho.matrix()) /
      weight;
  return std::abs(via_luders - direct);
}

std::vector<CdfRow> cdf_table(const EventFamily& family, const StateVector& psi,
                              const TimeHorizon& horizon, int n_points,
                              const QuadratureSpec& q) {
  if (n_points < 2) throw ValidationError("cdf_table: need n_points >= 2");
  if (psi.dim() != family.dim()) {
    throw DimensionMismatch("cdf_table: state dim does not match family");
  }

  const auto f = [&family, &psi](double t) { return density(family, psi, t); };

  std::vector<double> grid(n_points);
  const double h = horizon.length() / double(n_points - 1);
  for (int k = 0; k < n_points; ++k) {
    grid[k] = k + 1 == n_points ? horizon.t_max : horizon.t_min + k * h;
  }

  std::vector<double> cumulative(n_points, 0.0);
  double running = 0.0;
  double compensation = 0.0;
  for (int k = 1; k < n_points; ++k) {
    const double increment =
        integrate_scalar(f, grid[k - 1], grid[k], q).value;
    const double y = increment - compensation;
    const double t = running + y;
    compensation = (t - running) - y;
    running = t;
    cumulative[k] = running;
  }

  double peak = 0.0;
  std::vector<double> densities(n_points);
  for (int k = 0; k < n_points; ++k) {
    densities[k] = f(grid[k]);
    peak = std::max(peak, densities[k]);
  }
  const double total = cumulative.back();
  if (!(total > tol::support_eps * horizon.length() * peak) || peak == 0.0) {
    throw NoOutcome("cdf_table: total occurrence weight vanishes");
  }

  std::vector<CdfRow> rows(n_points);
  for (int k = 0; k < n_points; ++k) {
    rows[k] = CdfRow{grid[k], densities[k], cumulative[k] / total};
  }
  return rows;
}

}  // namespace occtime
