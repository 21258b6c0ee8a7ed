#pragma once

#include <variant>
#include <vector>

#include "occtime/dynamics.hpp"
#include "occtime/quadrature.hpp"

namespace occtime {

/// Integration range for the occurrence distribution. `window` conditions on
/// occurrence inside [t_min, t_max]; `absorptive` treats the range as a
/// controlled truncation of a convergent improper integral.
struct TimeHorizon {
  enum class Mode { window, absorptive };

  double t_min;
  double t_max;
  Mode mode = Mode::window;

  TimeHorizon(double lo, double hi, Mode m = Mode::window);
  double length() const { return t_max - t_min; }
};

struct Interval {
  double t1;
  double t2;
};

/// The time-indexed positive-operator family describing one event: either a
/// Heisenberg family U_t^dag P U_t or its absorptive counterpart
/// K_t^dag P K_t.
class EventFamily {
 public:
  static EventFamily unitary(Hamiltonian h, Effect seed);
  static EventFamily absorptive(AbsorptiveGenerator gen, Effect seed);

  Matrix at(double t) const;
  Eigen::Index dim() const;
  bool is_absorptive() const;

  /// Operator max-norm of the propagator at t; 1 in the unitary case,
  /// decaying in the absorptive case. Used as a tail indicator.
  double propagator_gauge(double t) const;

 private:
  explicit EventFamily(HeisenbergFamily f) : fam_(std::move(f)) {}
  explicit EventFamily(AbsorptiveFamily f) : fam_(std::move(f)) {}
  std::variant<HeisenbergFamily, AbsorptiveFamily> fam_;
};

/// Born value f(t) = <psi| P_t psi>, the unnormalized occurrence density.
double density(const EventFamily& family, const StateVector& psi, double t);
double density(const Hamiltonian& h, const Effect& p, const StateVector& psi,
               double t);

/// F_[t1,t2] = integral of the family over the interval, entrywise
/// quadrature, clamped onto the positive cone.
HermitianOperator accumulate_F(const EventFamily& family, Interval iv,
                               const QuadratureSpec& q,
                               QuadratureOutcome* diagnostics = nullptr);
HermitianOperator accumulate_F(const Hamiltonian& h, const Effect& p,
                               Interval iv, const QuadratureSpec& q,
                               QuadratureOutcome* diagnostics = nullptr);

struct FirstMomentDiagnostics {
  /// Relative change of S when the horizon is widened by 25% (window mode),
  /// or the propagator gauge at t_max (absorptive mode).
  double tail_indicator;
  long evaluations;
  long panels;
};

struct FirstMoment {
  HermitianOperator op;  // S = F over the whole horizon
  FirstMomentDiagnostics diagnostics;
};

/// S = F_[t_min, t_max], the first moment of the unnormalized POVM.
FirstMoment first_moment_S(const EventFamily& family, const TimeHorizon& horizon,
                           const QuadratureSpec& q);

/// <psi| S psi>, the normalization denominator (its reciprocal is the rate
/// mu). Throws NoOutcome when the expectation sits below
/// support_eps * lambda_max(S): the event never occurs from psi.
double mean_occurrence(const StateVector& psi, const HermitianOperator& s,
                       double support_eps = tol::support_eps);

/// Pr(t1 <= t_o < t2 | outcome occurs) = <psi|F_Delta psi> / <psi|S psi>.
double occurrence_probability(const StateVector& psi,
                              const HermitianOperator& f_delta,
                              const HermitianOperator& s,
                              double support_eps = tol::support_eps);

/// Operator normalization E_Delta = S^{-1/2} F_Delta S^{-1/2} on the support
/// of S. The E_Delta form a POVM over the partition: they sum to the support
/// projector.
std::vector<Effect> normalized_povm(
    const std::vector<HermitianOperator>& interval_ops,
    const HermitianOperator& s, double eps = tol::support_eps);

/// The assembled occurrence observable over a partition of the horizon.
struct OccurrenceDistribution {
  TimeHorizon horizon;
  std::vector<Interval> partition;
  std::vector<HermitianOperator> interval_ops;  // F_Delta
  HermitianOperator first_moment;               // S = sum of F_Delta
  HermitianOperator sqrt_first_moment;          // S^{1/2}
  HermitianOperator invsqrt_first_moment;       // S^{-1/2} on the support
  Projector support;
  std::vector<Effect> povm;  // E_Delta
  FirstMomentDiagnostics diagnostics;
};

OccurrenceDistribution build_occurrence_distribution(
    const EventFamily& family, const TimeHorizon& horizon, int n_intervals,
    const QuadratureSpec& q, double support_eps = tol::support_eps);

/// | Tr[S^{1/2} E_Delta S^{1/2} rho] / Tr[S rho] - Tr[F_Delta rho] / Tr[S rho] |,
/// the gap between the Lüders-operation route and the direct route. Both
/// express the same conditional probability, so the residual is round-off.
double consistency_residual(const DensityOperator& rho,
                            const OccurrenceDistribution& dist,
                            std::size_t interval_index,
                            double support_eps = tol::support_eps);

struct CdfRow {
  double t;
  double density;
  double cdf;
};

/// Tabulated density and conditional CDF over the horizon; the CDF is
/// normalized to 1 at t_max.
std::vector<CdfRow> cdf_table(const EventFamily& family, const StateVector& psi,
                              const TimeHorizon& horizon, int n_points,
                              const QuadratureSpec& q);

}  // namespace occtime
