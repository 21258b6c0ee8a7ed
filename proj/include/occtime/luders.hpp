#pragma once

#include <optional>
#include <vector>

#include "occtime/dynamics.hpp"
#include "occtime/linalg.hpp"

namespace occtime {

/// Conditional probability of a positive result for E given a positive
/// result for F: Tr[F E F rho] / Tr[F rho].
double luders_conditional(const DensityOperator& rho, const Projector& e,
                          const Projector& f,
                          double threshold = tol::condition);

/// State transition rho -> F rho F / Tr[F rho].
DensityOperator luders_update(const DensityOperator& rho, const Projector& f,
                              double threshold = tol::condition);

/// Conditioning by a positive operator: rho -> A^{1/2} rho A^{1/2} / Tr[A rho].
/// Coincides with luders_update when A is a projector.
DensityOperator luders_operation(const DensityOperator& rho, const Effect& a,
                                 double threshold = tol::condition);

/// The naive candidate W(B|A) = Tr[A^{1/2} B A^{1/2} rho] / Tr[A rho].
/// Not a conditional probability: W(A|A) = Tr[A^2 rho] / Tr[A rho] < 1
/// unless A is a projector.
double naive_conditional_W(const DensityOperator& rho, const Effect& b,
                           const Effect& a, double threshold = tol::condition);

/// Record of successive 0/1 measurements of one projector at given times.
struct OutcomeString {
  std::vector<double> times;  // strictly increasing
  std::vector<int> outcomes;  // each 0 or 1

  OutcomeString(std::vector<double> ts, std::vector<int> os);
  std::size_t size() const { return times.size(); }
};

/// One projective measurement applied to a pure state.
struct MeasurementRecord {
  double probability;       // in [0, 1]
  std::optional<StateVector> post_state;  // absent below threshold
  double trace_of_condition;              // raw Born weight before clamping
};

/// Project-and-normalize; the building block of sequential conditioning.
MeasurementRecord measure(const StateVector& psi, const Projector& q,
                          double threshold = tol::condition);

struct SequenceResult {
  double probability;  // joint probability of the whole outcome string
  std::optional<StateVector> final_state;  // absent when probability ~ 0
  std::vector<double> cumulative;          // joint probability after each step
  std::vector<MeasurementRecord> steps;
};

/// Joint probability of an outcome string under repeated measurement of M,
/// by chained Lüders transitions with M_t (outcome 1) or I - M_t (outcome 0).
/// The chain is kept unnormalized and the norm collected at the end.
SequenceResult sequence_probability(const Hamiltonian& h, const Projector& m,
                                    const StateVector& initial,
                                    const OutcomeString& s);

/// Mixed-state variant of the chain (natural extension; the pure chain is
/// the rank-1 special case).
struct DensitySequenceResult {
  double probability;
  std::optional<DensityOperator> final_state;
};
DensitySequenceResult sequence_probability(const Hamiltonian& h,
                                           const Projector& m,
                                           const DensityOperator& initial,
                                           const OutcomeString& s);

/// Probability of M = 1 at t given M = 1 at t0 < t:
/// <psi| M_{t0} M_t M_{t0} psi> / <psi| M_{t0} psi>. Below 1 in general;
/// repeated measurements of the same Heisenberg family need not agree.
double repeat_agreement(const Hamiltonian& h, const Projector& m,
                        const StateVector& psi, double t0, double t,
                        double threshold = tol::condition);

}  // namespace occtime
