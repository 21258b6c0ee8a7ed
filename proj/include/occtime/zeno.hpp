#pragma once

#include <array>
#include <vector>

#include "occtime/luders.hpp"

namespace occtime {

/// n+1 instantaneous measurements of M at times k*tau/n, k = 0..n, starting
/// from a state in the kernel of M.
struct ZenoExperiment {
  Hamiltonian hamiltonian;
  Projector monitored;
  StateVector initial;
  double tau;
  int n;

  ZenoExperiment(Hamiltonian h, Projector m, StateVector psi0, double horizon,
                 int repetitions);
  ZenoExperiment with_repetitions(int repetitions) const;
};

/// Joint probability that all n+1 measurements return 0. Throws
/// BadInitialState unless <psi0|M psi0> <= 1e-10.
double survival_probability(const ZenoExperiment& e);

struct ZenoScan {
  std::vector<int> n_values;
  std::vector<double> survival;
  std::vector<double> transition;  // 1 - survival
  /// Coefficient c of the 1 - c/n law, least-squares fitted through the
  /// origin on the upper half of the scan where the law holds.
  double rate_coefficient;
};

ZenoScan zeno_scan(const ZenoExperiment& base, const std::vector<int>& n_values);

/// Probability of the outcome string {0,0,1,1,0}: once the event registers,
/// later measurements may still return 0 for non-commuting families.
double flipback_probability(const Hamiltonian& h, const Projector& m,
                            const StateVector& psi0,
                            const std::array<double, 5>& times);

enum class SweepProtocol { pulsed, continuous };

struct SweepRow {
  double coupling;
  SweepProtocol protocol;
  double transition;
};

/// Transition probability over [0, tau] against coupling strength.
/// Pulsed: the coupling value is the measurement count n (rounded); the
/// transition is 1 - survival. Continuous: the detector absorbs from the
/// monitored subspace at rate g (Gamma = g M); the transition is the Born
/// weight of that subspace under the damped evolution at tau.
std::vector<SweepRow> coupling_sweep(const Hamiltonian& h_sys,
                                     const Projector& m,
                                     const StateVector& psi0, double tau,
                                     const std::vector<double>& couplings,
                                     SweepProtocol protocol);

}  // namespace occtime
