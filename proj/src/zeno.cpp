#include "occtime/zeno.hpp"

#include <cmath>
#include <sstream>

#include "occtime/dynamics.hpp"

namespace occtime {

ZenoExperiment::ZenoExperiment(Hamiltonian h, Projector m, StateVector psi0,
                               double horizon, int repetitions)
    : hamiltonian(std::move(h)),
      monitored(std::move(m)),
      initial(std::move(psi0)),
      tau(horizon),
      n(repetitions) {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw ValidationError("ZenoExperiment: tau must be positive and finite");
  }
  if (n < 1) throw ValidationError("ZenoExperiment: n must be >= 1");
  if (hamiltonian.dim() != monitored.dim() ||
      hamiltonian.dim() != initial.dim()) {
    throw DimensionMismatch("ZenoExperiment: dims do not match");
  }
}

ZenoExperiment ZenoExperiment::with_repetitions(int repetitions) const {
  return ZenoExperiment(hamiltonian, monitored, initial, tau, repetitions);
}

double survival_probability(const ZenoExperiment& e) {
  const double initial_weight =
      real_quadratic_form(e.initial.amplitudes(), e.monitored.matrix());
  if (initial_weight > 1e-10) {
    std::ostringstream os;
    os << "survival_probability: initial state has M weight " << initial_weight
       << "; it must start in the kernel of M";
    throw BadInitialState(os.str());
  }
  std::vector<double> times(e.n + 1);
  std::vector<int> outcomes(e.n + 1, 0);
  for (int k = 0; k <= e.n; ++k) times[k] = e.tau * double(k) / double(e.n);
  const SequenceResult r = sequence_probability(
      e.hamiltonian, e.monitored, e.initial, OutcomeString(times, outcomes));
  return r.probability;
}

ZenoScan zeno_scan(const ZenoExperiment& base, const std::vector<int>& n_values) {
  if (n_values.empty()) throw ValidationError("zeno_scan: empty n list");
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    if (n_values[i] < 1 || (i > 0 && n_values[i] <= n_values[i - 1])) {
      throw ValidationError("zeno_scan: n values must be positive and increasing");
    }
  }
  ZenoScan scan;
  scan.n_values = n_values;
  scan.survival.reserve(n_values.size());
  scan.transition.reserve(n_values.size());
  for (int n : n_values) {
    const double s = survival_probability(base.with_repetitions(n));
    scan.survival.push_back(s);
    scan.transition.push_back(1.0 - s);
  }
  // c from (1 - s) ~ c/n on the asymptotic half of the scan
  double num = 0.0, den = 0.0;
  const std::size_t start = n_values.size() / 2;
  for (std::size_t i = start; i < n_values.size(); ++i) {
    const double x = 1.0 / double(n_values[i]);
    num += scan.transition[i] * x;
    den += x * x;
  }
  scan.rate_coefficient = den > 0.0 ? num / den : 0.0;
  return scan;
}

double flipback_probability(const Hamiltonian& h, const Projector& m,
                            const StateVector& psi0,
                            const std::array<double, 5>& times) {
  const std::vector<double> ts(times.begin(), times.end());
  const std::vector<int> outcomes = {0, 0, 1, 1, 0};
  const SequenceResult r =
      sequence_probability(h, m, psi0, OutcomeString(ts, outcomes));
  return r.probability;
}

std::vector<SweepRow> coupling_sweep(const Hamiltonian& h_sys,
                                     const Projector& m,
                                     const StateVector& psi0, double tau,
                                     const std::vector<double>& couplings,
                                     SweepProtocol protocol) {
  if (!(tau > 0.0)) throw ValidationError("coupling_sweep: tau must be positive");
  std::vector<SweepRow> table;
  table.reserve(couplings.size());
  for (double g : couplings) {
    if (!(g >= 0.0) || !std::isfinite(g)) {
      throw ValidationError("coupling_sweep: couplings must be >= 0 and finite");
    }
    double transition = 0.0;
    if (protocol == SweepProtocol::pulsed) {
      const int n = std::max(1, int(std::llround(g)));
      transition = 1.0 - survival_probability(
                             ZenoExperiment(h_sys, m, psi0, tau, n));
    } else {
      AbsorptiveGenerator gen(h_sys, HermitianOperator(g * m.matrix()));
      const Vector damped = gen.propagate(psi0, tau);
      transition = real_quadratic_form(damped, m.matrix());
    }
    table.push_back(SweepRow{g, protocol, transition});
  }
  return table;
}

}  // namespace occtime
