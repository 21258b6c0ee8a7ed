#pragma once

#include <optional>
#include <vector>

#include "occtime/dynamics.hpp"
#include "occtime/linalg.hpp"

namespace occtime {

/// Classical exponential decay reference: density lambda * e^{-lambda t}.
class ExponentialModel {
 public:
  explicit ExponentialModel(double lambda);

  double rate() const noexcept { return lambda_; }
  double mean_lifetime() const noexcept { return 1.0 / lambda_; }
  double half_life() const;

  /// Pr(t1 <= t_d < t2) = e^{-lambda t1} - e^{-lambda t2}; t2 may be +inf.
  double interval_probability(double t1, double t2) const;

  /// Pr(decayed by t) = 1 - e^{-lambda t}.
  double has_decayed(double t) const;

  /// lambda * e^{-lambda t}.
  double density(double t) const;

 private:
  double lambda_;
};

struct CurveSample {
  double t;
  double value;
};

struct MonotonicityReport {
  bool monotone;
  std::optional<double> first_violation_t;
};

/// First grid point where the curve decreases by more than tolerance.
MonotonicityReport monotonicity_report(const std::vector<CurveSample>& curve,
                                       double tolerance = 1e-10);

/// Two-level system coupled to a three-level pointer. The interaction
/// rotates |a,init> -> |a,O_a> and |b,init> -> |b,O_b> with quarter period
/// T, so the pointer correlates perfectly with the system at t = T. The
/// projector M onto span{|a,O_a>, |b,O_b>} asks whether that correlation
/// holds; <Psi(t)|M Psi(t)> = sin^2(pi t / 2T).
class RovelliModel {
 public:
  // basis index = 3 * system + apparatus
  enum System { kA = 0, kB = 1 };
  enum Apparatus { kInit = 0, kOutA = 1, kOutB = 2 };
  static constexpr Eigen::Index kDim = 6;

  RovelliModel(double duration, Complex c_a, Complex c_b);

  double duration() const noexcept { return duration_; }
  const Hamiltonian& hamiltonian() const noexcept { return h_; }
  const Projector& pointer_match() const noexcept { return m_; }
  const StateVector& initial_state() const noexcept { return psi0_; }

  static Eigen::Index index(System s, Apparatus a) { return 3 * s + a; }
  static StateVector product_state(System s, Apparatus a);

  StateVector state_at(double t) const;

  /// P(t) = <Psi(t)| M Psi(t)>.
  double correlation_probability(double t) const;
  std::vector<CurveSample> correlation_curve(const std::vector<double>& grid) const;

 private:
  double duration_;
  Hamiltonian h_;
  Projector m_;
  StateVector psi0_;
};

/// Minimal two-level test dynamics: H = (omega/2) sigma_x, event projector
/// |1><1|, initial state |0>. Occurrence density sin^2(omega t / 2).
class RabiModel {
 public:
  explicit RabiModel(double omega);

  double omega() const noexcept { return omega_; }
  const Hamiltonian& hamiltonian() const noexcept { return h_; }
  const Projector& excited() const noexcept { return p_; }
  const StateVector& ground() const noexcept { return psi0_; }

  double density_closed_form(double t) const;

 private:
  double omega_;
  Hamiltonian h_;
  Projector p_;
  StateVector psi0_;
};

/// Two-level absorptive surrogate whose occurrence density is
/// e^{-lambda t} <psi|P|psi>: H = 0, uniform absorption Gamma = lambda I,
/// flag projector |1><1|, initial state |1>. Feeding it through the
/// occurrence pipeline reproduces the exponential law.
struct AbsorptiveExponential {
  AbsorptiveGenerator generator;
  Projector flag;
  StateVector initial;
  double lambda;
};
AbsorptiveExponential make_absorptive_exponential(double lambda);

}  // namespace occtime
