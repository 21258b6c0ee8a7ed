#pragma once

#include <random>
#include <vector>

#include "occtime/dynamics.hpp"
#include "occtime/linalg.hpp"
#include "occtime/luders.hpp"
#include "occtime/occurrence.hpp"

namespace occtime::testing {

inline std::mt19937& rng() {
  static std::mt19937 gen(0x5eed5u);
  return gen;
}

inline Matrix random_matrix(Eigen::Index dim) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Matrix m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      m(i, j) = Complex(dist(rng()), dist(rng()));
    }
  }
  return m;
}

inline HermitianOperator random_hermitian(Eigen::Index dim, double scale = 1.0) {
  Matrix m = random_matrix(dim);
  return HermitianOperator(0.5 * scale * (m + m.adjoint().eval()));
}

inline Matrix random_unitary(Eigen::Index dim) {
  return eigh(random_hermitian(dim)).eigenvectors;
}

// Operator with the given spectrum in a random eigenbasis.
inline Matrix with_spectrum(const std::vector<double>& spectrum) {
  const Eigen::Index dim = Eigen::Index(spectrum.size());
  const Matrix v = random_unitary(dim);
  RealVector d(dim);
  for (Eigen::Index i = 0; i < dim; ++i) d(i) = spectrum[std::size_t(i)];
  return v * d.asDiagonal().toDenseMatrix().cast<Complex>() * v.adjoint();
}

inline Projector random_projector(Eigen::Index dim, Eigen::Index rank) {
  std::vector<double> spectrum(static_cast<std::size_t>(dim), 0.0);
  for (Eigen::Index i = 0; i < rank; ++i) spectrum[std::size_t(i)] = 1.0;
  return Projector(with_spectrum(spectrum));
}

// Effect guaranteed non-projective: at least one eigenvalue well inside (0,1).
inline Effect random_blunt_effect(Eigen::Index dim) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> inside(0.1, 0.9);
  std::vector<double> spectrum(static_cast<std::size_t>(dim));
  for (auto& s : spectrum) s = unit(rng());
  spectrum[0] = inside(rng());
  return Effect(with_spectrum(spectrum));
}

// Full-rank density operator.
inline DensityOperator random_faithful_density(Eigen::Index dim) {
  std::uniform_real_distribution<double> weight(0.05, 1.0);
  std::vector<double> spectrum(static_cast<std::size_t>(dim));
  double total = 0.0;
  for (auto& s : spectrum) {
    s = weight(rng());
    total += s;
  }
  for (auto& s : spectrum) s /= total;
  return DensityOperator(with_spectrum(spectrum));
}

inline StateVector random_state(Eigen::Index dim) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Vector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = Complex(dist(rng()), dist(rng()));
  return StateVector(std::move(v));
}

// ---------------------------------------------------------------------------
// Independent oracles. These deliberately avoid the implementation paths they
// check: fixed-step midpoint sums instead of Simpson refinement, literal
// per-step renormalizing collapse instead of the unnormalized chain.
// ---------------------------------------------------------------------------

inline Matrix midpoint_operator_oracle(const EventFamily& family, double t1,
                                       double t2, long steps) {
  Matrix sum = Matrix::Zero(family.dim(), family.dim());
  const double h = (t2 - t1) / double(steps);
  for (long k = 0; k < steps; ++k) {
    sum += family.at(t1 + (double(k) + 0.5) * h);
  }
  return sum * h;
}

inline double midpoint_scalar_oracle(const EventFamily& family,
                                     const StateVector& psi, double t1,
                                     double t2, long steps) {
  double sum = 0.0;
  const double h = (t2 - t1) / double(steps);
  for (long k = 0; k < steps; ++k) {
    sum += density(family, psi, t1 + (double(k) + 0.5) * h);
  }
  return sum * h;
}

// Literal sequential collapse: project, renormalize, multiply probabilities.
inline double collapse_sequence_oracle(const Hamiltonian& h, const Projector& m,
                                       const StateVector& initial,
                                       const OutcomeString& s) {
  Vector psi = initial.amplitudes();
  double joint = 1.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const Matrix u = h.propagator(s.times[k]);
    Matrix op = u.adjoint() * m.matrix() * u;
    if (s.outcomes[k] == 0) op = identity(h.dim()) - op;
    const Vector projected = op * psi;
    const double p = projected.squaredNorm();
    joint *= p;
    if (joint == 0.0 || p == 0.0) return 0.0;
    psi = projected / std::sqrt(p);
  }
  return joint;
}

// Density-operator form of the same oracle, applying the state transition
// rho -> Q rho Q / Tr[Q rho] literally at each step.
inline double collapse_density_oracle(const Hamiltonian& h, const Projector& m,
                                      const DensityOperator& initial,
                                      const OutcomeString& s) {
  Matrix rho = initial.matrix();
  double joint = 1.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const Matrix u = h.propagator(s.times[k]);
    Matrix op = u.adjoint() * m.matrix() * u;
    if (s.outcomes[k] == 0) op = identity(h.dim()) - op;
    const Matrix conditioned = op * rho * op;
    const double p = conditioned.trace().real();
    joint *= p;
    if (p <= 0.0) return 0.0;
    rho = conditioned / p;
  }
  return joint;
}

}  // namespace occtime::testing
