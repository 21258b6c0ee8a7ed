#pragma once

#include <memory>
#include <mutex>
#include <unordered_map>

#include "occtime/linalg.hpp"

namespace occtime {

/// Time-independent generator (hbar = 1). The eigendecomposition is computed
/// once and shared by all copies; propagators evaluated through it are
/// memoized per time value since quadrature re-queries identical grids.
class Hamiltonian {
 public:
  explicit Hamiltonian(HermitianOperator op);

  Eigen::Index dim() const noexcept { return shared_->op.dim(); }
  const HermitianOperator& op() const noexcept { return shared_->op; }
  const EighResult& eigensystem() const noexcept { return shared_->eig; }

  /// U_t = e^{-iHt}.
  Matrix propagator(double t) const;

 private:
  struct Shared {
    HermitianOperator op;
    EighResult eig;
    mutable std::mutex mu;
    mutable std::unordered_map<double, Matrix> cache;
    explicit Shared(HermitianOperator o);
  };
  std::shared_ptr<Shared> shared_;
};

/// The one-parameter unitary group t -> U_t of a Hamiltonian.
class PropagatorFamily {
 public:
  explicit PropagatorFamily(Hamiltonian h) : h_(std::move(h)) {}

  const Hamiltonian& hamiltonian() const noexcept { return h_; }
  Matrix at(double t) const { return h_.propagator(t); }

  /// U_t psi.
  StateVector propagate(const StateVector& psi, double t) const;

 private:
  Hamiltonian h_;
};

/// Heisenberg picture family P_t = U_t^dag P U_t of a seed effect.
class HeisenbergFamily {
 public:
  HeisenbergFamily(Hamiltonian h, Effect seed);

  const Hamiltonian& hamiltonian() const noexcept { return h_; }
  const Effect& seed() const noexcept { return seed_; }
  Eigen::Index dim() const noexcept { return h_.dim(); }

  Matrix matrix_at(double t) const;
  Effect at(double t) const;

 private:
  Hamiltonian h_;
  Effect seed_;
};

/// Effective generator H - i Gamma/2 of a weakly coupled detector. The
/// contraction K_t = e^{-i(H - i Gamma/2) t} loses norm where Gamma acts;
/// the lost norm is what the detector registers.
class AbsorptiveGenerator {
 public:
  AbsorptiveGenerator(Hamiltonian h, HermitianOperator decay);

  Eigen::Index dim() const noexcept { return shared_->dim; }
  const Hamiltonian& hamiltonian() const noexcept { return shared_->h; }
  const HermitianOperator& decay() const noexcept { return shared_->decay; }

  /// K_t for t >= 0. Contraction: ||K_t psi|| <= ||psi||.
  Matrix contraction(double t) const;

  /// K_t psi, unnormalized. Throws NegativeTime for t < 0.
  Vector propagate(const StateVector& psi, double t) const;

 private:
  struct Shared {
    Hamiltonian h;
    HermitianOperator decay;
    Eigen::Index dim;
    // G = -iH - Gamma/2; spectral data when the eigenbasis is usable
    bool diagonalizable = false;
    Matrix generator;
    Vector gen_eigenvalues;
    Matrix gen_vectors;
    Matrix gen_vectors_inv;
    mutable std::mutex mu;
    mutable std::unordered_map<double, Matrix> cache;
    Shared(Hamiltonian hamiltonian, HermitianOperator gamma);
  };
  std::shared_ptr<Shared> shared_;
};

/// The absorptive analogue of the Heisenberg family: K_t^dag P K_t.
/// Positive, bounded by I; decays wherever the generator absorbs, so its
/// time integral converges on long horizons.
class AbsorptiveFamily {
 public:
  AbsorptiveFamily(AbsorptiveGenerator gen, Effect seed);

  const AbsorptiveGenerator& generator() const noexcept { return gen_; }
  const Effect& seed() const noexcept { return seed_; }
  Eigen::Index dim() const noexcept { return gen_.dim(); }

  Matrix matrix_at(double t) const;

 private:
  AbsorptiveGenerator gen_;
  Effect seed_;
};

}  // namespace occtime
