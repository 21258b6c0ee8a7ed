#include "occtime/dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <unsupported/Eigen/MatrixFunctions>

namespace occtime {

namespace {
// Memoization is an optimization only; the cap keeps dense caches bounded.
constexpr std::size_t kCacheCap = 4096;
constexpr double kEigenbasisCondLimit = 1e8;
}  // namespace

Hamiltonian::Shared::Shared(HermitianOperator o) : op(std::move(o)), eig(eigh(op)) {}

Hamiltonian::Hamiltonian(HermitianOperator op)
    : shared_(std::make_shared<Shared>(std::move(op))) {}

Matrix Hamiltonian::propagator(double t) const {
  {
    std::lock_guard<std::mutex> lock(shared_->mu);
    auto it = shared_->cache.find(t);
    if (it != shared_->cache.end()) return it->second;
  }
  const EighResult& eig = shared_->eig;
  Vector phases(eig.eigenvalues.size());
  for (Eigen::Index i = 0; i < phases.size(); ++i) {
    phases(i) = std::exp(Complex(0.0, -eig.eigenvalues(i) * t));
  }
  Matrix u = eig.eigenvectors * phases.asDiagonal() * eig.eigenvectors.adjoint();
  {
    std::lock_guard<std::mutex> lock(shared_->mu);
    if (shared_->cache.size() < kCacheCap) shared_->cache.emplace(t, u);
  }
  return u;
}

StateVector PropagatorFamily::propagate(const StateVector& psi, double t) const {
  if (psi.dim() != h_.dim()) {
    throw DimensionMismatch("propagate: state dim does not match Hamiltonian");
  }
  return StateVector(h_.propagator(t) * psi.amplitudes());
}

HeisenbergFamily::HeisenbergFamily(Hamiltonian h, Effect seed)
    : h_(std::move(h)), seed_(std::move(seed)) {
  if (h_.dim() != seed_.dim()) {
    throw DimensionMismatch("HeisenbergFamily: seed dim does not match Hamiltonian");
  }
}

Matrix HeisenbergFamily::matrix_at(double t) const {
  const Matrix u = h_.propagator(t);
  return u.adjoint() * seed_.matrix() * u;
}

Effect HeisenbergFamily::at(double t) const {
  // unitary conjugation preserves the spectrum up to round-off
  return Effect(HermitianOperator(matrix_at(t)), 1e-10);
}

AbsorptiveGenerator::Shared::Shared(Hamiltonian hamiltonian, HermitianOperator gamma)
    : h(std::move(hamiltonian)), decay(std::move(gamma)), dim(h.dim()) {
  generator = Complex(0.0, -1.0) * h.op().matrix() - 0.5 * decay.matrix();
  Eigen::ComplexEigenSolver<Matrix> solver(generator);
  if (solver.info() == Eigen::Success) {
    const Matrix& v = solver.eigenvectors();
    Eigen::JacobiSVD<Matrix> svd(v);
    const double smin = svd.singularValues()(svd.singularValues().size() - 1);
    const double smax = svd.singularValues()(0);
    if (smin > 0.0 && smax / smin < kEigenbasisCondLimit) {
      diagonalizable = true;
      gen_eigenvalues = solver.eigenvalues();
      gen_vectors = v;
      gen_vectors_inv = v.inverse();
    }
  }
  // otherwise contraction() falls back to Pade scaling-and-squaring
}

AbsorptiveGenerator::AbsorptiveGenerator(Hamiltonian h, HermitianOperator decay) {
  if (h.dim() != decay.dim()) {
    throw DimensionMismatch("AbsorptiveGenerator: decay dim does not match Hamiltonian");
  }
  const EighResult gamma_eig = eigh(decay);
  if (gamma_eig.eigenvalues(0) < -tol::density) {
    throw NotPositive("AbsorptiveGenerator: decay operator must be positive");
  }
  shared_ = std::make_shared<Shared>(std::move(h), std::move(decay));
}

Matrix AbsorptiveGenerator::contraction(double t) const {
  if (t < 0.0) throw NegativeTime("AbsorptiveGenerator: t must be >= 0");
  {
    std::lock_guard<std::mutex> lock(shared_->mu);
    auto it = shared_->cache.find(t);
    if (it != shared_->cache.end()) return it->second;
  }
  Matrix k;
  if (shared_->diagonalizable) {
    Vector factors(shared_->gen_eigenvalues.size());
    for (Eigen::Index i = 0; i < factors.size(); ++i) {
      factors(i) = std::exp(shared_->gen_eigenvalues(i) * t);
    }
    k = shared_->gen_vectors * factors.asDiagonal() * shared_->gen_vectors_inv;
  } else {
    k = (shared_->generator * t).exp();
  }
  {
    std::lock_guard<std::mutex> lock(shared_->mu);
    if (shared_->cache.size() < kCacheCap) shared_->cache.emplace(t, k);
  }
  return k;
}

Vector AbsorptiveGenerator::propagate(const StateVector& psi, double t) const {
  if (psi.dim() != dim()) {
    throw DimensionMismatch("absorptive propagate: state dim mismatch");
  }
  return contraction(t) * psi.amplitudes();
}

AbsorptiveFamily::AbsorptiveFamily(AbsorptiveGenerator gen, Effect seed)
    : gen_(std::move(gen)), seed_(std::move(seed)) {
  if (gen_.dim() != seed_.dim()) {
    throw DimensionMismatch("AbsorptiveFamily: seed dim does not match generator");
  }
}

Matrix AbsorptiveFamily::matrix_at(double t) const {
  const Matrix k = gen_.contraction(t);
  return k.adjoint() * seed_.matrix() * k;
}

}  // namespace occtime
