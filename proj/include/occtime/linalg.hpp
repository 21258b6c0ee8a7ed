#pragma once

#include <Eigen/Dense>
#include <complex>

#include "occtime/errors.hpp"

namespace occtime {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

namespace tol {
inline constexpr double hermitian = 1e-12;
inline constexpr double projector = 1e-10;
inline constexpr double effect = 1e-12;
inline constexpr double density = 1e-12;
inline constexpr double positivity = 1e-10;
inline constexpr double support_eps = 1e-10;     // relative to the top eigenvalue
inline constexpr double condition = 1e-12;       // conditioning denominators
inline constexpr Eigen::Index max_dim = 4096;    // tensor product guard
}  // namespace tol

/// Entrywise max modulus, the norm used by all tolerance checks.
double max_abs(const Matrix& a);

inline Matrix identity(Eigen::Index dim) { return Matrix::Identity(dim, dim); }

/// A finite, exactly Hermitian matrix. Construction checks
/// ||A - A^dag||_max <= tolerance and stores the symmetrized matrix.
class HermitianOperator {
 public:
  explicit HermitianOperator(const Matrix& m, double tolerance = tol::hermitian);

  const Matrix& matrix() const noexcept { return mat_; }
  Eigen::Index dim() const noexcept { return mat_.rows(); }

 private:
  Matrix mat_;
};

/// Hermitian idempotent: eigenvalues in {0, 1}. Represents a sharp event.
class Projector {
 public:
  explicit Projector(HermitianOperator op, double tolerance = tol::projector);
  explicit Projector(Matrix m, double tolerance = tol::projector);

  const HermitianOperator& op() const noexcept { return op_; }
  const Matrix& matrix() const noexcept { return op_.matrix(); }
  Eigen::Index dim() const noexcept { return op_.dim(); }
  Eigen::Index rank() const noexcept { return rank_; }

  Projector complement() const;  // I - P

 private:
  HermitianOperator op_;
  Eigen::Index rank_ = 0;
};

/// Positive operator with spectrum in [0, 1]; the general yes/no outcome.
class Effect {
 public:
  explicit Effect(HermitianOperator op, double tolerance = tol::effect);
  explicit Effect(Matrix m, double tolerance = tol::effect);
  Effect(const Projector& p);  // every projector is an effect

  const HermitianOperator& op() const noexcept { return op_; }
  const Matrix& matrix() const noexcept { return op_.matrix(); }
  Eigen::Index dim() const noexcept { return op_.dim(); }

 private:
  HermitianOperator op_;
};

/// Unit vector in C^dim; normalized on construction.
class StateVector {
 public:
  explicit StateVector(Vector amplitudes);

  const Vector& amplitudes() const noexcept { return v_; }
  Eigen::Index dim() const noexcept { return v_.size(); }
  Complex operator[](Eigen::Index i) const { return v_(i); }

  static StateVector basis(Eigen::Index dim, Eigen::Index k);

 private:
  Vector v_;
};

/// Positive semidefinite, unit trace.
class DensityOperator {
 public:
  explicit DensityOperator(HermitianOperator op, double tolerance = tol::density);
  explicit DensityOperator(Matrix m, double tolerance = tol::density);

  static DensityOperator pure(const StateVector& psi);
  static DensityOperator maximally_mixed(Eigen::Index dim);

  const HermitianOperator& op() const noexcept { return op_; }
  const Matrix& matrix() const noexcept { return op_.matrix(); }
  Eigen::Index dim() const noexcept { return op_.dim(); }

 private:
  HermitianOperator op_;
};

struct EighResult {
  RealVector eigenvalues;  // ascending
  Matrix eigenvectors;     // unitary, columns match eigenvalues
};

/// Spectral decomposition A = V diag(lambda) V^dag.
EighResult eigh(const HermitianOperator& a);

/// U_t = e^{-iHt} through the spectral calculus. Unitary.
Matrix matrix_exponential_skew(const HermitianOperator& h, double t);

/// Unique positive square root. Eigenvalues in [-tolerance, 0) are clamped
/// to zero; anything below -tolerance raises NotPositive.
HermitianOperator positive_sqrt(const HermitianOperator& a,
                                double tolerance = tol::positivity);

/// Clamp an almost-positive operator onto the positive cone. The threshold is
/// rel_tolerance * max(1, lambda_max); eigenvalues below its negative raise
/// NotPositive.
HermitianOperator clamp_positive(const HermitianOperator& a,
                                 double rel_tolerance = tol::positivity);

struct PseudoInverseSqrt {
  HermitianOperator invsqrt;  // lambda^{-1/2} on the support, 0 elsewhere
  Projector support;          // retained eigenspace
};

/// Inverse square root on the support subspace. Eigenvalues at or below
/// eps * lambda_max are dropped from the support.
PseudoInverseSqrt pseudo_inverse_sqrt(const HermitianOperator& a,
                                      double eps = tol::support_eps);

/// Kronecker product. Throws DimensionOverflow above max_dim.
Matrix tensor_product(const Matrix& a, const Matrix& b,
                      Eigen::Index max_dim = tol::max_dim);

/// Re <psi|A psi>; the imaginary part of a Hermitian form is round-off.
double real_quadratic_form(const Vector& psi, const Matrix& a);

/// Re Tr[a b].
double real_trace_product(const Matrix& a, const Matrix& b);

}  // namespace occtime
