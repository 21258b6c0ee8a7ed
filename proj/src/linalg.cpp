#include "occtime/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

namespace occtime {

namespace {

void require_square_finite(const Matrix& m, const char* what) {
  if (m.rows() < 1 || m.rows() != m.cols()) {
    std::ostringstream os;
    os << what << ": matrix must be square with dim >= 1, got " << m.rows()
       << "x" << m.cols();
    throw DimensionMismatch(os.str());
  }
  if (!m.allFinite()) {
    throw NumericError(std::string(what) + ": matrix has non-finite entries");
  }
}

}  // namespace

double max_abs(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().maxCoeff();
}

HermitianOperator::HermitianOperator(const Matrix& m, double tolerance) {
  require_square_finite(m, "HermitianOperator");
  const double dev = max_abs(m - m.adjoint());
  if (dev > tolerance) {
    std::ostringstream os;
    os << "HermitianOperator: ||A - A^dag||_max = " << dev << " exceeds "
       << tolerance;
    throw NotHermitian(os.str());
  }
  mat_ = 0.5 * (m + m.adjoint().eval());
}

EighResult eigh(const HermitianOperator& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix());
  if (solver.info() != Eigen::Success) {
    throw ConvergenceFailure("eigh: eigensolver did not converge");
  }
  return EighResult{solver.eigenvalues(), solver.eigenvectors()};
}

Projector::Projector(HermitianOperator op, double tolerance) : op_(std::move(op)) {
  const Matrix& p = op_.matrix();
  const double idem = max_abs(p * p - p);
  if (idem > tolerance) {
    std::ostringstream os;
    os << "Projector: ||P^2 - P||_max = " << idem << " exceeds " << tolerance;
    throw NotProjector(os.str());
  }
  const EighResult eig = eigh(op_);
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
    const double l = eig.eigenvalues(i);
    if (std::abs(l) > tolerance && std::abs(l - 1.0) > tolerance) {
      std::ostringstream os;
      os << "Projector: eigenvalue " << l << " not within " << tolerance
         << " of {0, 1}";
      throw NotProjector(os.str());
    }
    if (l > 0.5) ++rank_;
  }
}

Projector::Projector(Matrix m, double tolerance)
    : Projector(HermitianOperator(std::move(m), tolerance), tolerance) {}

Projector Projector::complement() const {
  return Projector(identity(dim()) - matrix());
}

Effect::Effect(HermitianOperator op, double tolerance) : op_(std::move(op)) {
  const EighResult eig = eigh(op_);
  const double lo = eig.eigenvalues(0);
  const double hi = eig.eigenvalues(eig.eigenvalues.size() - 1);
  if (lo < -tolerance || hi > 1.0 + tolerance) {
    std::ostringstream os;
    os << "Effect: spectrum [" << lo << ", " << hi << "] leaves [0, 1] by more than "
       << tolerance;
    throw NotPositive(os.str());
  }
}

Effect::Effect(Matrix m, double tolerance)
    : Effect(HermitianOperator(std::move(m)), tolerance) {}

Effect::Effect(const Projector& p) : op_(p.op()) {}

StateVector::StateVector(Vector amplitudes) : v_(std::move(amplitudes)) {
  if (v_.size() < 1) throw ValidationError("StateVector: dim must be >= 1");
  if (!v_.allFinite()) throw NumericError("StateVector: non-finite amplitudes");
  const double n = v_.norm();
  if (n < 1e-150) throw ValidationError("StateVector: cannot normalize zero vector");
  v_ /= n;
}

StateVector StateVector::basis(Eigen::Index dim, Eigen::Index k) {
  Vector v = Vector::Zero(dim);
  v(k) = 1.0;
  return StateVector(std::move(v));
}

DensityOperator::DensityOperator(HermitianOperator op, double tolerance)
    : op_(std::move(op)) {
  const EighResult eig = eigh(op_);
  if (eig.eigenvalues(0) < -tolerance) {
    std::ostringstream os;
    os << "DensityOperator: min eigenvalue " << eig.eigenvalues(0)
       << " below -" << tolerance;
    throw NotPositive(os.str());
  }
  const double tr = op_.matrix().trace().real();
  if (std::abs(tr - 1.0) > tolerance) {
    std::ostringstream os;
    os << "DensityOperator: trace " << tr << " deviates from 1 by more than "
       << tolerance;
    throw ValidationError(os.str());
  }
}

DensityOperator::DensityOperator(Matrix m, double tolerance)
    : DensityOperator(HermitianOperator(std::move(m)), tolerance) {}

DensityOperator DensityOperator::pure(const StateVector& psi) {
  const Vector& v = psi.amplitudes();
  return DensityOperator(HermitianOperator(v * v.adjoint()));
}

DensityOperator DensityOperator::maximally_mixed(Eigen::Index dim) {
  return DensityOperator(HermitianOperator(identity(dim) / double(dim)));
}

Matrix matrix_exponential_skew(const HermitianOperator& h, double t) {
  const EighResult eig = eigh(h);
  Vector phases(eig.eigenvalues.size());
  for (Eigen::Index i = 0; i < phases.size(); ++i) {
    phases(i) = std::exp(Complex(0.0, -eig.eigenvalues(i) * t));
  }
  return eig.eigenvectors * phases.asDiagonal() * eig.eigenvectors.adjoint();
}

HermitianOperator positive_sqrt(const HermitianOperator& a, double tolerance) {
  const EighResult eig = eigh(a);
  if (eig.eigenvalues(0) < -tolerance) {
    std::ostringstream os;
    os << "positive_sqrt: min eigenvalue " << eig.eigenvalues(0) << " below -"
       << tolerance;
    throw NotPositive(os.str());
  }
  RealVector roots(eig.eigenvalues.size());
  for (Eigen::Index i = 0; i < roots.size(); ++i) {
    // eigenvalues inside the noise band snap to zero; the square root would
    // otherwise amplify round-off from the scale of tol to sqrt(tol)
    roots(i) = eig.eigenvalues(i) > tolerance ? std::sqrt(eig.eigenvalues(i)) : 0.0;
  }
  Matrix r = eig.eigenvectors * roots.asDiagonal().toDenseMatrix().cast<Complex>() *
             eig.eigenvectors.adjoint();
  return HermitianOperator(std::move(r));
}

HermitianOperator clamp_positive(const HermitianOperator& a, double rel_tolerance) {
  const EighResult eig = eigh(a);
  const double top = eig.eigenvalues(eig.eigenvalues.size() - 1);
  const double thr = rel_tolerance * std::max(1.0, top);
  if (eig.eigenvalues(0) < -thr) {
    std::ostringstream os;
    os << "clamp_positive: min eigenvalue " << eig.eigenvalues(0)
       << " below -" << thr;
    throw NotPositive(os.str());
  }
  if (eig.eigenvalues(0) >= 0.0) return a;
  RealVector clamped = eig.eigenvalues.cwiseMax(0.0);
  Matrix r = eig.eigenvectors *
             clamped.asDiagonal().toDenseMatrix().cast<Complex>() *
             eig.eigenvectors.adjoint();
  return HermitianOperator(std::move(r));
}

PseudoInverseSqrt pseudo_inverse_sqrt(const HermitianOperator& a, double eps) {
  const EighResult eig = eigh(a);
  const Eigen::Index n = eig.eigenvalues.size();
  const double top = eig.eigenvalues(n - 1);
  const double thr = eps * std::max(top, 0.0);
  if (eig.eigenvalues(0) < -std::max(thr, eps)) {
    std::ostringstream os;
    os << "pseudo_inverse_sqrt: min eigenvalue " << eig.eigenvalues(0)
       << " is negative beyond tolerance";
    throw NotPositive(os.str());
  }
  RealVector inv = RealVector::Zero(n);
  RealVector keep = RealVector::Zero(n);
  Eigen::Index retained = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (eig.eigenvalues(i) > thr && eig.eigenvalues(i) > 0.0) {
      inv(i) = 1.0 / std::sqrt(eig.eigenvalues(i));
      keep(i) = 1.0;
      ++retained;
    }
  }
  if (retained == 0) {
    throw EmptySupport("pseudo_inverse_sqrt: no eigenvalue above threshold");
  }
  Matrix invsqrt = eig.eigenvectors *
                   inv.asDiagonal().toDenseMatrix().cast<Complex>() *
                   eig.eigenvectors.adjoint();
  Matrix support = eig.eigenvectors *
                   keep.asDiagonal().toDenseMatrix().cast<Complex>() *
                   eig.eigenvectors.adjoint();
  return PseudoInverseSqrt{HermitianOperator(std::move(invsqrt)),
                           Projector(std::move(support))};
}

Matrix tensor_product(const Matrix& a, const Matrix& b, Eigen::Index max_dim) {
  require_square_finite(a, "tensor_product");
  require_square_finite(b, "tensor_product");
  const Eigen::Index da = a.rows();
  const Eigen::Index db = b.rows();
  if (da > max_dim / db) {
    std::ostringstream os;
    os << "tensor_product: " << da << " * " << db << " exceeds max dim "
       << max_dim;
    throw DimensionOverflow(os.str());
  }
  Matrix out(da * db, da * db);
  for (Eigen::Index i = 0; i < da; ++i) {
    for (Eigen::Index j = 0; j < da; ++j) {
      out.block(i * db, j * db, db, db) = a(i, j) * b;
    }
  }
  return out;
}

double real_quadratic_form(const Vector& psi, const Matrix& a) {
  if (psi.size() != a.rows()) {
    throw DimensionMismatch("real_quadratic_form: dim mismatch");
  }
  return (psi.adjoint() * a * psi)(0, 0).real();
}

double real_trace_product(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionMismatch("real_trace_product: dim mismatch");
  }
  return (a * b).trace().real();
}

}  // namespace occtime
