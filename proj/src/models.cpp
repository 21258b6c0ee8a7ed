#include "occtime/models.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace occtime {

ExponentialModel::ExponentialModel(double lambda) : lambda_(lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ValidationError("ExponentialModel: lambda must be positive and finite");
  }
}

double ExponentialModel::half_life() const { return std::numbers::ln2 / lambda_; }

double ExponentialModel::interval_probability(double t1, double t2) const {
  if (!(t1 >= 0.0) || !(t2 > t1)) {
    std::ostringstream os;
    os << "interval_probability: need 0 <= t1 < t2, got [" << t1 << ", " << t2
       << ")";
    throw BadInterval(os.str());
  }
  const double upper = std::isinf(t2) ? 0.0 : std::exp(-lambda_ * t2);
  return std::exp(-lambda_ * t1) - upper;
}

double ExponentialModel::has_decayed(double t) const {
  if (!(t >= 0.0)) throw NegativeTime("has_decayed: t must be >= 0");
  return 1.0 - std::exp(-lambda_ * t);
}

double ExponentialModel::density(double t) const {
  if (!(t >= 0.0)) throw NegativeTime("density: t must be >= 0");
  return lambda_ * std::exp(-lambda_ * t);
}

MonotonicityReport monotonicity_report(const std::vector<CurveSample>& curve,
                                       double tolerance) {
  for (std::size_t i = 1; i < curve.size(); ++i) {
    if (!(curve[i].t >= curve[i - 1].t)) {
      throw ValidationError("monotonicity_report: grid must be sorted");
    }
    if (curve[i].value < curve[i - 1].value - tolerance) {
      return MonotonicityReport{false, curve[i].t};
    }
  }
  return MonotonicityReport{true, std::nullopt};
}

namespace {

Hamiltonian rovelli_hamiltonian(double duration) {
  if (!(duration > 0.0) || !std::isfinite(duration)) {
    throw ValidationError("RovelliModel: duration must be positive and finite");
  }
  // sigma_y rotation generator on each of the two system-conditioned planes
  // (|a,init>, |a,O_a>) and (|b,init>, |b,O_b>), quarter period = duration
  const double w = std::numbers::pi / (2.0 * duration);
  Matrix h = Matrix::Zero(RovelliModel::kDim, RovelliModel::kDim);
  const auto plane = [&h, w](Eigen::Index from, Eigen::Index to) {
    h(to, from) = Complex(0.0, w);
    h(from, to) = Complex(0.0, -w);
  };
  plane(RovelliModel::index(RovelliModel::kA, RovelliModel::kInit),
        RovelliModel::index(RovelliModel::kA, RovelliModel::kOutA));
  plane(RovelliModel::index(RovelliModel::kB, RovelliModel::kInit),
        RovelliModel::index(RovelliModel::kB, RovelliModel::kOutB));
  return Hamiltonian(HermitianOperator(std::move(h)));
}

Projector rovelli_pointer_match() {
  Matrix m = Matrix::Zero(RovelliModel::kDim, RovelliModel::kDim);
  m(RovelliModel::index(RovelliModel::kA, RovelliModel::kOutA),
    RovelliModel::index(RovelliModel::kA, RovelliModel::kOutA)) = 1.0;
  m(RovelliModel::index(RovelliModel::kB, RovelliModel::kOutB),
    RovelliModel::index(RovelliModel::kB, RovelliModel::kOutB)) = 1.0;
  return Projector(std::move(m));
}

StateVector rovelli_initial(Complex c_a, Complex c_b) {
  const double norm = std::norm(c_a) + std::norm(c_b);
  if (std::abs(norm - 1.0) > 1e-12) {
    std::ostringstream os;
    os << "RovelliModel: |c_a|^2 + |c_b|^2 = " << norm << " must be 1";
    throw BadAmplitudes(os.str());
  }
  Vector v = Vector::Zero(RovelliModel::kDim);
  v(RovelliModel::index(RovelliModel::kA, RovelliModel::kInit)) = c_a;
  v(RovelliModel::index(RovelliModel::kB, RovelliModel::kInit)) = c_b;
  return StateVector(std::move(v));
}

}  // namespace

RovelliModel::RovelliModel(double duration, Complex c_a, Complex c_b)
    : duration_(duration),
      h_(rovelli_hamiltonian(duration)),
      m_(rovelli_pointer_match()),
      psi0_(rovelli_initial(c_a, c_b)) {}

StateVector RovelliModel::product_state(System s, Apparatus a) {
  return StateVector::basis(kDim, index(s, a));
}

StateVector RovelliModel::state_at(double t) const {
  return StateVector(h_.propagator(t) * psi0_.amplitudes());
}

double RovelliModel::correlation_probability(double t) const {
  const Vector psi_t = h_.propagator(t) * psi0_.amplitudes();
  return real_quadratic_form(psi_t, m_.matrix());
}

std::vector<CurveSample> RovelliModel::correlation_curve(
    const std::vector<double>& grid) const {
  std::vector<CurveSample> curve;
  curve.reserve(grid.size());
  for (double t : grid) curve.push_back({t, correlation_probability(t)});
  return curve;
}

RabiModel::RabiModel(double omega)
    : omega_(omega),
      h_([omega] {
        if (!(omega > 0.0) || !std::isfinite(omega)) {
          throw ValidationError("RabiModel: omega must be positive and finite");
        }
        Matrix h(2, 2);
        h << 0.0, 0.5 * omega, 0.5 * omega, 0.0;
        return Hamiltonian(HermitianOperator(std::move(h)));
      }()),
      p_([] {
        Matrix p = Matrix::Zero(2, 2);
        p(1, 1) = 1.0;
        return Projector(std::move(p));
      }()),
      psi0_(StateVector::basis(2, 0)) {}

double RabiModel::density_closed_form(double t) const {
  const double s = std::sin(0.5 * omega_ * t);
  return s * s;
}

AbsorptiveExponential make_absorptive_exponential(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ValidationError("absorptive exponential: lambda must be positive");
  }
  Hamiltonian h(HermitianOperator(Matrix::Zero(2, 2)));
  HermitianOperator gamma(lambda * identity(2));
  Matrix flag = Matrix::Zero(2, 2);
  flag(1, 1) = 1.0;
  return AbsorptiveExponential{
      AbsorptiveGenerator(std::move(h), std::move(gamma)),
      Projector(std::move(flag)), StateVector::basis(2, 1), lambda};
}

}  // namespace occtime
