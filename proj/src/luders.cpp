#include "occtime/luders.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace occtime {

namespace {

double condition_weight(const Matrix& op, const DensityOperator& rho,
                        double threshold, const char* who) {
  const double w = real_trace_product(op, rho.matrix());
  if (w <= threshold) {
    std::ostringstream os;
    os << who << ": conditioning event has weight " << w << " <= " << threshold;
    throw ZeroCondition(os.str());
  }
  return w;
}

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

}  // namespace

double luders_conditional(const DensityOperator& rho, const Projector& e,
                          const Projector& f, double threshold) {
  if (rho.dim() != e.dim() || rho.dim() != f.dim()) {
    throw DimensionMismatch("luders_conditional: dims do not match");
  }
  const double den = condition_weight(f.matrix(), rho, threshold,
                                      "luders_conditional");
  const double num =
      real_trace_product(f.matrix() * e.matrix() * f.matrix(), rho.matrix());
  return clamp01(num / den);
}

DensityOperator luders_update(const DensityOperator& rho, const Projector& f,
                              double threshold) {
  if (rho.dim() != f.dim()) {
    throw DimensionMismatch("luders_update: dims do not match");
  }
  const double den = condition_weight(f.matrix(), rho, threshold, "luders_update");
  Matrix post = f.matrix() * rho.matrix() * f.matrix() / den;
  return DensityOperator(std::move(post));
}

DensityOperator luders_operation(const DensityOperator& rho, const Effect& a,
                                 double threshold) {
  if (rho.dim() != a.dim()) {
    throw DimensionMismatch("luders_operation: dims do not match");
  }
  const double den = condition_weight(a.matrix(), rho, threshold,
                                      "luders_operation");
  const Matrix root = positive_sqrt(a.op()).matrix();
  Matrix post = root * rho.matrix() * root / den;
  return DensityOperator(std::move(post));
}

double naive_conditional_W(const DensityOperator& rho, const Effect& b,
                           const Effect& a, double threshold) {
  if (rho.dim() != a.dim() || rho.dim() != b.dim()) {
    throw DimensionMismatch("naive_conditional_W: dims do not match");
  }
  const double den = condition_weight(a.matrix(), rho, threshold,
                                      "naive_conditional_W");
  const Matrix root = positive_sqrt(a.op()).matrix();
  const double num = real_trace_product(root * b.matrix() * root, rho.matrix());
  return num / den;
}

OutcomeString::OutcomeString(std::vector<double> ts, std::vector<int> os)
    : times(std::move(ts)), outcomes(std::move(os)) {
  if (times.empty()) throw ValidationError("OutcomeString: empty");
  if (times.size() != outcomes.size()) {
    throw ValidationError("OutcomeString: times and outcomes differ in length");
  }
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i])) {
      throw ValidationError("OutcomeString: non-finite time");
    }
    if (i > 0 && !(times[i] > times[i - 1])) {
      throw ValidationError("OutcomeString: times must be strictly increasing");
    }
    if (outcomes[i] != 0 && outcomes[i] != 1) {
      throw ValidationError("OutcomeString: outcomes must be 0 or 1");
    }
  }
}

MeasurementRecord measure(const StateVector& psi, const Projector& q,
                          double threshold) {
  if (psi.dim() != q.dim()) {
    throw DimensionMismatch("measure: dims do not match");
  }
  const Vector projected = q.matrix() * psi.amplitudes();
  const double weight = projected.squaredNorm();
  MeasurementRecord rec;
  rec.trace_of_condition = weight;
  rec.probability = clamp01(weight);
  if (weight > threshold) {
    rec.post_state = StateVector(projected);
  }
  return rec;
}

SequenceResult sequence_probability(const Hamiltonian& h, const Projector& m,
                                    const StateVector& initial,
                                    const OutcomeString& s) {
  if (h.dim() != m.dim() || h.dim() != initial.dim()) {
    throw DimensionMismatch("sequence_probability: dims do not match");
  }
  SequenceResult result;
  result.cumulative.reserve(s.size());
  result.steps.reserve(s.size());

  Vector chain = initial.amplitudes();  // kept unnormalized
  double previous = 1.0;
  bool dead = false;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (dead) {
      result.cumulative.push_back(0.0);
      result.steps.push_back(MeasurementRecord{0.0, std::nullopt, 0.0});
      continue;
    }
    const Matrix u = h.propagator(s.times[k]);
    Matrix op = u.adjoint() * m.matrix() * u;
    if (s.outcomes[k] == 0) op = identity(h.dim()) - op;
    chain = op * chain;
    const double weight = chain.squaredNorm();
    MeasurementRecord rec;
    rec.trace_of_condition = previous > 0.0 ? weight / previous : 0.0;
    rec.probability = clamp01(rec.trace_of_condition);
    if (weight > tol::condition) {
      rec.post_state = StateVector(chain);
      result.cumulative.push_back(weight);
    } else {
      dead = true;
      result.cumulative.push_back(0.0);
    }
    result.steps.push_back(std::move(rec));
    previous = weight;
  }

  if (dead) {
    result.probability = 0.0;
    return result;
  }
  result.probability = clamp01(chain.squaredNorm());
  result.final_state = StateVector(chain);
  return result;
}

DensitySequenceResult sequence_probability(const Hamiltonian& h,
                                           const Projector& m,
                                           const DensityOperator& initial,
                                           const OutcomeString& s) {
  if (h.dim() != m.dim() || h.dim() != initial.dim()) {
    throw DimensionMismatch("sequence_probability: dims do not match");
  }
  Matrix chain = initial.matrix();
  for (std::size_t k = 0; k < s.size(); ++k) {
    const Matrix u = h.propagator(s.times[k]);
    Matrix op = u.adjoint() * m.matrix() * u;
    if (s.outcomes[k] == 0) op = identity(h.dim()) - op;
    chain = op * chain * op;
    if (chain.trace().real() <= tol::condition) {
      return DensitySequenceResult{0.0, std::nullopt};
    }
  }
  const double weight = chain.trace().real();
  return DensitySequenceResult{std::min(1.0, weight),
                               DensityOperator(chain / weight)};
}

double repeat_agreement(const Hamiltonian& h, const Projector& m,
                        const StateVector& psi, double t0, double t,
                        double threshold) {
  if (h.dim() != m.dim() || h.dim() != psi.dim()) {
    throw DimensionMismatch("repeat_agreement: dims do not match");
  }
  if (!(t > t0)) throw BadInterval("repeat_agreement: t must exceed t0");
  const Matrix u0 = h.propagator(t0);
  const Matrix m0 = u0.adjoint() * m.matrix() * u0;
  const Vector conditioned = m0 * psi.amplitudes();
  const double den = conditioned.squaredNorm();
  if (den <= threshold) {
    throw ZeroCondition("repeat_agreement: M at t0 has no probability");
  }
  const Matrix ut = h.propagator(t);
  const Matrix mt = ut.adjoint() * m.matrix() * ut;
  return real_quadratic_form(conditioned, mt) / den;
}

}  // namespace occtime
