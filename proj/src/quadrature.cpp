#include "occtime/quadrature.hpp"

#include <cmath>
#include <sstream>

namespace occtime {

void QuadratureSpec::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
    throw ValidationError("QuadratureSpec: tolerances must be > 0");
  }
  if (max_evals < 3) {
    throw ValidationError("QuadratureSpec: max_evals must be >= 3");
  }
}

namespace {

// Kahan-compensated entrywise accumulation; order of add() calls is the
// summation order.
class CompensatedSum {
 public:
  CompensatedSum(Eigen::Index rows, Eigen::Index cols)
      : sum_(Matrix::Zero(rows, cols)), comp_(Matrix::Zero(rows, cols)) {}

  void add(const Matrix& x) {
    const Matrix y = x - comp_;
    const Matrix t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }

  const Matrix& value() const { return sum_; }

 private:
  Matrix sum_;
  Matrix comp_;
};

class Budget {
 public:
  explicit Budget(long max_evals) : remaining_(max_evals) {}

  void spend() {
    if (remaining_ == 0) {
      throw QuadratureBudgetExceeded(
          "quadrature: max_evals reached before tolerance was met");
    }
    --remaining_;
    ++used_;
  }

  long used() const { return used_; }

 private:
  long remaining_;
  long used_ = 0;
};

double target(const QuadratureSpec& q, const Matrix& estimate) {
  return std::max(q.abs_tol, q.rel_tol * max_abs(estimate));
}

// Successive dyadic grids can alias an oscillatory integrand to the same
// wrong value (all samples on the zeros of sin^2(4t) over [0, 4pi], say).
// Agreement between levels only counts once the grid is at least this fine.
constexpr long kMinAcceptPanels = 32;
constexpr int kMinAdaptiveDepth = 5;

QuadratureOutcome composite_simpson(const std::function<Matrix(double)>& f,
                                    double t1, double t2,
                                    const QuadratureSpec& q) {
  Budget budget(q.max_evals);
  const double span = t2 - t1;

  budget.spend();
  const Matrix fa = f(t1);
  budget.spend();
  const Matrix fb = f(t2);
  budget.spend();
  const Matrix fm = f(0.5 * (t1 + t2));
  const Matrix ends = fa + fb;

  const Eigen::Index rows = fa.rows(), cols = fa.cols();
  long panels = 2;
  Matrix prev = (span / 6.0) * (ends + 4.0 * fm);

  // interior points of the current grid excluding the newest midpoints
  CompensatedSum interior(rows, cols);
  interior.add(fm);

  while (true) {
    panels *= 2;
    const double h = span / double(panels);
    CompensatedSum midpoints(rows, cols);
    for (long k = 0; k < panels / 2; ++k) {
      budget.spend();
      midpoints.add(f(t1 + (2.0 * k + 1.0) * h));
    }
    Matrix current =
        (h / 3.0) * (ends + 4.0 * midpoints.value() + 2.0 * interior.value());
    const double err = max_abs(current - prev);
    if (panels >= kMinAcceptPanels && err <= target(q, current)) {
      return QuadratureOutcome{std::move(current), err, budget.used(), panels};
    }
    interior.add(midpoints.value());
    prev = std::move(current);
  }
}

Matrix simpson(double h, const Matrix& fa, const Matrix& fm, const Matrix& fb) {
  return (h / 6.0) * (fa + 4.0 * fm + fb);
}

constexpr int kMaxAdaptiveDepth = 48;

Matrix adaptive_node(const std::function<Matrix(double)>& f, double a, double b,
                     const Matrix& fa, const Matrix& fm, const Matrix& fb,
                     const Matrix& whole, double node_tol, int depth,
                     Budget& budget, long& leaves) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  budget.spend();
  const Matrix flm = f(lm);
  budget.spend();
  const Matrix frm = f(rm);
  const Matrix left = simpson(m - a, fa, flm, fm);
  const Matrix right = simpson(b - m, fm, frm, fb);
  const Matrix refined = left + right;
  const double err = max_abs(refined - whole);
  if ((depth >= kMinAdaptiveDepth && err <= 15.0 * node_tol) ||
      depth >= kMaxAdaptiveDepth) {
    leaves += 2;
    return refined + (refined - whole) / 15.0;
  }
  Matrix l = adaptive_node(f, a, m, fa, flm, fm, left, 0.5 * node_tol,
                           depth + 1, budget, leaves);
  Matrix r = adaptive_node(f, m, b, fm, frm, fb, right, 0.5 * node_tol,
                           depth + 1, budget, leaves);
  return l + r;
}

QuadratureOutcome adaptive_simpson(const std::function<Matrix(double)>& f,
                                   double t1, double t2,
                                   const QuadratureSpec& q) {
  Budget budget(q.max_evals);
  budget.spend();
  const Matrix fa = f(t1);
  budget.spend();
  const Matrix fb = f(t2);
  budget.spend();
  const Matrix fm = f(0.5 * (t1 + t2));
  const Matrix whole = simpson(t2 - t1, fa, fm, fb);
  const double node_tol = target(q, whole);
  long leaves = 0;
  Matrix value = adaptive_node(f, t1, t2, fa, fm, fb, whole, node_tol, 0,
                               budget, leaves);
  return QuadratureOutcome{std::move(value), node_tol, budget.used(), leaves};
}

}  // namespace

QuadratureOutcome integrate_matrix(const std::function<Matrix(double)>& f,
                                   double t1, double t2,
                                   const QuadratureSpec& q) {
  q.validate();
  if (!(std::isfinite(t1) && std::isfinite(t2))) {
    throw BadInterval("quadrature: interval endpoints must be finite");
  }
  if (t1 > t2) {
    std::ostringstream os;
    os << "quadrature: t1 = " << t1 << " exceeds t2 = " << t2;
    throw BadInterval(os.str());
  }
  if (t1 == t2) {
    const Matrix probe = f(t1);
    return QuadratureOutcome{Matrix::Zero(probe.rows(), probe.cols()), 0.0, 1, 0};
  }
  if (q.rule == QuadratureSpec::Rule::adaptive) {
    return adaptive_simpson(f, t1, t2, q);
  }
  return composite_simpson(f, t1, t2, q);
}

ScalarQuadratureOutcome integrate_scalar(const std::function<double(double)>& f,
                                         double t1, double t2,
                                         const QuadratureSpec& q) {
  auto wrapped = [&f](double t) {
    Matrix m(1, 1);
    m(0, 0) = f(t);
    return m;
  };
  QuadratureOutcome out = integrate_matrix(wrapped, t1, t2, q);
  return ScalarQuadratureOutcome{out.value(0, 0).real(), out.error_estimate,
                                 out.evaluations, out.panels};
}

}  // namespace occtime
