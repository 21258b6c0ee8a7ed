#pragma once

#include <functional>

#include "occtime/linalg.hpp"

namespace occtime {

struct QuadratureSpec {
  enum class Rule { composite_simpson, adaptive };

  Rule rule = Rule::composite_simpson;
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  long max_evals = 100000;

  void validate() const;
};

struct QuadratureOutcome {
  Matrix value;
  double error_estimate;
  long evaluations;
  long panels;  // final uniform panel count, or leaf count for the adaptive rule
};

struct ScalarQuadratureOutcome {
  double value;
  double error_estimate;
  long evaluations;
  long panels;
};

/// Integrate a matrix-valued function over [t1, t2] until the successive
/// estimates agree within max(abs_tol, rel_tol * ||result||_max).
/// Summation is compensated and strictly left to right, so results do not
/// depend on evaluation scheduling. Throws QuadratureBudgetExceeded when
/// max_evals is reached first, BadInterval when t1 > t2.
QuadratureOutcome integrate_matrix(const std::function<Matrix(double)>& f,
                                   double t1, double t2,
                                   const QuadratureSpec& q);

ScalarQuadratureOutcome integrate_scalar(const std::function<double(double)>& f,
                                         double t1, double t2,
                                         const QuadratureSpec& q);

}  // namespace occtime
