#pragma once

#include "acqregret/domain.hpp"

#include <functional>

namespace acqregret {

/// Objective for minimization: returns f(x) and writes df/dx into grad.
/// May return +inf or NaN to signal an infeasible trial point; the line
/// search then backtracks.
using ValueGradFn = std::function<double(const Vector& x, Vector& grad)>;

struct QuasiNewtonOptions {
  double step_tol = 1e-5;  // stop once ||x_k - x_{k-1}||_2 <= step_tol
  int max_iters = 200;
  int memory = 10;
  double wolfe_c1 = 1e-4;
  double wolfe_c2 = 0.9;

  void Validate() const;
};

struct QuasiNewtonResult {
  Vector x;
  double value = 0.0;
  int iterations = 0;
  int n_evals = 0;
  bool converged = false;
  bool line_search_failed = false;
};

/// Called after the start point and after every accepted step.
using IterateObserver = std::function<void(const Vector& x, double value)>;

/// Projected limited-memory BFGS on the box [lower, upper].
///
/// Variables sitting on a bound with the gradient pushing outward are held
/// fixed; the two-loop recursion runs on the remaining free subspace and the
/// curvature history is cleared whenever that active set changes. Steps are
/// restricted to the feasible segment along the search direction and chosen
/// by a strong-Wolfe line search; reaching the box face with sufficient
/// decrease is accepted as a step.
///
/// On line-search failure the best point so far is returned with
/// converged = false.
QuasiNewtonResult MinimizeInBox(const ValueGradFn& fn, const Vector& lower, const Vector& upper,
                                const Vector& x0, const QuasiNewtonOptions& options,
                                const IterateObserver& observer = {});

}  // namespace acqregret
