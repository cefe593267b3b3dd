#include "acqregret/quasi_newton.hpp"

#include "acqregret/errors.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace acqregret {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Probe {
  double alpha = 0.0;
  double value = 0.0;
  double slope = 0.0;  // d/dalpha of f(x + alpha d)
  Vector x;
  Vector grad;
};

// Minimizer of the cubic interpolating (a, fa, da) and (b, fb, db), clamped to
// the interior of [min(a,b), max(a,b)]; falls back to bisection.
double CubicStep(const Probe& a, const Probe& b) {
  const double lo = std::min(a.alpha, b.alpha);
  const double hi = std::max(a.alpha, b.alpha);
  const double mid = 0.5 * (lo + hi);
  if (!std::isfinite(a.value) || !std::isfinite(b.value) || !std::isfinite(a.slope) ||
      !std::isfinite(b.slope)) {
    return mid;
  }
  const double d1 = a.slope + b.slope - 3.0 * (a.value - b.value) / (a.alpha - b.alpha);
  const double disc = d1 * d1 - a.slope * b.slope;
  if (disc < 0.0) return mid;
  const double d2 = std::copysign(std::sqrt(disc), b.alpha - a.alpha);
  const double denom = b.slope - a.slope + 2.0 * d2;
  if (denom == 0.0) return mid;
  const double t = b.alpha - (b.alpha - a.alpha) * (b.slope + d2 - d1) / denom;
  const double margin = 0.1 * (hi - lo);
  if (!std::isfinite(t) || t < lo + margin || t > hi - margin) return mid;
  return t;
}

class LineSearch {
 public:
  LineSearch(const ValueGradFn& fn, const Vector& x, const Vector& dir, double f0, double slope0,
             double alpha_max, const QuasiNewtonOptions& opt, int& evals)
      : fn_(fn), x_(x), dir_(dir), f0_(f0), slope0_(slope0), alpha_max_(alpha_max), opt_(opt),
        evals_(evals) {}

  // Returns false when no acceptable step was found.
  bool Run(double alpha0, Probe& out) {
    Probe prev;
    prev.alpha = 0.0;
    prev.value = f0_;
    prev.slope = slope0_;
    double alpha = std::min(alpha0, alpha_max_);
    for (int i = 0; i < 40; ++i) {
      Probe cur = Evaluate(alpha);
      if (!Armijo(cur) || (i > 0 && cur.value >= prev.value)) {
        return Zoom(prev, cur, out);
      }
      if (std::abs(cur.slope) <= -opt_.wolfe_c2 * slope0_) {
        out = std::move(cur);
        return true;
      }
      if (cur.slope >= 0.0) {
        return Zoom(cur, prev, out);
      }
      if (alpha >= alpha_max_) {
        // Still descending at the box face: take the face.
        out = std::move(cur);
        return true;
      }
      prev = std::move(cur);
      alpha = std::min(2.0 * alpha, alpha_max_);
    }
    return false;
  }

 private:
  Probe Evaluate(double alpha) {
    Probe p;
    p.alpha = alpha;
    p.x = x_ + alpha * dir_;
    p.grad.resize(x_.size());
    p.value = fn_(p.x, p.grad);
    ++evals_;
    if (std::isnan(p.value)) p.value = kInf;
    p.slope = std::isfinite(p.value) ? p.grad.dot(dir_) : kInf;
    return p;
  }

  bool Armijo(const Probe& p) const {
    return std::isfinite(p.value) && p.value <= f0_ + opt_.wolfe_c1 * p.alpha * slope0_;
  }

  // lo satisfies Armijo and has the lower value; the minimizer lies between.
  bool Zoom(Probe lo, Probe hi, Probe& out) {
    const double dir_norm = dir_.norm();
    for (int i = 0; i < 60; ++i) {
      if (std::abs(hi.alpha - lo.alpha) * dir_norm < 1e-15 * (1.0 + x_.norm())) break;
      const double alpha = CubicStep(lo, hi);
      Probe cur = Evaluate(alpha);
      if (!Armijo(cur) || cur.value >= lo.value) {
        hi = std::move(cur);
        continue;
      }
      if (std::abs(cur.slope) <= -opt_.wolfe_c2 * slope0_) {
        out = std::move(cur);
        return true;
      }
      if (cur.slope * (hi.alpha - lo.alpha) >= 0.0) hi = lo;
      lo = std::move(cur);
    }
    // Interval collapsed: accept lo when it made strict progress.
    if (lo.alpha > 0.0 && lo.value < f0_) {
      out = std::move(lo);
      return true;
    }
    return false;
  }

  const ValueGradFn& fn_;
  const Vector& x_;
  const Vector& dir_;
  double f0_;
  double slope0_;
  double alpha_max_;
  const QuasiNewtonOptions& opt_;
  int& evals_;
};

}  // namespace

void QuasiNewtonOptions::Validate() const {
  if (!(step_tol > 0.0)) throw ConfigError("eps_opt must be positive");
  if (max_iters < 1) throw ConfigError("max_iters must be at least 1");
  if (memory < 1) throw ConfigError("memory must be at least 1");
  if (!(wolfe_c1 > 0.0 && wolfe_c1 < wolfe_c2 && wolfe_c2 < 1.0)) {
    throw ConfigError("Wolfe constants must satisfy 0 < c1 < c2 < 1");
  }
}

QuasiNewtonResult MinimizeInBox(const ValueGradFn& fn, const Vector& lower, const Vector& upper,
                                const Vector& x0, const QuasiNewtonOptions& options,
                                const IterateObserver& observer) {
  options.Validate();
  const Eigen::Index n = x0.size();
  QuasiNewtonResult result;
  result.x = x0.cwiseMax(lower).cwiseMin(upper);
  Vector grad(n);
  result.value = fn(result.x, grad);
  result.n_evals = 1;
  if (!std::isfinite(result.value)) {
    result.line_search_failed = true;
    return result;
  }
  if (observer) observer(result.x, result.value);

  std::deque<Vector> s_hist;
  std::deque<Vector> y_hist;
  std::deque<double> rho_hist;
  std::vector<char> active(static_cast<std::size_t>(n), 0);
  std::vector<char> prev_active(static_cast<std::size_t>(n), 0);
  bool first = true;

  Vector& x = result.x;
  for (int iter = 0; iter < options.max_iters; ++iter) {
    // Active set: on a bound with the negative gradient pointing out.
    for (Eigen::Index i = 0; i < n; ++i) {
      active[i] = (x[i] <= lower[i] && grad[i] > 0.0) || (x[i] >= upper[i] && grad[i] < 0.0);
    }
    Vector pg = grad;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (active[i]) pg[i] = 0.0;
    }
    if (!(pg.lpNorm<Eigen::Infinity>() > 0.0)) {
      result.converged = true;
      break;
    }
    if (!first && active != prev_active) {
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
    }
    prev_active = active;
    first = false;

    // Two-loop recursion on the free subspace.
    Vector q = pg;
    std::vector<double> a(s_hist.size());
    for (std::size_t k = s_hist.size(); k-- > 0;) {
      a[k] = rho_hist[k] * s_hist[k].dot(q);
      q -= a[k] * y_hist[k];
    }
    if (!s_hist.empty()) {
      const Vector& s = s_hist.back();
      const Vector& y = y_hist.back();
      q *= s.dot(y) / y.squaredNorm();
    }
    for (std::size_t k = 0; k < s_hist.size(); ++k) {
      const double b = rho_hist[k] * y_hist[k].dot(q);
      q += (a[k] - b) * s_hist[k];
    }
    Vector dir = -q;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (active[i]) dir[i] = 0.0;
      // Never push through a bound the point already sits on.
      if ((x[i] <= lower[i] && dir[i] < 0.0) || (x[i] >= upper[i] && dir[i] > 0.0)) dir[i] = 0.0;
    }
    double slope0 = dir.dot(grad);
    if (!(slope0 < 0.0)) {
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      dir = -pg;
      for (Eigen::Index i = 0; i < n; ++i) {
        if ((x[i] <= lower[i] && dir[i] < 0.0) || (x[i] >= upper[i] && dir[i] > 0.0)) dir[i] = 0.0;
      }
      slope0 = dir.dot(grad);
      if (!(slope0 < 0.0)) {
        result.converged = true;
        break;
      }
    }

    double alpha_max = kInf;
    Eigen::Index blocking = -1;
    for (Eigen::Index i = 0; i < n; ++i) {
      double limit = kInf;
      if (dir[i] > 0.0) limit = (upper[i] - x[i]) / dir[i];
      else if (dir[i] < 0.0) limit = (lower[i] - x[i]) / dir[i];
      if (limit < alpha_max) {
        alpha_max = limit;
        blocking = i;
      }
    }
    if (!(alpha_max > 0.0)) {
      result.converged = true;
      break;
    }
    const double alpha0 = s_hist.empty() ? 1.0 / dir.norm() : 1.0;

    Probe accepted;
    LineSearch search(fn, x, dir, result.value, slope0, alpha_max, options, result.n_evals);
    if (!search.Run(alpha0, accepted)) {
      result.line_search_failed = true;
      result.converged = false;
      return result;
    }
    const Vector trial = std::move(accepted.x);
    Vector x_new = trial;
    if (accepted.alpha >= alpha_max && blocking >= 0) {
      x_new[blocking] = dir[blocking] > 0.0 ? upper[blocking] : lower[blocking];
    }
    x_new = x_new.cwiseMax(lower).cwiseMin(upper);
    Vector g_new = std::move(accepted.grad);
    double f_new = accepted.value;
    if (x_new != trial) {
      // Snapping onto the face moved the point by round-off; re-evaluate so
      // the value and gradient belong to the returned iterate.
      f_new = fn(x_new, g_new);
      ++result.n_evals;
      if (!(f_new <= result.value)) {
        result.converged = true;
        break;
      }
    }

    Vector s = x_new - x;
    Vector y = g_new - grad;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm() && sy > 0.0) {
      s_hist.push_back(s);
      y_hist.push_back(y);
      rho_hist.push_back(1.0 / sy);
      if (static_cast<int>(s_hist.size()) > options.memory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    const double step_norm = s.norm();
    x = std::move(x_new);
    grad = std::move(g_new);
    result.value = f_new;
    result.iterations = iter + 1;
    if (observer) observer(x, result.value);
    if (step_norm <= options.step_tol) {
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace acqregret
