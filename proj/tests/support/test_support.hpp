#pragma once

#include "acqregret/acquisition.hpp"
#include "acqregret/domain.hpp"
#include "acqregret/gp.hpp"
#include "acqregret/objective.hpp"
#include "acqregret/rng.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace acqregret::testing {

inline Vector RandomPoint(Rng& rng, int d, double lo = 0.0, double hi = 1.0) {
  Vector x(d);
  for (int i = 0; i < d; ++i) x[i] = lo + (hi - lo) * rng.Uniform01();
  return x;
}

/// Random model on [0,1]^d with moderate hyperparameters and N(0,1) targets.
inline GpModel RandomModel(KernelFamily family, int n, int d, Rng& rng) {
  Vector lengthscales(d);
  for (int i = 0; i < d; ++i) lengthscales[i] = 0.25 + 0.75 * rng.Uniform01();
  const double signal = 0.5 + 1.5 * rng.Uniform01();
  const double noise = 1e-3 + 0.05 * rng.Uniform01();
  Matrix inputs(n, d);
  Vector targets(n);
  for (int i = 0; i < n; ++i) {
    inputs.row(i) = RandomPoint(rng, d).transpose();
    targets[i] = rng.Normal();
  }
  return GpModel::Build(Kernel(family, signal, lengthscales), noise, inputs, targets);
}

/// Central difference of a scalar function, one axis at a time.
inline Vector CentralDifference(const std::function<double(const Vector&)>& f, const Vector& x,
                                double h = 1e-5) {
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vector xp = x;
    Vector xm = x;
    xp[i] += h;
    xm[i] -= h;
    g[i] = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

/// ||analytic - reference|| / max(1, ||analytic||).
inline double RelativeError(const Vector& analytic, const Vector& reference) {
  return (analytic - reference).norm() / std::max(1.0, analytic.norm());
}

/// Posterior from an explicitly inverted covariance matrix built entry by
/// entry from the kernel, independent of the Cholesky path.
inline Posterior DensePosterior(const GpModel& model, const Vector& x) {
  const Matrix& X = model.train_inputs();
  const int n = model.size();
  Matrix k(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      k(i, j) = model.kernel()(X.row(i).transpose(), X.row(j).transpose());
    }
  }
  k.diagonal().array() += model.noise() * model.noise() + model.jitter();
  const Matrix k_inv = k.fullPivLu().inverse();
  Vector kx(n);
  for (int i = 0; i < n; ++i) kx[i] = model.kernel()(x, X.row(i).transpose());
  Posterior p;
  p.mean = kx.dot(k_inv * model.train_targets());
  p.variance = model.kernel()(x, x) - kx.dot(k_inv * kx);
  return p;
}

/// Maximum of fn over a regular grid with per_axis points per axis,
/// including the box faces.
struct GridMaximum {
  double value = -std::numeric_limits<double>::infinity();
  double min_value = std::numeric_limits<double>::infinity();
  Vector argmax;
};

inline GridMaximum ScanGrid(const std::function<double(const Vector&)>& fn, const Domain& domain,
                            int per_axis) {
  const int d = domain.dim();
  GridMaximum out;
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  Vector x(d);
  while (true) {
    for (int i = 0; i < d; ++i) {
      const double t = per_axis == 1 ? 0.5 : static_cast<double>(idx[static_cast<std::size_t>(i)]) / (per_axis - 1);
      x[i] = domain.lower()[i] + t * (domain.upper()[i] - domain.lower()[i]);
    }
    const double v = fn(x);
    if (v > out.value) {
      out.value = v;
      out.argmax = x;
    }
    out.min_value = std::min(out.min_value, v);
    int axis = 0;
    while (axis < d && ++idx[static_cast<std::size_t>(axis)] == per_axis) {
      idx[static_cast<std::size_t>(axis)] = 0;
      ++axis;
    }
    if (axis == d) break;
  }
  return out;
}

/// Two Gaussian bumps on [0,1]^2: height 1.0 at (0.25, 0.3) and 0.7 at
/// (0.72, 0.68).
inline AcquisitionHandle BimodalSurface() {
  struct Bump {
    double height;
    double cx, cy;
    double width;
  };
  static const Bump bumps[] = {{1.0, 0.25, 0.3, 0.12}, {0.7, 0.72, 0.68, 0.16}};
  auto value_and_grad = [](const Vector& x, Vector* grad) {
    double v = 0.0;
    if (grad) *grad = Vector::Zero(2);
    for (const Bump& b : bumps) {
      const double dx = x[0] - b.cx;
      const double dy = x[1] - b.cy;
      const double e = b.height * std::exp(-(dx * dx + dy * dy) / (2.0 * b.width * b.width));
      v += e;
      if (grad) {
        (*grad)[0] -= e * dx / (b.width * b.width);
        (*grad)[1] -= e * dy / (b.width * b.width);
      }
    }
    return v;
  };
  AcquisitionHandle h;
  h.value = [value_and_grad](const Vector& x) { return value_and_grad(x, nullptr); };
  h.value_and_grad = [value_and_grad](const Vector& x, Vector& g) { return value_and_grad(x, &g); };
  return h;
}

/// Concave quadratic -||x - c||^2.
inline AcquisitionHandle QuadraticBowl(const Vector& c) {
  AcquisitionHandle h;
  h.value = [c](const Vector& x) { return -(x - c).squaredNorm(); };
  h.value_and_grad = [c](const Vector& x, Vector& g) {
    g = -2.0 * (x - c);
    return -(x - c).squaredNorm();
  };
  return h;
}

}  // namespace acqregret::testing
