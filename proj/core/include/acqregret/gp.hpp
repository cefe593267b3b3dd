#pragma once

#include "acqregret/domain.hpp"
#include "acqregret/kernel.hpp"
#include "acqregret/quasi_newton.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

namespace acqregret {

struct Posterior {
  double mean = 0.0;
  double variance = 0.0;  // clamped to >= 0
};

struct PosteriorWithGrad {
  double mean = 0.0;
  double variance = 0.0;
  Vector dmean;
  Vector dvariance;
};

/// Diagonal jitter is jitter_factor * signal_variance, starting at
/// kMinJitter and escalating x10 up to kMaxJitter before giving up.
inline constexpr double kMinJitter = 1e-10;
inline constexpr double kMaxJitter = 1e-4;

/// Fitted GP regressor with fixed hyperparameters. Immutable once built, so a
/// model can be queried from several threads at once.
class GpModel {
 public:
  /// Factorizes K(X,X) + noise^2 I + jitter. Throws IllConditionedError when
  /// no jitter level up to kMaxJitter gives a positive definite matrix.
  static GpModel Build(Kernel kernel, double noise, Matrix inputs, Vector targets);

  const Kernel& kernel() const { return kernel_; }
  double noise() const { return noise_; }
  /// Absolute diagonal jitter that was actually added.
  double jitter() const { return jitter_; }
  const Matrix& train_inputs() const { return inputs_; }
  const Vector& train_targets() const { return targets_; }
  /// Lower-triangular factor L with L L^T = K + (noise^2 + jitter) I.
  const Matrix& chol_factor() const { return chol_; }
  /// Solution of (K + (noise^2 + jitter) I) alpha = y.
  const Vector& alpha() const { return alpha_; }
  int dim() const { return static_cast<int>(inputs_.cols()); }
  int size() const { return static_cast<int>(inputs_.rows()); }

  Posterior Predict(const Vector& x) const;
  PosteriorWithGrad PredictWithGrad(const Vector& x) const;

  /// -1/2 y^T alpha - sum log L_ii - n/2 log 2 pi
  double LogMarginalLikelihood() const;

  /// k(X, x) for every training row.
  Vector CrossCovariance(const Vector& x) const;

 private:
  GpModel(Kernel kernel, double noise, Matrix inputs, Vector targets);

  Kernel kernel_;
  double noise_ = 0.0;
  double jitter_ = 0.0;
  Matrix inputs_;
  Matrix scaled_inputs_;  // inputs divided column-wise by lengthscales
  Vector targets_;
  Matrix chol_;
  Vector alpha_;
};

/// Log-parameterized hyperparameters. log_noise is ignored when the noise is
/// held fixed.
struct Hyperparams {
  double log_signal_scale = 0.0;
  Vector log_lengthscales;
  double log_noise = 0.0;

  Kernel ToKernel(KernelFamily family) const;
};

struct HyperparamBounds {
  double log_signal_scale_lo = -5.0;
  double log_signal_scale_hi = 5.0;
  double log_lengthscale_lo = -5.0;
  double log_lengthscale_hi = 5.0;
  double log_noise_lo = -8.0;
  double log_noise_hi = 1.0;
};

struct GpFitOptions {
  int restarts = 8;
  /// Fixed observation noise; fitted within bounds when empty.
  std::optional<double> fixed_noise;
  HyperparamBounds bounds;
  QuasiNewtonOptions optimizer{.step_tol = 1e-6, .max_iters = 100, .memory = 10,
                               .wolfe_c1 = 1e-4, .wolfe_c2 = 0.9};
};

struct GpFitResult {
  GpModel model;
  Hyperparams hyperparams;
  int best_start = 0;
  std::vector<double> initial_log_likelihood;  // per start
  std::vector<double> final_log_likelihood;    // per start (-inf if the start failed)
};

/// Log marginal likelihood at the given hyperparameters, with its gradient
/// with respect to the packed log-parameter vector
/// [log s, log l_1..log l_d, (log noise)] written to grad when non-null.
/// Returns -inf when the covariance cannot be factorized.
double LogMarginalLikelihood(KernelFamily family, const Hyperparams& hp,
                             std::optional<double> fixed_noise, const Matrix& inputs,
                             const Vector& targets, Vector* grad);

/// Best of options.restarts quasi-Newton ascents of the log marginal
/// likelihood in log-hyperparameter space. Start 0 is a fixed default; the
/// rest are drawn from streams derived from (seed, start).
GpFitResult FitGp(const Matrix& inputs, const Vector& targets, KernelFamily family,
                  const GpFitOptions& options, std::uint64_t seed);

/// Key-value text serialization of a model (hyperparameters plus data).
/// Reading rebuilds the factorization.
void WriteGpModel(std::ostream& out, const GpModel& model);
GpModel ReadGpModel(std::istream& in);

}  // namespace acqregret
