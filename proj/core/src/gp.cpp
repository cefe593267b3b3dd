#include "acqregret/gp.hpp"

#include "acqregret/errors.hpp"
#include "acqregret/rng.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <limits>

namespace acqregret {
namespace {

// Solves (L L^T) x = b for lower-triangular L.
Vector CholeskySolve(const Matrix& chol, const Vector& b) {
  const Vector half = chol.triangularView<Eigen::Lower>().solve(b);
  return chol.transpose().triangularView<Eigen::Upper>().solve(half);
}

constexpr double kLog2Pi = 1.8378770664093454835606594728112;

Matrix ScaleColumns(const Matrix& inputs, const Vector& lengthscales) {
  return inputs * lengthscales.cwiseInverse().asDiagonal();
}

// Pairwise squared distances between rows of already-scaled inputs.
Matrix PairwiseSquaredDistances(const Matrix& scaled) {
  const Eigen::Index n = scaled.rows();
  Matrix r(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    r(j, j) = 0.0;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double v = (scaled.row(i) - scaled.row(j)).squaredNorm();
      r(i, j) = v;
      r(j, i) = v;
    }
  }
  return r;
}

// Cholesky with the jitter ladder; returns false when every level fails.
bool FactorWithJitter(const Matrix& base, double signal_variance, Matrix& chol, double& jitter) {
  for (double factor = kMinJitter; factor <= kMaxJitter * 1.0000001; factor *= 10.0) {
    jitter = factor * signal_variance;
    Matrix k = base;
    k.diagonal().array() += jitter;
    Eigen::LLT<Matrix> llt(k);
    if (llt.info() == Eigen::Success) {
      const Matrix l = llt.matrixL();
      if (l.allFinite() && (l.diagonal().array() > 0.0).all()) {
        chol = l;
        return true;
      }
    }
  }
  return false;
}

}  // namespace

GpModel::GpModel(Kernel kernel, double noise, Matrix inputs, Vector targets)
    : kernel_(std::move(kernel)), noise_(noise), inputs_(std::move(inputs)),
      targets_(std::move(targets)) {}

GpModel GpModel::Build(Kernel kernel, double noise, Matrix inputs, Vector targets) {
  if (inputs.rows() < 1) throw PreconditionError("GP needs at least one training point");
  if (inputs.rows() != targets.size()) {
    throw PreconditionError("GP inputs and targets disagree in length");
  }
  if (inputs.cols() != kernel.dim()) {
    throw PreconditionError("GP input dimension does not match kernel lengthscales");
  }
  if (!inputs.allFinite() || !targets.allFinite()) {
    throw PreconditionError("GP training data must be finite");
  }
  if (!(noise >= 0.0) || !std::isfinite(noise)) {
    throw InvalidKernelError("observation noise must be nonnegative and finite");
  }
  GpModel model(std::move(kernel), noise, std::move(inputs), std::move(targets));
  model.scaled_inputs_ = ScaleColumns(model.inputs_, model.kernel_.lengthscales());
  const Matrix r = PairwiseSquaredDistances(model.scaled_inputs_);
  Matrix k = r.unaryExpr([&](double v) { return model.kernel_.Profile(v); });
  k.diagonal().array() += noise * noise;
  if (!FactorWithJitter(k, model.kernel_.signal_variance(), model.chol_, model.jitter_)) {
    throw IllConditionedError("Cholesky factorization failed at maximum jitter");
  }
  model.alpha_ = CholeskySolve(model.chol_, model.targets_);
  return model;
}

Vector GpModel::CrossCovariance(const Vector& x) const {
  const Vector xs = x.cwiseProduct(kernel_.lengthscales().cwiseInverse());
  Vector k(size());
  for (int i = 0; i < size(); ++i) {
    k[i] = kernel_.Profile((scaled_inputs_.row(i).transpose() - xs).squaredNorm());
  }
  return k;
}

Posterior GpModel::Predict(const Vector& x) const {
  const Vector k = CrossCovariance(x);
  const Vector v = chol_.triangularView<Eigen::Lower>().solve(k);
  Posterior p;
  p.mean = k.dot(alpha_);
  p.variance = std::max(0.0, kernel_.signal_variance() - v.squaredNorm());
  return p;
}

PosteriorWithGrad GpModel::PredictWithGrad(const Vector& x) const {
  const int n = size();
  const int d = dim();
  const Vector xs = x.cwiseProduct(kernel_.lengthscales().cwiseInverse());
  const Vector inv_l = kernel_.lengthscales().cwiseInverse();
  Vector k(n);
  // Row i holds dk(x, x_i)/dx.
  Matrix dk(n, d);
  for (int i = 0; i < n; ++i) {
    const Vector diff = xs - scaled_inputs_.row(i).transpose();
    const double r = diff.squaredNorm();
    k[i] = kernel_.Profile(r);
    // d r / dx = 2 (x - x_i) / l^2 = 2 diff / l
    dk.row(i) = (2.0 * kernel_.ProfileSlope(r)) * diff.cwiseProduct(inv_l).transpose();
  }
  const Vector v = chol_.triangularView<Eigen::Lower>().solve(k);
  const Vector kinv_k = chol_.transpose().triangularView<Eigen::Upper>().solve(v);

  PosteriorWithGrad p;
  p.mean = k.dot(alpha_);
  p.variance = std::max(0.0, kernel_.signal_variance() - v.squaredNorm());
  p.dmean = dk.transpose() * alpha_;
  p.dvariance = -2.0 * (dk.transpose() * kinv_k);
  return p;
}

double GpModel::LogMarginalLikelihood() const {
  return -0.5 * targets_.dot(alpha_) - chol_.diagonal().array().log().sum() -
         0.5 * static_cast<double>(size()) * kLog2Pi;
}

Kernel Hyperparams::ToKernel(KernelFamily family) const {
  return Kernel(family, std::exp(log_signal_scale), log_lengthscales.array().exp().matrix());
}

double LogMarginalLikelihood(KernelFamily family, const Hyperparams& hp,
                             std::optional<double> fixed_noise, const Matrix& inputs,
                             const Vector& targets, Vector* grad) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  const Eigen::Index n = inputs.rows();
  const Eigen::Index d = inputs.cols();
  const Kernel kernel = hp.ToKernel(family);
  const double noise = fixed_noise ? *fixed_noise : std::exp(hp.log_noise);
  const double noise_var = noise * noise;

  const Matrix scaled = ScaleColumns(inputs, kernel.lengthscales());
  const Matrix r = PairwiseSquaredDistances(scaled);
  const Matrix k = r.unaryExpr([&](double v) { return kernel.Profile(v); });
  Matrix k_noisy = k;
  k_noisy.diagonal().array() += noise_var;
  Matrix chol;
  double jitter = 0.0;
  if (!FactorWithJitter(k_noisy, kernel.signal_variance(), chol, jitter)) return kNegInf;
  const Vector alpha = CholeskySolve(chol, targets);
  const double lml = -0.5 * targets.dot(alpha) - chol.diagonal().array().log().sum() -
                     0.5 * static_cast<double>(n) * kLog2Pi;
  if (!std::isfinite(lml)) return kNegInf;
  if (grad == nullptr) return lml;

  const Eigen::Index n_params = 1 + d + (fixed_noise ? 0 : 1);
  grad->resize(n_params);
  Matrix kinv = chol.triangularView<Eigen::Lower>().solve(Matrix::Identity(n, n));
  kinv = chol.transpose().triangularView<Eigen::Upper>().solve(kinv);
  // W = alpha alpha^T - K^-1; dLML/dtheta = 1/2 sum_ij W_ij dK_ij/dtheta
  const Matrix w = alpha * alpha.transpose() - kinv;

  // Jitter scales with the signal variance, so it moves with log s too.
  Matrix dk_signal = 2.0 * k;
  dk_signal.diagonal().array() += 2.0 * jitter;
  (*grad)[0] = 0.5 * (w.array() * dk_signal.array()).sum();

  const Matrix slope = r.unaryExpr([&](double v) { return kernel.ProfileSlope(v); });
  for (Eigen::Index dim = 0; dim < d; ++dim) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index i = j + 1; i < n; ++i) {
        const double diff = scaled(i, dim) - scaled(j, dim);
        // d r_ij / d log l = -2 (s_ij / l)^2
        acc += 2.0 * w(i, j) * slope(i, j) * (-2.0 * diff * diff);
      }
    }
    (*grad)[1 + dim] = 0.5 * acc;
  }
  if (!fixed_noise) {
    (*grad)[1 + d] = 0.5 * 2.0 * noise_var * w.trace();
  }
  return lml;
}

GpFitResult FitGp(const Matrix& inputs, const Vector& targets, KernelFamily family,
                  const GpFitOptions& options, std::uint64_t seed) {
  if (inputs.rows() < 1) throw PreconditionError("GP fit needs at least one training point");
  if (inputs.rows() != targets.size()) {
    throw PreconditionError("GP inputs and targets disagree in length");
  }
  if (!inputs.allFinite() || !targets.allFinite()) {
    throw PreconditionError("GP training data must be finite");
  }
  if (options.restarts < 1) throw ConfigError("GP restarts must be at least 1");
  if (options.fixed_noise && !(*options.fixed_noise >= 0.0)) {
    throw ConfigError("fixed GP noise must be nonnegative");
  }
  const int d = static_cast<int>(inputs.cols());
  const bool fit_noise = !options.fixed_noise;
  const int n_params = 1 + d + (fit_noise ? 1 : 0);
  const HyperparamBounds& b = options.bounds;

  Vector lower(n_params), upper(n_params);
  lower[0] = b.log_signal_scale_lo;
  upper[0] = b.log_signal_scale_hi;
  lower.segment(1, d).setConstant(b.log_lengthscale_lo);
  upper.segment(1, d).setConstant(b.log_lengthscale_hi);
  if (fit_noise) {
    lower[1 + d] = b.log_noise_lo;
    upper[1 + d] = b.log_noise_hi;
  }

  auto unpack = [&](const Vector& theta) {
    Hyperparams hp;
    hp.log_signal_scale = theta[0];
    hp.log_lengthscales = theta.segment(1, d);
    hp.log_noise = fit_noise ? theta[1 + d] : std::log(std::max(*options.fixed_noise, 1e-300));
    return hp;
  };

  const ValueGradFn negative_lml = [&](const Vector& theta, Vector& grad) {
    Vector g;
    const double v = LogMarginalLikelihood(family, unpack(theta), options.fixed_noise, inputs,
                                           targets, &g);
    if (!std::isfinite(v)) return std::numeric_limits<double>::infinity();
    grad = -g;
    return -v;
  };

  std::vector<double> initial(options.restarts);
  std::vector<double> final(options.restarts);
  int best = -1;
  double best_value = -std::numeric_limits<double>::infinity();
  Vector best_theta;
  for (int start = 0; start < options.restarts; ++start) {
    Vector theta0(n_params);
    if (start == 0) {
      theta0[0] = 0.0;
      theta0.segment(1, d).setConstant(std::log(0.5));
      if (fit_noise) theta0[1 + d] = std::log(1e-3);
    } else {
      Rng rng(DeriveSeed(seed, {static_cast<std::uint64_t>(start)}));
      theta0[0] = -1.0 + 2.5 * rng.Uniform01();
      for (int i = 0; i < d; ++i) theta0[1 + i] = -3.0 + 4.0 * rng.Uniform01();
      if (fit_noise) theta0[1 + d] = b.log_noise_lo + (-2.0 - b.log_noise_lo) * rng.Uniform01();
    }
    theta0 = theta0.cwiseMax(lower).cwiseMin(upper);
    initial[start] = LogMarginalLikelihood(family, unpack(theta0), options.fixed_noise, inputs,
                                           targets, nullptr);
    const QuasiNewtonResult r = MinimizeInBox(negative_lml, lower, upper, theta0, options.optimizer);
    final[start] = std::isfinite(r.value) ? -r.value : -std::numeric_limits<double>::infinity();
    if (final[start] > best_value) {
      best_value = final[start];
      best = start;
      best_theta = r.x;
    }
  }
  if (best < 0) {
    throw IllConditionedError("every marginal-likelihood start failed to factorize the covariance");
  }
  const Hyperparams hp = unpack(best_theta);
  const double noise = fit_noise ? std::exp(hp.log_noise) : *options.fixed_noise;
  GpModel model = GpModel::Build(hp.ToKernel(family), noise, inputs, targets);
  return GpFitResult{std::move(model), hp, best, std::move(initial), std::move(final)};
}

}  // namespace acqregret
