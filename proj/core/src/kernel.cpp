#include "acqregret/kernel.hpp"

#include "acqregret/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace acqregret {
namespace {

constexpr double kSqrt3 = 1.7320508075688772935274463415059;
constexpr double kSqrt5 = 2.2360679774997896964091736687313;

std::string Lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

std::string_view ToString(KernelFamily family) {
  switch (family) {
    case KernelFamily::kSquaredExponential: return "se";
    case KernelFamily::kMatern52: return "matern52";
    case KernelFamily::kMatern32: return "matern32";
  }
  return "unknown";
}

KernelFamily ParseKernelFamily(std::string_view name) {
  const std::string n = Lower(name);
  if (n == "se" || n == "squared_exponential" || n == "rbf") return KernelFamily::kSquaredExponential;
  if (n == "matern52" || n == "matern5/2") return KernelFamily::kMatern52;
  if (n == "matern32" || n == "matern3/2") return KernelFamily::kMatern32;
  throw ConfigError("unknown kernel family '" + std::string(name) + "' (expected se, matern52, matern32)");
}

Kernel::Kernel(KernelFamily family, double signal_scale, Vector lengthscales)
    : family_(family), signal_scale_(signal_scale), lengthscales_(std::move(lengthscales)) {
  if (!(signal_scale_ > 0.0) || !std::isfinite(signal_scale_)) {
    throw InvalidKernelError("signal scale must be positive and finite");
  }
  if (lengthscales_.size() == 0) {
    throw InvalidKernelError("kernel needs at least one lengthscale");
  }
  for (Eigen::Index i = 0; i < lengthscales_.size(); ++i) {
    if (!(lengthscales_[i] > 0.0) || !std::isfinite(lengthscales_[i])) {
      throw InvalidKernelError("lengthscales must be positive and finite");
    }
  }
  inv_sq_lengthscales_ = lengthscales_.array().square().inverse().matrix();
}

double Kernel::ScaledSquaredDistance(const Vector& x1, const Vector& x2) const {
  return ((x1 - x2).array().square() * inv_sq_lengthscales_.array()).sum();
}

double Kernel::Profile(double r) const {
  const double s2 = signal_variance();
  switch (family_) {
    case KernelFamily::kSquaredExponential:
      return s2 * std::exp(-0.5 * r);
    case KernelFamily::kMatern52: {
      const double d = std::sqrt(r);
      return s2 * (1.0 + kSqrt5 * d + (5.0 / 3.0) * r) * std::exp(-kSqrt5 * d);
    }
    case KernelFamily::kMatern32: {
      const double d = std::sqrt(r);
      return s2 * (1.0 + kSqrt3 * d) * std::exp(-kSqrt3 * d);
    }
  }
  return 0.0;
}

double Kernel::ProfileSlope(double r) const {
  const double s2 = signal_variance();
  switch (family_) {
    case KernelFamily::kSquaredExponential:
      return -0.5 * s2 * std::exp(-0.5 * r);
    case KernelFamily::kMatern52: {
      const double d = std::sqrt(r);
      return -(5.0 / 6.0) * s2 * (1.0 + kSqrt5 * d) * std::exp(-kSqrt5 * d);
    }
    case KernelFamily::kMatern32: {
      const double d = std::sqrt(r);
      return -1.5 * s2 * std::exp(-kSqrt3 * d);
    }
  }
  return 0.0;
}

double Kernel::operator()(const Vector& x1, const Vector& x2) const {
  return Profile(ScaledSquaredDistance(x1, x2));
}

Vector Kernel::GradX1(const Vector& x1, const Vector& x2) const {
  const double slope = ProfileSlope(ScaledSquaredDistance(x1, x2));
  return (2.0 * slope) * ((x1 - x2).array() * inv_sq_lengthscales_.array()).matrix();
}

}  // namespace acqregret
