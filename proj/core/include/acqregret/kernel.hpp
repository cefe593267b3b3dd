#pragma once

#include "acqregret/domain.hpp"

#include <string>
#include <string_view>

namespace acqregret {

enum class KernelFamily { kSquaredExponential, kMatern52, kMatern32 };

std::string_view ToString(KernelFamily family);
/// Accepts "se", "matern52", "matern32" (case-insensitive). Throws ConfigError.
KernelFamily ParseKernelFamily(std::string_view name);

/// Stationary covariance function over the scaled distance
///
///   d(x1, x2)^2 = sum_i ((x1_i - x2_i) / lengthscale_i)^2
///
/// with
///   SE:         s^2 exp(-d^2 / 2)
///   Matern 5/2: s^2 (1 + sqrt5 d + 5 d^2 / 3) exp(-sqrt5 d)
///   Matern 3/2: s^2 (1 + sqrt3 d) exp(-sqrt3 d)
/// where s is the signal scale.
///
/// Every family is written as a profile k(r) of r = d^2 together with dk/dr.
/// Input gradients and lengthscale derivatives are both dk/dr times a
/// derivative of r, which is finite at r = 0 for all three families, so
/// coincident points give a zero input gradient without special casing.
class Kernel {
 public:
  Kernel(KernelFamily family, double signal_scale, Vector lengthscales);

  KernelFamily family() const { return family_; }
  double signal_scale() const { return signal_scale_; }
  double signal_variance() const { return signal_scale_ * signal_scale_; }
  const Vector& lengthscales() const { return lengthscales_; }
  int dim() const { return static_cast<int>(lengthscales_.size()); }

  double ScaledSquaredDistance(const Vector& x1, const Vector& x2) const;

  /// k as a function of the scaled squared distance r.
  double Profile(double r) const;
  /// dk/dr.
  double ProfileSlope(double r) const;

  double operator()(const Vector& x1, const Vector& x2) const;
  /// dk(x1, x2)/dx1.
  Vector GradX1(const Vector& x1, const Vector& x2) const;

  const Vector& inverse_squared_lengthscales() const { return inv_sq_lengthscales_; }

 private:
  KernelFamily family_;
  double signal_scale_;
  Vector lengthscales_;
  Vector inv_sq_lengthscales_;
};

}  // namespace acqregret
