#pragma once

#include "acqregret/gp.hpp"
#include "acqregret/objective.hpp"

#include <optional>
#include <string_view>

namespace acqregret {

enum class AcquisitionKind { kPI, kEI, kUCB };

std::string_view ToString(AcquisitionKind kind);
/// "pi" | "ei" | "ucb", case-insensitive. Throws ConfigError.
AcquisitionKind ParseAcquisitionKind(std::string_view name);

inline constexpr double kDefaultUcbAlpha = 2.0;

/// Which acquisition to evaluate, oriented for maximization.
struct AcquisitionSpec {
  AcquisitionKind kind = AcquisitionKind::kEI;
  double ucb_alpha = kDefaultUcbAlpha;
  /// Minimum observed target; required for PI and EI.
  std::optional<double> incumbent;

  /// Spec whose incumbent is min(targets).
  static AcquisitionSpec ForTargets(AcquisitionKind kind, const Vector& targets,
                                    double ucb_alpha = kDefaultUcbAlpha);

  void Validate() const;
};

/// Standardized improvement z = (incumbent - mean) / sigma. Inactive, with
/// z = 0, wherever sigma <= noise; PI and EI are zero there.
struct ZScore {
  double z = 0.0;
  bool active = false;
};

ZScore ComputeZScore(double incumbent, double mean, double sigma, double noise);

double NormalPdf(double z);
/// Standard normal CDF through erfc, accurate in the far lower tail.
double NormalCdf(double z);

/// EI below this z is reported as exactly zero.
inline constexpr double kEiUnderflowZ = -30.0;

/// Value from posterior mean and standard deviation; noise decides whether
/// PI and EI are active.
double AcquisitionValueFromMoments(const AcquisitionSpec& spec, double mean, double sigma,
                                   double noise);
double AcquisitionValue(const AcquisitionSpec& spec, const GpModel& model, const Vector& x);
Vector AcquisitionGrad(const AcquisitionSpec& spec, const GpModel& model, const Vector& x);
double AcquisitionValueAndGrad(const AcquisitionSpec& spec, const GpModel& model, const Vector& x,
                               Vector& grad);

/// EI gradient in the expanded four-term product-rule form
///   (f* - mu) phi(z) dz - Phi(z) dmu + sigma phi'(z) dz + phi(z) dsigma.
/// AcquisitionGrad uses the simplified -Phi(z) dmu + phi(z) dsigma; this is
/// kept to cross-check the two.
Vector ExpectedImprovementGradExpanded(const AcquisitionSpec& spec, const GpModel& model,
                                       const Vector& x);

/// Handle over a copy of the model, usable by the maximizers.
AcquisitionHandle MakeAcquisitionHandle(const AcquisitionSpec& spec, const GpModel& model);

}  // namespace acqregret
