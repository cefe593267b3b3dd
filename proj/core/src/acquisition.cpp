#include "acqregret/acquisition.hpp"

#include "acqregret/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <memory>
#include <string>

namespace acqregret {
namespace {

constexpr double kInvSqrt2Pi = 0.39894228040143267793994605993438;
constexpr double kInvSqrt2 = 0.70710678118654752440084436210485;

struct Moments {
  double mean;
  double sigma;
  Vector dmean;
  Vector dsigma;
};

Moments MomentsWithGrad(const GpModel& model, const Vector& x) {
  PosteriorWithGrad p = model.PredictWithGrad(x);
  Moments m;
  m.mean = p.mean;
  m.sigma = std::sqrt(p.variance);
  m.dmean = std::move(p.dmean);
  if (m.sigma > 0.0) {
    m.dsigma = p.dvariance / (2.0 * m.sigma);
  } else {
    m.dsigma = Vector::Zero(x.size());
  }
  return m;
}


std::string Lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

std::string_view ToString(AcquisitionKind kind) {
  switch (kind) {
    case AcquisitionKind::kPI: return "pi";
    case AcquisitionKind::kEI: return "ei";
    case AcquisitionKind::kUCB: return "ucb";
  }
  return "unknown";
}

AcquisitionKind ParseAcquisitionKind(std::string_view name) {
  const std::string n = Lower(name);
  if (n == "pi") return AcquisitionKind::kPI;
  if (n == "ei") return AcquisitionKind::kEI;
  if (n == "ucb") return AcquisitionKind::kUCB;
  throw ConfigError("unknown acquisition '" + std::string(name) + "' (expected pi, ei, ucb)");
}

AcquisitionSpec AcquisitionSpec::ForTargets(AcquisitionKind kind, const Vector& targets,
                                            double ucb_alpha) {
  AcquisitionSpec spec;
  spec.kind = kind;
  spec.ucb_alpha = ucb_alpha;
  if (targets.size() > 0) spec.incumbent = targets.minCoeff();
  return spec;
}

void AcquisitionSpec::Validate() const {
  if (kind == AcquisitionKind::kUCB) {
    if (!(ucb_alpha > 0.0)) throw ConfigError("UCB alpha must be positive");
  } else if (!incumbent || !std::isfinite(*incumbent)) {
    throw ConfigError("PI and EI need a finite incumbent (minimum observed target)");
  }
}

ZScore ComputeZScore(double incumbent, double mean, double sigma, double noise) {
  if (!(sigma > noise) || !(sigma > 0.0)) return {};
  return {(incumbent - mean) / sigma, true};
}

double AcquisitionValueFromMoments(const AcquisitionSpec& spec, double mean, double sigma,
                                   double noise) {
  spec.Validate();
  switch (spec.kind) {
    case AcquisitionKind::kUCB:
      return -mean + spec.ucb_alpha * sigma;
    case AcquisitionKind::kPI: {
      const ZScore z = ComputeZScore(*spec.incumbent, mean, sigma, noise);
      return z.active ? NormalCdf(z.z) : 0.0;
    }
    case AcquisitionKind::kEI: {
      const ZScore z = ComputeZScore(*spec.incumbent, mean, sigma, noise);
      if (!z.active || z.z < kEiUnderflowZ) return 0.0;
      // (f* - mu) Phi(z) + sigma phi(z) with f* - mu = z sigma.
      return std::max(0.0, sigma * (z.z * NormalCdf(z.z) + NormalPdf(z.z)));
    }
  }
  return 0.0;
}

double NormalPdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

double NormalCdf(double z) { return 0.5 * std::erfc(-z * kInvSqrt2); }

double AcquisitionValue(const AcquisitionSpec& spec, const GpModel& model, const Vector& x) {
  const Posterior p = model.Predict(x);
  return AcquisitionValueFromMoments(spec, p.mean, std::sqrt(p.variance), model.noise());
}

double AcquisitionValueAndGrad(const AcquisitionSpec& spec, const GpModel& model, const Vector& x,
                               Vector& grad) {
  spec.Validate();
  const Moments m = MomentsWithGrad(model, x);
  const double value = AcquisitionValueFromMoments(spec, m.mean, m.sigma, model.noise());
  switch (spec.kind) {
    case AcquisitionKind::kUCB:
      grad = -m.dmean + spec.ucb_alpha * m.dsigma;
      return value;
    case AcquisitionKind::kPI: {
      const ZScore z = ComputeZScore(*spec.incumbent, m.mean, m.sigma, model.noise());
      if (!z.active) {
        grad = Vector::Zero(x.size());
        return value;
      }
      const double improvement = *spec.incumbent - m.mean;
      const Vector dz = (-improvement / (m.sigma * m.sigma)) * m.dsigma - m.dmean / m.sigma;
      grad = NormalPdf(z.z) * dz;
      return value;
    }
    case AcquisitionKind::kEI: {
      const ZScore z = ComputeZScore(*spec.incumbent, m.mean, m.sigma, model.noise());
      if (!z.active || z.z < kEiUnderflowZ) {
        grad = Vector::Zero(x.size());
        return value;
      }
      grad = -NormalCdf(z.z) * m.dmean + NormalPdf(z.z) * m.dsigma;
      return value;
    }
  }
  return value;
}

Vector AcquisitionGrad(const AcquisitionSpec& spec, const GpModel& model, const Vector& x) {
  Vector grad;
  AcquisitionValueAndGrad(spec, model, x, grad);
  return grad;
}

Vector ExpectedImprovementGradExpanded(const AcquisitionSpec& spec, const GpModel& model,
                                       const Vector& x) {
  AcquisitionSpec ei = spec;
  ei.kind = AcquisitionKind::kEI;
  ei.Validate();
  const Moments m = MomentsWithGrad(model, x);
  const ZScore z = ComputeZScore(*ei.incumbent, m.mean, m.sigma, model.noise());
  if (!z.active || z.z < kEiUnderflowZ) return Vector::Zero(x.size());
  const double improvement = *ei.incumbent - m.mean;
  const double pdf = NormalPdf(z.z);
  const double dpdf = -z.z * pdf;
  const Vector dz = (-improvement / (m.sigma * m.sigma)) * m.dsigma - m.dmean / m.sigma;
  return improvement * pdf * dz - NormalCdf(z.z) * m.dmean + m.sigma * dpdf * dz + pdf * m.dsigma;
}

AcquisitionHandle MakeAcquisitionHandle(const AcquisitionSpec& spec, const GpModel& model) {
  spec.Validate();
  auto shared = std::make_shared<const GpModel>(model);
  AcquisitionHandle handle;
  handle.value = [spec, shared](const Vector& x) { return AcquisitionValue(spec, *shared, x); };
  handle.value_and_grad = [spec, shared](const Vector& x, Vector& grad) {
    return AcquisitionValueAndGrad(spec, *shared, x, grad);
  };
  return handle;
}

}  // namespace acqregret
