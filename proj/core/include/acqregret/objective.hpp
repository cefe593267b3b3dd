#pragma once

#include "acqregret/domain.hpp"

#include <functional>

namespace acqregret {

/// A surface to be maximized: value at x, and value plus gradient. Handles
/// are cheap to copy and must be safe to call concurrently.
struct AcquisitionHandle {
  std::function<double(const Vector& x)> value;
  std::function<double(const Vector& x, Vector& grad)> value_and_grad;
};

}  // namespace acqregret
