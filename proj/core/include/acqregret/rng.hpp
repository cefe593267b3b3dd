#pragma once

#include "acqregret/domain.hpp"

#include <cstdint>
#include <initializer_list>
#include <random>

namespace acqregret {

/// Mixes a root seed with a path of indices (repeat, round, start, ...) into
/// an independent 64-bit seed. Used everywhere a worker needs its own stream
/// so that results never depend on scheduling order.
std::uint64_t DeriveSeed(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double Uniform01();
  double Normal();
  /// Uniform point in the box.
  Vector UniformIn(const Domain& domain);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace acqregret
