#include "acqregret/rng.hpp"

#include <cmath>

namespace acqregret {
namespace {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t DeriveSeed(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = SplitMix64(seed);
  for (std::uint64_t p : path) {
    h = SplitMix64(h ^ SplitMix64(p + 0x632be59bd9b4e019ULL));
  }
  return h;
}

// Hand-rolled rather than std::uniform_real_distribution so that streams are
// identical across standard library implementations.
double Rng::Uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::Normal() {
  // Box-Muller; u1 in (0,1] keeps the log finite.
  constexpr double kTwoPi = 6.283185307179586476925286766559;
  const double u1 = 1.0 - Uniform01();
  const double u2 = Uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

Vector Rng::UniformIn(const Domain& domain) {
  Vector x(domain.dim());
  for (int i = 0; i < domain.dim(); ++i) {
    x[i] = domain.lower()[i] + Uniform01() * (domain.upper()[i] - domain.lower()[i]);
  }
  return x;
}

}  // namespace acqregret
