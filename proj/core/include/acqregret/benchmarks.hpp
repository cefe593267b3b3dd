#pragma once

#include "acqregret/domain.hpp"
#include "acqregret/rng.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace acqregret {

/// Test objective for minimization with its literature box and known optimum.
struct Benchmark {
  std::string name;
  int dim = 0;
  Domain domain;
  std::function<double(const Vector&)> eval;
  double f_min = 0.0;
  std::vector<Vector> x_min;  // may be empty
  std::string formula;
  std::string provenance;
};

/// Registry names, in listing order: beale, branin, cosines2, cosines8,
/// hartmann6d, holdertable, rosenbrock, sixhumpcamel, sphere.
std::vector<std::string> BenchmarkNames();

/// Looks up a benchmark. "cosines" takes dim 2 or 8 (default 2); rosenbrock
/// and sphere take any dim >= 1 (default 2; rosenbrock needs >= 2). Other
/// entries have a fixed dimension and reject a conflicting dim. Throws
/// RegistryError for unknown names or unsupported dimensions.
Benchmark GetBenchmark(std::string_view name, std::optional<int> dim = std::nullopt);

/// f(x) + sigma_n * N(0,1). Exactly f(x) when sigma_n == 0 (no draw is
/// consumed). Throws PreconditionError when x is outside the domain.
double Observe(const Benchmark& benchmark, const Vector& x, double sigma_n, Rng& rng);

/// Largest central-difference gradient norm over uniform samples; a lower
/// estimate of the Lipschitz constant on the box.
double EstimateLipschitz(const Benchmark& benchmark, int n_samples, std::uint64_t seed);

}  // namespace acqregret
