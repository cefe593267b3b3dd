#include "acqregret/benchmarks.hpp"
#include "acqregret/errors.hpp"
#include "acqregret/quasi_newton.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

namespace acqregret {
namespace {

// Radical-inverse (Halton) point i in [0,1)^d.
Vector Halton(std::uint64_t i, int d) {
  static const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29};
  Vector u(d);
  for (int k = 0; k < d; ++k) {
    double f = 1.0;
    double r = 0.0;
    std::uint64_t n = i + 1;
    while (n > 0) {
      f /= primes[k];
      r += f * static_cast<double>(n % static_cast<std::uint64_t>(primes[k]));
      n /= static_cast<std::uint64_t>(primes[k]);
    }
    u[k] = r;
  }
  return u;
}

// Quasi-random scan of the box followed by boxed quasi-Newton polish (with
// central-difference gradients) from the best scan points.
double ScanAndPolish(const Benchmark& b, int n_scan, int n_polish) {
  std::vector<std::pair<double, int>> scan;
  scan.reserve(static_cast<std::size_t>(n_scan));
  for (int i = 0; i < n_scan; ++i) {
    scan.emplace_back(b.eval(b.domain.FromUnit(Halton(static_cast<std::uint64_t>(i), b.dim))), i);
  }
  std::partial_sort(scan.begin(), scan.begin() + n_polish, scan.end(),
                    [](const auto& a, const auto& c) { return a.first < c.first; });
  const ValueGradFn fn = [&](const Vector& x, Vector& g) {
    g.resize(x.size());
    for (Eigen::Index k = 0; k < x.size(); ++k) {
      const double h = 1e-7 * b.domain.width()[k];
      Vector xp = b.domain.project(x + h * Vector::Unit(x.size(), k));
      Vector xm = b.domain.project(x - h * Vector::Unit(x.size(), k));
      g[k] = (b.eval(xp) - b.eval(xm)) / (xp[k] - xm[k]);
    }
    return b.eval(x);
  };
  QuasiNewtonOptions opts;
  opts.step_tol = 1e-12;
  opts.max_iters = 300;
  double best = scan.front().first;
  for (int i = 0; i < n_polish; ++i) {
    const Vector start = b.domain.FromUnit(
        Halton(static_cast<std::uint64_t>(scan[static_cast<std::size_t>(i)].second), b.dim));
    const QuasiNewtonResult r =
        MinimizeInBox(fn, b.domain.lower(), b.domain.upper(), start, opts);
    best = std::min(best, b.eval(r.x));
  }
  return best;
}

TEST(Benchmarks, RegistryHasNineEntries) {
  const std::vector<std::string> names = BenchmarkNames();
  EXPECT_EQ(names.size(), 9u);
  for (const std::string& n : names) EXPECT_EQ(GetBenchmark(n).name, n);
  EXPECT_THROW(GetBenchmark("ackley"), RegistryError);
  EXPECT_THROW(GetBenchmark("branin", 3), RegistryError);
  EXPECT_THROW(GetBenchmark("cosines", 4), RegistryError);
  EXPECT_EQ(GetBenchmark("cosines", 8).name, "cosines8");
  EXPECT_EQ(GetBenchmark("cosines").dim, 2);
  EXPECT_EQ(GetBenchmark("sphere", 5).dim, 5);
  EXPECT_EQ(GetBenchmark("rosenbrock").dim, 2);
}

TEST(Benchmarks, SphereMinimumAtOrigin) {
  const Benchmark b = GetBenchmark("sphere");
  EXPECT_EQ(b.f_min, 0.0);
  EXPECT_EQ(b.eval(Vector::Zero(2)), 0.0);
}

TEST(Benchmarks, ListedMinimizersAttainMinimum) {
  for (const std::string& name : BenchmarkNames()) {
    const Benchmark b = GetBenchmark(name);
    for (const Vector& x : b.x_min) {
      EXPECT_TRUE(b.domain.contains(x)) << name;
      EXPECT_LT(std::abs(b.eval(x) - b.f_min), 1e-6) << name;
    }
  }
}

TEST(Benchmarks, MinimumBoundsRandomSamples) {
  for (const std::string& name : BenchmarkNames()) {
    const Benchmark b = GetBenchmark(name);
    Rng rng(DeriveSeed(1, {static_cast<std::uint64_t>(b.dim)}));
    for (int i = 0; i < 100000; ++i) {
      const double v = b.eval(rng.UniformIn(b.domain));
      ASSERT_TRUE(std::isfinite(v)) << name;
      ASSERT_LE(b.f_min, v + 1e-9) << name;
    }
  }
}

TEST(Benchmarks, ScanAndPolishNeverBeatsRecordedMinimum) {
  for (const std::string& name : BenchmarkNames()) {
    const Benchmark b = GetBenchmark(name);
    const double found = ScanAndPolish(b, 1000000, 100);
    EXPECT_GE(found, b.f_min - 1e-6) << name;
    // The polish reaches the recorded value, so it is the true minimum.
    EXPECT_LT(found, b.f_min + 1e-4) << name;
  }
}

TEST(Benchmarks, KnownMinimumValues) {
  EXPECT_NEAR(GetBenchmark("branin").f_min, 0.397887, 1e-6);
  EXPECT_NEAR(GetBenchmark("sixhumpcamel").f_min, -1.031628, 1e-6);
  EXPECT_NEAR(GetBenchmark("branin").eval((Vector(2) << M_PI, 2.275).finished()), 0.397887, 1e-6);
}

TEST(Observe, NoiselessIsExact) {
  const Benchmark b = GetBenchmark("beale");
  Rng rng(1);
  const Vector x = (Vector(2) << 1.0, -2.0).finished();
  EXPECT_EQ(Observe(b, x, 0.0, rng), b.eval(x));
  EXPECT_THROW(Observe(b, Vector::Constant(2, 9.0), 0.0, rng), PreconditionError);
}

TEST(Observe, SeededNoiseIsReproducibleAndUnbiased) {
  const Benchmark b = GetBenchmark("branin");
  const Vector x = (Vector(2) << 0.0, 5.0).finished();
  Rng r1(9);
  Rng r2(9);
  EXPECT_EQ(Observe(b, x, 1.0, r1), Observe(b, x, 1.0, r2));
  Rng rng(10);
  double sum = 0.0;
  for (int i = 0; i < 10000; ++i) sum += Observe(b, x, 1.0, rng) - b.eval(x);
  EXPECT_LT(std::abs(sum / 10000.0), 4.0 / 100.0);
}

TEST(Benchmarks, LipschitzEstimateIsPositive) {
  EXPECT_GT(EstimateLipschitz(GetBenchmark("branin"), 1000, 3), 10.0);
}

}  // namespace
}  // namespace acqregret
