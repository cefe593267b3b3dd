// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include "acqregret/acquisition.hpp"
#include "acqregret/benchmarks.hpp"
#include "acqregret/config.hpp"
#include "acqregret/direct.hpp"
#include "acqregret/gp.hpp"
#include "acqregret/local_search.hpp"
#include "acqregret/regret.hpp"
#include "acqregret/report.hpp"

#include "test_support.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace acqregret {
namespace {

using testing::CentralDifference;
using testing::RandomModel;
using testing::RandomPoint;
using testing::RelativeError;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  std::string id;
  std::string title;
  double time_limit_s;
  std::function<Outcome()> run;
};

std::string Fmt(const char* format, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, a);
  return buf;
}

int Workers() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

// The eight benchmark families of the experiments, with cosines in 2-d.
const std::vector<std::string> kSurfaceBenchmarks = {"beale",      "branin",       "cosines2",
                                                     "hartmann6d", "holdertable",  "rosenbrock",
                                                     "sixhumpcamel", "sphere"};

Outcome GradientSuites() {
  Rng rng(20241);
  const double step = 1e-5;
  const double tol = 1e-5;
  double worst = 0.0;
  int checks = 0;
  for (KernelFamily family : {KernelFamily::kSquaredExponential, KernelFamily::kMatern52}) {
    for (int i = 0; i < 100; ++i) {
      const int n = 3 + i % 13;
      const int d = 1 + i % 6;
      const GpModel model = RandomModel(family, n, d, rng);
      const Vector x = RandomPoint(rng, d);
      const Vector other = RandomPoint(rng, d);

      const Kernel& k = model.kernel();
      worst = std::max(worst, RelativeError(k.GradX1(x, other),
                                            CentralDifference([&](const Vector& z) { return k(z, other); }, x, step)));
      const PosteriorWithGrad p = model.PredictWithGrad(x);
      worst = std::max(worst, RelativeError(p.dmean, CentralDifference(
                                                         [&](const Vector& z) { return model.Predict(z).mean; }, x, step)));
      worst = std::max(worst, RelativeError(p.dvariance,
                                            CentralDifference([&](const Vector& z) { return model.Predict(z).variance; },
                                                              x, step)));
      checks += 3;
      for (AcquisitionKind kind : {AcquisitionKind::kPI, AcquisitionKind::kEI, AcquisitionKind::kUCB}) {
        const AcquisitionSpec spec = AcquisitionSpec::ForTargets(kind, model.train_targets());
        const Vector fd = CentralDifference([&](const Vector& z) { return AcquisitionValue(spec, model, z); }, x, step);
        worst = std::max(worst, RelativeError(AcquisitionGrad(spec, model, x), fd));
        ++checks;
      }
    }
  }
  return {worst <= tol, std::to_string(checks) + " gradients, worst relative error " + Fmt("%.2e", worst) +
                            " (limit 1e-05)"};
}

Outcome OracleEquivalence() {
  Rng rng(20242);
  double worst = 0.0;
  for (int m = 0; m < 50; ++m) {
    const int n = 1 + m % 20;
    const int d = 1 + m % 6;
    const GpModel model = RandomModel(m % 2 ? KernelFamily::kMatern52 : KernelFamily::kSquaredExponential, n, d, rng);
    for (int q = 0; q < 20; ++q) {
      const Vector x = RandomPoint(rng, d);
      const Posterior fast = model.Predict(x);
      const Posterior dense = testing::DensePosterior(model, x);
      worst = std::max({worst, std::abs(fast.mean - dense.mean),
                        std::abs(fast.variance - std::max(0.0, dense.variance))});
    }
  }
  return {worst <= 1e-8, "50 models, worst |difference| " + Fmt("%.2e", worst) + " (limit 1e-08)"};
}

// Acquisition surface from a GP fitted to ten seeded evaluations.
GpModel FrozenSnapshot(const Benchmark& b, std::uint64_t seed) {
  const Domain unit = Domain::UnitCube(b.dim);
  Rng rng(seed);
  Matrix inputs(10, b.dim);
  Vector targets(10);
  for (int i = 0; i < 10; ++i) {
    const Vector u = rng.UniformIn(unit);
    inputs.row(i) = u.transpose();
    targets[i] = b.eval(b.domain.FromUnit(u));
  }
  const double mean = targets.mean();
  const double sd = std::sqrt((targets.array() - mean).square().mean());
  targets = (targets.array() - mean) / (sd > 0.0 ? sd : 1.0);
  return FitGp(inputs, targets, KernelFamily::kMatern52, GpFitOptions{}, seed).model;
}

Outcome DirectCorrectness() {
  DirectConfig cfg;
  cfg.max_evals = 5000;
  std::ostringstream detail;
  bool pass = true;
  double worst_gap = -1.0;
  auto check = [&](const std::string& name, const AcquisitionHandle& surface, const Domain& domain) {
    const int per_axis = static_cast<int>(std::lround(std::pow(1e6, 1.0 / domain.dim())));
    const testing::GridMaximum grid = testing::ScanGrid(surface.value, domain, per_axis);
    const double found = DirectMaximize(surface, domain, cfg).value;
    const double range = std::max(grid.value, found) - grid.min_value;
    const double gap = range > 0.0 ? (grid.value - found) / range : 0.0;
    worst_gap = std::max(worst_gap, gap);
    if (gap > 1e-2) {
      pass = false;
      detail << " " << name << " gap " << Fmt("%.3g", gap);
    }
  };
  for (std::size_t i = 0; i < kSurfaceBenchmarks.size(); ++i) {
    const Benchmark b = GetBenchmark(kSurfaceBenchmarks[i]);
    const GpModel model = FrozenSnapshot(b, DeriveSeed(20243, {i}));
    const AcquisitionSpec spec = AcquisitionSpec::ForTargets(AcquisitionKind::kEI, model.train_targets());
    check(b.name + "-ei", MakeAcquisitionHandle(spec, model), Domain::UnitCube(b.dim));
  }
  const Benchmark branin = GetBenchmark("branin");
  AcquisitionHandle negated;
  negated.value = [&branin](const Vector& x) { return -branin.eval(x); };
  check("-branin", negated, branin.domain);
  return {pass, "9 surfaces, worst (oracle - DIRECT)/range " + Fmt("%.2e", worst_gap) + " (limit 1e-02)" +
                    detail.str()};
}

// Criterion 4 configuration for one benchmark.
ExperimentConfig TrendConfig(const std::string& benchmark) {
  ExperimentConfig cfg;
  cfg.bo.benchmark = benchmark;
  cfg.bo.rounds = 50;
  cfg.repeats = 20;
  cfg.start_counts = {1, 10, 100};
  cfg.moving_avg_window = 10;
  cfg.seed = 4242;
  cfg.bo.seed = cfg.seed;
  cfg.threads = Workers();
  return cfg;
}

const std::vector<std::string> kTrendBenchmarks = {"branin", "sphere", "cosines2"};

// Shared between criteria 4, 7 and 8.
struct TrendRun {
  std::vector<std::string> manifests;
  std::vector<ExperimentResult> results;
  std::vector<std::string> records_csv;
};

TrendRun RunTrendExperiments() {
  TrendRun run;
  for (const std::string& name : kTrendBenchmarks) {
    std::ostringstream manifest;
    WriteSettings(manifest, ExperimentToSettings(TrendConfig(name)));
    std::istringstream in(manifest.str());
    ExperimentConfig cfg = ExperimentFromSettings(Settings::Parse(in, "manifest"));
    cfg.threads = Workers();
    ExperimentResult result = RunRegretExperiment(cfg);
    std::ostringstream csv;
    WriteRecordsCsv(csv, result.start_counts, result.records);
    run.manifests.push_back(manifest.str());
    run.records_csv.push_back(csv.str());
    run.results.push_back(std::move(result));
  }
  return run;
}

TrendRun& FirstTrendRun() {
  static TrendRun run = RunTrendExperiments();
  return run;
}

// Mean over repeats of the last moving-average value of each repeat's
// regret-difference series, per start count.
std::vector<double> FinalWindowMeans(const ExperimentResult& result, int window) {
  std::map<int, std::vector<std::vector<double>>> by_repeat;
  for (const RegretRecord& r : result.records) {
    auto& series = by_repeat[r.repeat];
    series.resize(result.start_counts.size());
    for (std::size_t k = 0; k < r.regret_diff.size(); ++k) series[k].push_back(r.regret_diff[k]);
  }
  std::vector<double> means(result.start_counts.size(), 0.0);
  for (const auto& [repeat, series] : by_repeat) {
    for (std::size_t k = 0; k < series.size(); ++k) means[k] += MovingAverage(series[k], window).back();
  }
  for (double& m : means) m /= static_cast<double>(by_repeat.size());
  return means;
}

Outcome TrendReproduction() {
  const TrendRun& run = FirstTrendRun();
  bool monotone = true;
  int halved = 0;
  std::ostringstream detail;
  for (std::size_t b = 0; b < run.results.size(); ++b) {
    const std::vector<double> m = FinalWindowMeans(run.results[b], 10);
    for (std::size_t k = 1; k < m.size(); ++k) monotone = monotone && m[k] <= m[k - 1];
    if (m.back() <= 0.5 * m.front()) ++halved;
    detail << " " << kTrendBenchmarks[b] << " [" << Fmt("%.4g", m[0]) << ", " << Fmt("%.4g", m[1]) << ", "
           << Fmt("%.4g", m[2]) << "]";
    if (!run.results[b].failures.empty()) detail << " (" << run.results[b].failures.size() << " failed rounds)";
  }
  return {monotone && halved >= 2, "final-window means for N=1,10,100:" + detail.str() + "; non-increasing " +
                                       (monotone ? "yes" : "no") + ", halved on " + std::to_string(halved) + "/3"};
}

Outcome TimingOrderings() {
  bool pass = true;
  std::ostringstream detail;
  double min_ratio = 1e300;
  double max_ratio = 0.0;
  for (std::size_t i = 0; i < kSurfaceBenchmarks.size(); ++i) {
    ExperimentConfig cfg;
    cfg.bo.benchmark = kSurfaceBenchmarks[i];
    cfg.bo.rounds = 15;
    cfg.repeats = 2;
    cfg.start_counts = {1, 10, 100, 1000};
    cfg.timing = true;
    cfg.seed = DeriveSeed(20245, {i});
    cfg.bo.seed = cfg.seed;
    const ExperimentResult result = RunRegretExperiment(cfg);
    RecordTable table{result.start_counts, result.records};
    const TimingRow row = ComputeTimingRow(cfg.bo.benchmark, table);
    std::vector<double> local;
    for (const auto& cell : row.local) local.push_back(cell.value_or(NAN));
    const double direct = row.direct.value_or(NAN);
    const bool ordered = local[0] < local[1] && local[1] < local[2] && local[2] < direct;
    bool scaled = true;
    for (std::size_t k = 1; k < local.size(); ++k) {
      const double ratio = local[k] / local[k - 1];
      min_ratio = std::min(min_ratio, ratio);
      max_ratio = std::max(max_ratio, ratio);
      scaled = scaled && ratio >= 5.0 && ratio <= 20.0;
    }
    if (!ordered || !scaled) {
      pass = false;
      detail << " " << cfg.bo.benchmark << (ordered ? "" : " out of order") << (scaled ? "" : " ratio outside [5,20]");
    }
  }
  return {pass, "8 benchmarks, local(1)<local(10)<local(100)<DIRECT; per-decade ratios in [" +
                    Fmt("%.2f", min_ratio) + ", " + Fmt("%.2f", max_ratio) + "]" + detail.str()};
}

// log P(X = k) for X ~ Binomial(n, p).
double LogBinomialPmf(int n, int k, double p) {
  if (p <= 0.0) return k == 0 ? 0.0 : -INFINITY;
  if (p >= 1.0) return k == n ? 0.0 : -INFINITY;
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) + k * std::log(p) +
         (n - k) * std::log1p(-p);
}

double BinomialCdf(int n, int k, double p) {
  double s = 0.0;
  for (int i = 0; i <= k; ++i) s += std::exp(LogBinomialPmf(n, i, p));
  return std::min(1.0, s);
}

// Exact (Clopper-Pearson) two-sided 95% interval for k successes in n.
std::pair<double, double> ClopperPearson(int n, int k) {
  auto bisect = [](const std::function<bool(double)>& below) {
    double lo = 0.0;
    double hi = 1.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (below(mid) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };
  const double lower = k == 0 ? 0.0 : bisect([&](double p) { return 1.0 - BinomialCdf(n, k - 1, p) < 0.025; });
  const double upper = k == n ? 1.0 : bisect([&](double p) { return BinomialCdf(n, k, p) > 0.025; });
  return {lower, upper};
}

Outcome MissRateLaw() {
  const Domain unit = Domain::UnitCube(2);
  const AcquisitionHandle surface = testing::BimodalSurface();
  const LocalSearchConfig local;
  const Vector global = LocalMaximize(surface, unit, (Vector(2) << 0.25, 0.3).finished(), local).x_star;
  const int trials = 500;
  const std::uint64_t seed = 20246;
  auto misses = [&](int n_starts) {
    int count = 0;
    for (int t = 0; t < trials; ++t) {
      const OptResult r = MultiStartMaximize(surface, unit, n_starts, local,
                                             DeriveSeed(seed, {static_cast<std::uint64_t>(n_starts),
                                                               static_cast<std::uint64_t>(t)}));
      if (!Coincide(r.x_star, global, unit, 1e-3)) ++count;
    }
    return count;
  };
  const int single = misses(1);
  const double miss1 = static_cast<double>(single) / trials;
  bool pass = true;
  std::ostringstream detail;
  detail << "miss(1)=" << Fmt("%.3f", miss1);
  for (int n : {1, 2, 4, 8}) {
    const int k = n == 1 ? single : misses(n);
    const double predicted = std::pow(miss1, n);
    const auto [lo, hi] = ClopperPearson(trials, k);
    const bool inside = predicted >= lo && predicted <= hi;
    pass = pass && inside;
    detail << "; N=" << n << " measured " << Fmt("%.3f", static_cast<double>(k) / trials) << " CI ["
           << Fmt("%.3f", lo) << ", " << Fmt("%.3f", hi) << "] predicted " << Fmt("%.4f", predicted)
           << (inside ? "" : " OUTSIDE");
  }
  return {pass, detail.str()};
}

Outcome NestedDominance() {
  const TrendRun& run = FirstTrendRun();
  long checked = 0;
  long violations = 0;
  for (const ExperimentResult& result : run.results) {
    for (const RegretRecord& r : result.records) {
      for (std::size_t k = 1; k < r.acq_local.size(); ++k) {
        ++checked;
        if (r.acq_local[k] < r.acq_local[k - 1]) ++violations;
      }
    }
  }
  return {violations == 0 && checked > 0,
          std::to_string(checked) + " (round, repeat, N) comparisons, " + std::to_string(violations) + " violations"};
}

Outcome Determinism() {
  const TrendRun& first = FirstTrendRun();
  const TrendRun second = RunTrendExperiments();
  std::ostringstream detail;
  bool pass = true;
  for (std::size_t b = 0; b < first.records_csv.size(); ++b) {
    const bool same = first.manifests[b] == second.manifests[b] && first.records_csv[b] == second.records_csv[b];
    pass = pass && same;
    detail << " " << kTrendBenchmarks[b] << (same ? " identical" : " DIFFERENT") << " ("
           << first.records_csv[b].size() << " bytes)";
  }
  return {pass, "records.csv of two runs from one manifest:" + detail.str()};
}

}  // namespace
}  // namespace acqregret

// Optional arguments select criteria by number; all run by default.
int main(int argc, char** argv) {
  using namespace acqregret;
  const std::vector<std::string> selected(argv + 1, argv + argc);
  const std::vector<Criterion> criteria = {
      {"1", "gradient suites", 30.0, GradientSuites},
      {"2", "GP oracle equivalence", 10.0, OracleEquivalence},
      {"3", "DIRECT correctness", 300.0, DirectCorrectness},
      {"4", "regret trend reproduction", 1800.0, TrendReproduction},
      {"5", "timing orderings", 600.0, TimingOrderings},
      {"6", "multi-start miss-rate law", 300.0, MissRateLaw},
      {"7", "nested-start dominance", 1e300, NestedDominance},
      {"8", "determinism", 1800.0, Determinism},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("error: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds <= c.time_limit_s;
    const bool pass = outcome.pass && in_time;
    if (!pass) ++failed;
    std::cout << (pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.title << ": " << outcome.detail << " ("
              << Fmt("%.1f", seconds) << " s" << (in_time ? "" : ", over time limit") << ")" << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
