#include "acqregret/regret.hpp"

#include "acqregret/errors.hpp"
#include "acqregret/parallel.hpp"
#include "acqregret/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace acqregret {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Union-find over probe indices.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t Find(std::size_t i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }
  void Unite(std::size_t a, std::size_t b) {
    a = Find(a);
    b = Find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

void ExperimentConfig::Validate() const {
  bo.Validate();
  if (repeats < 1) throw ConfigError("repeats must be at least 1");
  if (start_counts.empty()) throw ConfigError("start_counts must not be empty");
  for (std::size_t i = 0; i < start_counts.size(); ++i) {
    if (start_counts[i] < 1) throw ConfigError("start_counts entries must be positive");
    if (i > 0 && start_counts[i] <= start_counts[i - 1]) {
      throw ConfigError("start_counts must be strictly ascending");
    }
  }
  if (moving_avg_window < 1) throw ConfigError("moving_avg_window must be at least 1");
  if (!(coincidence_tol > 0.0)) throw ConfigError("coincidence_tol must be positive");
  if (!(cluster_tol > 0.0)) throw ConfigError("cluster_tol must be positive");
  if (basin_probes < 1) throw ConfigError("basin_probes must be at least 1");
  if (threads < 1) throw ConfigError("threads must be at least 1");
}

bool Coincide(const Vector& a, const Vector& b, const Domain& domain, double tol) {
  return (a - b).norm() <= tol * domain.diameter();
}

std::vector<double> MovingAverage(const std::vector<double>& series, int window) {
  if (window < 1) throw PreconditionError("moving average window must be at least 1");
  std::vector<double> out(series.size());
  const std::size_t w = static_cast<std::size_t>(window);
  for (std::size_t i = 0; i < series.size(); ++i) {
    const std::size_t first = i + 1 >= w ? i + 1 - w : 0;
    double sum = 0.0;
    for (std::size_t j = first; j <= i; ++j) sum += series[j];
    out[i] = sum / static_cast<double>(i + 1 - first);
  }
  return out;
}

BasinStats EstimateBasins(const AcquisitionHandle& acq, const Domain& domain, int n_probes,
                          double cluster_tol, double coincidence_tol, const Vector& reference,
                          const LocalSearchConfig& local, std::uint64_t seed, int threads) {
  if (n_probes < 1) throw PreconditionError("n_probes must be at least 1");
  const std::vector<Vector> starts = DrawStarts(domain, n_probes, seed);
  const std::vector<OptResult> runs = LocalMaximizeEach(acq, domain, starts, local, threads);

  const double radius = cluster_tol * domain.diameter();
  DisjointSets sets(runs.size());
  for (std::size_t i = 0; i < runs.size(); ++i) {
    for (std::size_t j = i + 1; j < runs.size(); ++j) {
      if ((runs[i].x_star - runs[j].x_star).norm() <= radius) sets.Unite(i, j);
    }
  }
  // Clusters numbered by first appearance.
  std::vector<int> label(runs.size(), -1);
  std::vector<std::size_t> root_of_cluster;
  std::vector<int> counts;
  std::vector<std::size_t> best_member;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const std::size_t root = sets.Find(i);
    auto it = std::find(root_of_cluster.begin(), root_of_cluster.end(), root);
    int c;
    if (it == root_of_cluster.end()) {
      c = static_cast<int>(root_of_cluster.size());
      root_of_cluster.push_back(root);
      counts.push_back(0);
      best_member.push_back(i);
    } else {
      c = static_cast<int>(it - root_of_cluster.begin());
    }
    label[i] = c;
    ++counts[static_cast<std::size_t>(c)];
    if (runs[i].value > runs[best_member[static_cast<std::size_t>(c)]].value) {
      best_member[static_cast<std::size_t>(c)] = i;
    }
  }

  BasinStats stats;
  stats.n_probes = n_probes;
  stats.rho_hat = static_cast<int>(counts.size());
  for (std::size_t c = 0; c < counts.size(); ++c) {
    stats.beta_hat.push_back(static_cast<double>(counts[c]) / n_probes);
    stats.cluster_best.push_back(runs[best_member[c]].x_star);
  }
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (Coincide(stats.cluster_best[c], reference, domain, coincidence_tol)) {
      stats.beta_g_hat = stats.beta_hat[c];
      break;
    }
  }
  return stats;
}

BasinStats EstimateBasins(const GpModel& model, const AcquisitionSpec& spec, const Domain& domain,
                          int n_probes, double cluster_tol, double coincidence_tol,
                          const DirectConfig& direct, const LocalSearchConfig& local,
                          std::uint64_t seed, int threads) {
  const AcquisitionHandle acq = MakeAcquisitionHandle(spec, model);
  const OptResult global = DirectMaximize(acq, domain, direct);
  return EstimateBasins(acq, domain, n_probes, cluster_tol, coincidence_tol, global.x_star, local,
                        seed, threads);
}

ExperimentResult RunRegretExperiment(const ExperimentConfig& cfg) {
  cfg.Validate();
  const Benchmark bench = GetBenchmark(cfg.bo.benchmark, cfg.bo.dim);
  // Timing runs stay on one worker so measurements do not contend.
  const int workers = cfg.timing ? 1 : cfg.threads;

  struct RepeatOutput {
    std::vector<RegretRecord> records;
    std::vector<BasinStats> basins;
    std::optional<FailedRound> failure;
  };
  std::vector<RepeatOutput> outputs(static_cast<std::size_t>(cfg.repeats));

  ParallelFor(cfg.repeats, workers, [&](int repeat) {
    RepeatOutput& out = outputs[static_cast<std::size_t>(repeat)];
    BoConfig bo = cfg.bo;
    bo.optimizer.kind = AcqOptimizerKind::kDirect;
    bo.seed = DeriveSeed(cfg.seed, {static_cast<std::uint64_t>(repeat)});
    bo.threads = 1;
    bo.record_timing = cfg.timing;

    const RoundObserver observer = [&](const RoundSnapshot& snap) {
      const AcquisitionHandle acq = MakeAcquisitionHandle(snap.spec, snap.model);
      RegretRecord rec;
      rec.repeat = repeat;
      rec.round = snap.round;
      const Vector x_global = bench.domain.FromUnit(snap.chosen.x_star);
      rec.f_global = bench.eval(x_global);
      rec.acq_global = snap.chosen.value;
      rec.time_global_s = cfg.timing ? snap.chosen.wall_time_s : kNaN;
      const std::uint64_t start_seed = DeriveSeed(
          cfg.seed, {static_cast<std::uint64_t>(repeat), static_cast<std::uint64_t>(snap.round), 7});
      std::vector<OptResult> per_count;
      if (cfg.timing) {
        // Untimed ascent so the first measured search does not pay cold-cache costs.
        LocalMaximize(acq, snap.unit_domain, Vector::Constant(snap.unit_domain.dim(), 0.5),
                      cfg.bo.optimizer.local);
        for (int n : cfg.start_counts) {
          per_count.push_back(
              MultiStartMaximize(acq, snap.unit_domain, n, cfg.bo.optimizer.local, start_seed, 1));
        }
      } else {
        // Starts are nested across N, so one pass over the largest start set
        // yields every N as a prefix best; this matches MultiStartMaximize.
        const std::vector<OptResult> runs = LocalMaximizeEach(
            acq, snap.unit_domain, DrawStarts(snap.unit_domain, cfg.start_counts.back(), start_seed),
            cfg.bo.optimizer.local, 1);
        std::size_t best = 0;
        int evals = 0;
        std::size_t k = 0;
        for (std::size_t i = 0; i < runs.size(); ++i) {
          evals += runs[i].n_evals;
          if (runs[i].value > runs[best].value) best = i;
          if (static_cast<int>(i) + 1 == cfg.start_counts[k]) {
            OptResult r = runs[best];
            r.strategy = Strategy::MultiLocal(cfg.start_counts[k]);
            r.n_evals = evals;
            per_count.push_back(std::move(r));
            ++k;
          }
        }
      }
      for (const OptResult& local : per_count) {
        const double f_local = bench.eval(bench.domain.FromUnit(local.x_star));
        rec.f_local.push_back(f_local);
        rec.regret_diff.push_back(std::abs(rec.f_global - f_local));
        rec.time_local_s.push_back(cfg.timing ? local.wall_time_s : kNaN);
        rec.n_evals_local.push_back(local.n_evals);
        rec.coincided.push_back(
            Coincide(local.x_star, snap.chosen.x_star, snap.unit_domain, cfg.coincidence_tol));
        rec.acq_local.push_back(local.value);
      }
      out.records.push_back(std::move(rec));
      if (cfg.basins) {
        BasinStats stats = EstimateBasins(
            acq, snap.unit_domain, cfg.basin_probes, cfg.cluster_tol, cfg.coincidence_tol,
            snap.chosen.x_star, cfg.bo.optimizer.local,
            DeriveSeed(cfg.seed, {static_cast<std::uint64_t>(repeat),
                                  static_cast<std::uint64_t>(snap.round), 11}),
            1);
        stats.round = snap.round;
        out.basins.push_back(std::move(stats));
      }
    };

    const History history = RunBo(bo, observer);
    if (history.error) {
      const int failed_round = static_cast<int>(out.records.size()) + 1;
      out.failure = FailedRound{repeat, failed_round, *history.error};
    }
  });

  ExperimentResult result;
  result.benchmark = bench.name;
  result.start_counts = cfg.start_counts;
  for (RepeatOutput& out : outputs) {
    for (RegretRecord& r : out.records) result.records.push_back(std::move(r));
    result.basins.push_back(std::move(out.basins));
    if (out.failure) result.failures.push_back(std::move(*out.failure));
  }
  return result;
}

}  // namespace acqregret
