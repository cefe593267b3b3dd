#pragma once

#include "acqregret/bo.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace acqregret {

struct ExperimentConfig {
  /// Benchmark, surrogate, acquisition, rounds and seeds of each repeat. The
  /// queried point always comes from DIRECT (bo.optimizer.direct); the local
  /// searches use bo.optimizer.local.
  BoConfig bo;
  int repeats = 50;
  std::vector<int> start_counts = {1, 10, 100, 1000};
  int moving_avg_window = 10;
  double coincidence_tol = 1e-3;  // relative to the domain diameter
  double cluster_tol = 1e-2;      // relative to the domain diameter
  bool basins = false;
  int basin_probes = 200;
  /// Measure wall-clock per acquisition optimization. Forces a single worker.
  bool timing = false;
  std::uint64_t seed = 0;
  int threads = 1;

  void Validate() const;
};

struct RegretRecord {
  int repeat = 0;
  int round = 0;
  double f_global = 0.0;  // noiseless objective at the DIRECT point
  std::vector<double> f_local;
  std::vector<double> regret_diff;  // |f_global - f_local|
  std::vector<double> time_local_s;  // NaN unless timing
  std::vector<int> n_evals_local;
  double time_global_s = 0.0;  // NaN unless timing
  std::vector<bool> coincided;
  // Acquisition values on the frozen snapshot (not part of records.csv).
  double acq_global = 0.0;
  std::vector<double> acq_local;
};

struct BasinStats {
  int round = 0;
  int n_probes = 0;
  int rho_hat = 0;                // number of clusters
  std::vector<double> beta_hat;   // cluster frequencies, sum to 1
  double beta_g_hat = 0.0;        // frequency of the cluster at the reference maximizer
  std::vector<Vector> cluster_best;  // best converged point per cluster
};

struct FailedRound {
  int repeat = 0;
  int round = 0;
  std::string error;
};

struct ExperimentResult {
  std::string benchmark;
  std::vector<int> start_counts;
  std::vector<RegretRecord> records;               // ordered by (repeat, round)
  std::vector<std::vector<BasinStats>> basins;     // per repeat, when enabled
  std::vector<FailedRound> failures;
};

/// Synchronized-history experiment: each repeat runs BO with DIRECT choosing
/// every query; before each query, multi-start local searches for every N in
/// start_counts run on the same frozen acquisition with nested starts, and
/// the noiseless objective is compared at the DIRECT and local points.
ExperimentResult RunRegretExperiment(const ExperimentConfig& cfg);

/// Prefix moving average: element i is the unweighted mean of
/// series[max(0, i - window + 1) .. i].
std::vector<double> MovingAverage(const std::vector<double>& series, int window);

/// Runs n_probes single-start local searches from seeded uniform starts,
/// groups the end points by single linkage with radius
/// cluster_tol * diameter, and reports cluster frequencies. beta_g_hat is the
/// frequency of the cluster whose best member lies within
/// coincidence_tol * diameter of reference (0 when none does).
BasinStats EstimateBasins(const AcquisitionHandle& acq, const Domain& domain, int n_probes,
                          double cluster_tol, double coincidence_tol, const Vector& reference,
                          const LocalSearchConfig& local, std::uint64_t seed, int threads = 1);

/// Same, with the reference maximizer found by DIRECT.
BasinStats EstimateBasins(const GpModel& model, const AcquisitionSpec& spec, const Domain& domain,
                          int n_probes, double cluster_tol, double coincidence_tol,
                          const DirectConfig& direct, const LocalSearchConfig& local,
                          std::uint64_t seed, int threads = 1);

/// Whether two maximizers coincide: ||a - b|| <= tol * diameter.
bool Coincide(const Vector& a, const Vector& b, const Domain& domain, double tol);

}  // namespace acqregret
