#pragma once

#include "acqregret/acquisition.hpp"
#include "acqregret/benchmarks.hpp"
#include "acqregret/direct.hpp"
#include "acqregret/gp.hpp"
#include "acqregret/local_search.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace acqregret {

enum class AcqOptimizerKind { kDirect, kMultiLocal };

struct AcqOptimizerConfig {
  AcqOptimizerKind kind = AcqOptimizerKind::kDirect;
  DirectConfig direct;
  LocalSearchConfig local;
  int n_starts = 10;  // MultiLocal only
};

struct BoConfig {
  std::string benchmark = "branin";
  std::optional<int> dim;
  KernelFamily kernel = KernelFamily::kMatern52;
  AcquisitionKind acquisition = AcquisitionKind::kEI;
  double ucb_alpha = kDefaultUcbAlpha;
  int rounds = 50;
  int n_init = 3;
  AcqOptimizerConfig optimizer;
  int gp_restarts = 8;
  /// Surrogate noise held fixed at this value; fitted when empty.
  std::optional<double> gp_fixed_noise;
  /// Standard deviation of the benchmark observation noise.
  double observation_noise = 0.0;
  std::uint64_t seed = 0;
  int threads = 1;
  /// Wall-clock columns stay empty unless set, so outputs are
  /// byte-reproducible.
  bool record_timing = false;

  void Validate() const;
};

struct HistoryRow {
  int round = 0;
  Vector x;
  double y = 0.0;
  double best = 0.0;       // running minimum of y
  double acq_value = 0.0;  // NaN for initial-design rows
  std::string strategy;    // "init" for the initial design
  double wall_time_s = 0.0;  // NaN when not recorded
};

struct History {
  int dim = 0;
  std::vector<HistoryRow> rows;
  std::optional<std::string> error;  // set when the run aborted early
};

/// Everything a round observer may inspect. The model, acquisition and
/// chosen point all live in the unit cube with standardized targets.
struct RoundSnapshot {
  int round = 0;  // 1-based BO iteration, excluding the initial design
  const Benchmark& benchmark;
  const GpModel& model;
  const AcquisitionSpec& spec;
  const Domain& unit_domain;
  const OptResult& chosen;
};

using RoundObserver = std::function<void(const RoundSnapshot&)>;

/// The BO loop: n_init seeded uniform points, then per round refit the GP on
/// unit-cube inputs and standardized targets, maximize the acquisition with
/// the configured strategy, observe the benchmark and append. The observer
/// runs after the maximization and before the observation. A surrogate
/// failure stops the loop and sets History::error.
History RunBo(const BoConfig& cfg, const RoundObserver& observer = {});

/// Header: round,x_0..x_{d-1},y,best,acq_value,strategy,wall_time_s
void WriteHistoryCsv(std::ostream& out, const History& history);

}  // namespace acqregret
