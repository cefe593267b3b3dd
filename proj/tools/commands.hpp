#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace acqregret::cli {

// Raised for bad flags or configuration; maps to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
};

struct BenchListArgs {
  std::string name;  // detailed view of one entry when set
};

struct FitArgs {
  std::string data_path;
  std::string kernel = "matern52";
  std::string noise = "fitted";
  int restarts = 8;
  std::uint64_t seed = 0;
  std::string out_dir;
};

struct OptimizeAcqArgs {
  std::string model_path;
  std::string acquisition = "ei";
  double ucb_alpha = 2.0;
  std::string strategy = "direct";
  int n_starts = 10;
  std::vector<double> lower;
  std::vector<double> upper;
  int direct_max_evals = 10000;
  std::uint64_t seed = 0;
  std::string out_dir;
};

struct RunBoArgs {
  ConfigArgs config;
  bool timing = false;
  std::string out_dir;
};

struct RegretExpArgs {
  ConfigArgs config;
  bool basins = false;
  bool timing = false;
  std::string out_dir;
};

struct EstimateBasinsArgs {
  std::string model_path;
  std::string acquisition = "ei";
  double ucb_alpha = 2.0;
  int probes = 200;
  double cluster_tol = 1e-2;
  double coincidence_tol = 1e-3;
  std::vector<double> lower;
  std::vector<double> upper;
  std::uint64_t seed = 0;
  std::string out_dir;
};

struct TimingTableArgs {
  std::vector<std::string> in_dirs;
  std::string out_dir;
};

struct PlotArgs {
  std::string in_dir;
  std::string out_dir;
  std::optional<int> window;
};

int RunBenchList(const BenchListArgs& args);
int RunFit(const FitArgs& args);
int RunOptimizeAcq(const OptimizeAcqArgs& args, int threads);
int RunRunBo(const RunBoArgs& args, int threads);
int RunRegretExp(const RegretExpArgs& args, int threads);
int RunEstimateBasins(const EstimateBasinsArgs& args, int threads);
int RunTimingTable(const TimingTableArgs& args);
int RunPlot(const PlotArgs& args);

/// Worker count from ACQREGRET_THREADS, else the hardware concurrency.
int ResolveThreads();

}  // namespace acqregret::cli
