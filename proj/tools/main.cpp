#include "commands.hpp"

#include "acqregret/errors.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace {

using namespace acqregret::cli;

void AddConfigFlags(CLI::App* cmd, ConfigArgs& args) {
  cmd->add_option("--config", args.config_path, "Experiment config file (key = value)");
  cmd->add_option("--set", args.overrides, "Override a config key, key=value (repeatable)")
      ->take_all();
  cmd->add_option("--seed", args.seed, "Master seed (overrides the config)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acquisition-function optimizer regret experiments", "acqregret"};
  app.set_version_flag("--version", ACQREGRET_VERSION);
  app.require_subcommand(1);
  app.fallthrough(false);

  BenchListArgs bench_list;
  auto* bench_cmd = app.add_subcommand("bench-list", "List benchmark functions");
  bench_cmd->add_option("--name", bench_list.name, "Print formula, box, f_min and source of one entry");

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a GP surrogate to a CSV of x_0..x_{d-1},y rows");
  fit_cmd->add_option("--data", fit.data_path, "Training CSV")->required();
  fit_cmd->add_option("--kernel", fit.kernel, "se | matern52 | matern32")->capture_default_str();
  fit_cmd->add_option("--noise", fit.noise, "'fitted' or a fixed noise standard deviation")
      ->capture_default_str();
  fit_cmd->add_option("--restarts", fit.restarts, "Likelihood restarts")->capture_default_str();
  fit_cmd->add_option("--seed", fit.seed, "Seed for restart draws")->capture_default_str();
  fit_cmd->add_option("--out", fit.out_dir, "Output directory")->required();

  OptimizeAcqArgs opt;
  auto* opt_cmd = app.add_subcommand("optimize-acq", "Maximize an acquisition on a saved model");
  opt_cmd->add_option("--model", opt.model_path, "Model file written by fit")->required();
  opt_cmd->add_option("--acquisition", opt.acquisition, "pi | ei | ucb")->capture_default_str();
  opt_cmd->add_option("--ucb-alpha", opt.ucb_alpha, "UCB exploration weight")->capture_default_str();
  opt_cmd->add_option("--strategy", opt.strategy, "direct | local | multilocal")
      ->capture_default_str();
  opt_cmd->add_option("--n-starts", opt.n_starts, "Starts for multilocal")->capture_default_str();
  opt_cmd->add_option("--lower", opt.lower, "Box lower corner (default all 0)")->delimiter(',');
  opt_cmd->add_option("--upper", opt.upper, "Box upper corner (default all 1)")->delimiter(',');
  opt_cmd->add_option("--direct-max-evals", opt.direct_max_evals, "DIRECT budget")
      ->capture_default_str();
  opt_cmd->add_option("--seed", opt.seed, "Seed for local starts")->capture_default_str();
  opt_cmd->add_option("--out", opt.out_dir, "Output directory")->required();

  RunBoArgs run_bo;
  auto* bo_cmd = app.add_subcommand("run-bo", "Run one Bayesian optimization loop");
  AddConfigFlags(bo_cmd, run_bo.config);
  bo_cmd->add_flag("--timing", run_bo.timing, "Record wall-clock per acquisition optimization");
  bo_cmd->add_option("--out", run_bo.out_dir, "Output directory")->required();

  RegretExpArgs regret;
  auto* regret_cmd = app.add_subcommand("regret-exp", "Global-versus-local regret experiment");
  AddConfigFlags(regret_cmd, regret.config);
  regret_cmd->add_flag("--basins", regret.basins, "Estimate acquisition basins every round");
  regret_cmd->add_flag("--timing", regret.timing,
                       "Measure optimization wall-clock (runs repeats on one worker)");
  regret_cmd->add_option("--out", regret.out_dir, "Output directory")->required();

  EstimateBasinsArgs basins;
  auto* basins_cmd =
      app.add_subcommand("estimate-basins", "Cluster local maxima of an acquisition on a saved model");
  basins_cmd->add_option("--model", basins.model_path, "Model file written by fit")->required();
  basins_cmd->add_option("--acquisition", basins.acquisition, "pi | ei | ucb")->capture_default_str();
  basins_cmd->add_option("--ucb-alpha", basins.ucb_alpha, "UCB exploration weight")
      ->capture_default_str();
  basins_cmd->add_option("--probes", basins.probes, "Single-start local searches")
      ->capture_default_str();
  basins_cmd->add_option("--cluster-tol", basins.cluster_tol, "Linkage radius over diameter")
      ->capture_default_str();
  basins_cmd->add_option("--coincidence-tol", basins.coincidence_tol,
                         "Match radius to the DIRECT maximizer, over diameter")
      ->capture_default_str();
  basins_cmd->add_option("--lower", basins.lower, "Box lower corner (default all 0)")->delimiter(',');
  basins_cmd->add_option("--upper", basins.upper, "Box upper corner (default all 1)")->delimiter(',');
  basins_cmd->add_option("--seed", basins.seed, "Seed for probe starts")->capture_default_str();
  basins_cmd->add_option("--out", basins.out_dir, "Output directory")->required();

  TimingTableArgs timing;
  auto* timing_cmd = app.add_subcommand("timing-table", "Mean optimization time per strategy");
  timing_cmd->add_option("--in", timing.in_dirs, "regret-exp output directory (repeatable)")
      ->required();
  timing_cmd->add_option("--out", timing.out_dir, "Where to write timing.csv (default: first --in)");

  PlotArgs plot;
  auto* plot_cmd = app.add_subcommand("plot", "SVG panels and plot data from a regret-exp run");
  plot_cmd->add_option("--in", plot.in_dir, "regret-exp output directory")->required();
  plot_cmd->add_option("--out", plot.out_dir, "Output directory (default: --in)");
  plot_cmd->add_option("--window", plot.window, "Moving-average window (default: from manifest)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*bench_cmd) return RunBenchList(bench_list);
    if (*fit_cmd) return RunFit(fit);
    if (*opt_cmd) return RunOptimizeAcq(opt, ResolveThreads());
    if (*bo_cmd) return RunRunBo(run_bo, ResolveThreads());
    if (*regret_cmd) return RunRegretExp(regret, ResolveThreads());
    if (*basins_cmd) return RunEstimateBasins(basins, ResolveThreads());
    if (*timing_cmd) return RunTimingTable(timing);
    if (*plot_cmd) return RunPlot(plot);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "acqregret: %s\n", e.what());
    return 2;
  } catch (const acqregret::ConfigError& e) {
    std::fprintf(stderr, "acqregret: %s\n", e.what());
    return 2;
  } catch (const acqregret::RegistryError& e) {
    std::fprintf(stderr, "acqregret: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "acqregret: %s\n", e.what());
    return 1;
  }
  return 2;
}
