#include "commands.hpp"

#include "acqregret/acquisition.hpp"
#include "acqregret/benchmarks.hpp"
#include "acqregret/bo.hpp"
#include "acqregret/config.hpp"
#include "acqregret/direct.hpp"
#include "acqregret/errors.hpp"
#include "acqregret/format.hpp"
#include "acqregret/gp.hpp"
#include "acqregret/local_search.hpp"
#include "acqregret/regret.hpp"
#include "acqregret/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace acqregret::cli {
namespace fs = std::filesystem;
namespace {

fs::path PrepareOutDir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir + ": " + ec.message());
  return fs::path(dir);
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.flush();
  if (!out) throw Error("cannot write " + path.string());
}

// Manifest for config-driven commands: loadable again with --config.
void WriteConfigManifest(const fs::path& dir, const std::string& command, const Settings& settings) {
  std::ostringstream ss;
  ss << "# acqregret " << command << "; replay with --config manifest.cfg\n";
  WriteSettings(ss, settings);
  WriteText(dir / "manifest.cfg", ss.str());
}

// Manifest for flag-driven commands: the resolved flags.
void WriteFlagManifest(const fs::path& dir, const std::string& command,
                       const std::vector<std::pair<std::string, std::string>>& flags) {
  std::ostringstream ss;
  ss << "# acqregret " << command << '\n' << "version = " << ACQREGRET_VERSION << '\n';
  for (const auto& [key, value] : flags) ss << key << " = " << value << '\n';
  WriteText(dir / "manifest.cfg", ss.str());
}

ExperimentConfig LoadExperiment(const ConfigArgs& args) {
  Settings settings;
  if (!args.config_path.empty()) settings = Settings::Load(args.config_path);
  for (const std::string& o : args.overrides) settings.Set(o);
  if (args.seed) settings.Set("seed", std::to_string(*args.seed));
  return ExperimentFromSettings(settings);
}

std::string JoinList(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + FormatDouble(v[i]);
  return s;
}

Domain ResolveBox(const std::vector<double>& lower, const std::vector<double>& upper, int dim) {
  if (lower.empty() && upper.empty()) return Domain::UnitCube(dim);
  if (static_cast<int>(lower.size()) != dim || static_cast<int>(upper.size()) != dim) {
    throw UsageError("--lower and --upper need " + std::to_string(dim) + " values each");
  }
  try {
    return Domain(Eigen::Map<const Vector>(lower.data(), dim), Eigen::Map<const Vector>(upper.data(), dim));
  } catch (const PreconditionError& e) {
    throw UsageError(e.what());
  }
}

GpModel LoadModel(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open model file: " + path);
  return ReadGpModel(in);
}

std::string FormatPoint(const Vector& x) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < x.size(); ++i) s += (i ? ", " : "") + FormatDouble(x[i]);
  return s + ")";
}

// Benchmark label and smoothing window recorded in a run directory.
struct RunInfo {
  std::string benchmark;
  int window = 10;
};

RunInfo ReadRunInfo(const fs::path& dir) {
  RunInfo info;
  info.benchmark = dir.filename().string();
  if (info.benchmark.empty()) info.benchmark = dir.parent_path().filename().string();
  const fs::path manifest = dir / "manifest.cfg";
  if (!fs::exists(manifest)) return info;
  const ExperimentConfig cfg = ExperimentFromSettings(Settings::Load(manifest.string()));
  info.benchmark = GetBenchmark(cfg.bo.benchmark, cfg.bo.dim).name;
  info.window = cfg.moving_avg_window;
  return info;
}

}  // namespace

int ResolveThreads() {
  if (const char* env = std::getenv("ACQREGRET_THREADS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (*end != '\0' || n < 1 || n > 4096) {
      throw UsageError(std::string("ACQREGRET_THREADS must be a positive integer, got '") + env + "'");
    }
    return static_cast<int>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

int RunBenchList(const BenchListArgs& args) {
  const auto describe_box = [](const Benchmark& b) {
    std::string s;
    for (int i = 0; i < b.dim; ++i) {
      s += (i ? " x " : "") + std::string("[") + FormatDouble(b.domain.lower()[i]) + ", " +
           FormatDouble(b.domain.upper()[i]) + "]";
    }
    return s;
  };
  if (!args.name.empty()) {
    const Benchmark b = GetBenchmark(args.name);
    std::cout << "name:       " << b.name << '\n'
              << "dim:        " << b.dim << '\n'
              << "box:        " << describe_box(b) << '\n'
              << "formula:    " << b.formula << '\n'
              << "f_min:      " << FormatDouble(b.f_min) << '\n';
    for (const Vector& x : b.x_min) std::cout << "x_min:      " << FormatPoint(x) << '\n';
    std::cout << "provenance: " << b.provenance << '\n';
    return 0;
  }
  for (const std::string& name : BenchmarkNames()) {
    const Benchmark b = GetBenchmark(name);
    std::printf("%-13s dim=%d  box=%s  f_min=%s\n", b.name.c_str(), b.dim, describe_box(b).c_str(),
                FormatDouble(b.f_min).c_str());
  }
  return 0;
}

int RunFit(const FitArgs& args) {
  std::ifstream in(args.data_path);
  if (!in) throw UsageError("cannot open data file: " + args.data_path);
  std::string line;
  if (!std::getline(in, line)) throw UsageError("data file is empty: " + args.data_path);
  const auto columns = std::count(line.begin(), line.end(), ',') + 1;
  if (columns < 2) throw UsageError("data header must be x_0,..,x_{d-1},y");
  const int dim = static_cast<int>(columns) - 1;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw UsageError("malformed number '" + cell + "' in " + args.data_path);
      }
    }
    if (static_cast<int>(row.size()) != dim + 1) {
      throw UsageError("row with wrong column count in " + args.data_path);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw UsageError("no data rows in " + args.data_path);
  Matrix inputs(static_cast<Eigen::Index>(rows.size()), dim);
  Vector targets(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (int j = 0; j < dim; ++j) inputs(static_cast<Eigen::Index>(i), j) = rows[i][static_cast<std::size_t>(j)];
    targets[static_cast<Eigen::Index>(i)] = rows[i].back();
  }

  GpFitOptions options;
  options.restarts = args.restarts;
  if (args.restarts < 1) throw UsageError("--restarts must be at least 1");
  if (args.noise != "fitted") {
    try {
      options.fixed_noise = std::stod(args.noise);
    } catch (const std::exception&) {
      throw UsageError("--noise must be 'fitted' or a number");
    }
  }
  const GpFitResult fit = FitGp(inputs, targets, ParseKernelFamily(args.kernel), options, args.seed);

  const fs::path dir = PrepareOutDir(args.out_dir);
  std::ostringstream model;
  WriteGpModel(model, fit.model);
  WriteText(dir / "model.txt", model.str());
  WriteFlagManifest(dir, "fit",
                    {{"data", args.data_path}, {"kernel", args.kernel}, {"noise", args.noise},
                     {"restarts", std::to_string(args.restarts)}, {"seed", std::to_string(args.seed)}});
  std::cout << "log marginal likelihood: " << FormatDouble(fit.final_log_likelihood[static_cast<std::size_t>(fit.best_start)])
            << "\nsignal scale: " << FormatDouble(fit.model.kernel().signal_scale())
            << "\nlengthscales: " << FormatPoint(fit.model.kernel().lengthscales())
            << "\nnoise: " << FormatDouble(fit.model.noise()) << "\nwrote " << (dir / "model.txt").string()
            << '\n';
  return 0;
}

int RunOptimizeAcq(const OptimizeAcqArgs& args, int threads) {
  const GpModel model = LoadModel(args.model_path);
  const Domain domain = ResolveBox(args.lower, args.upper, model.dim());
  const AcquisitionSpec spec =
      AcquisitionSpec::ForTargets(ParseAcquisitionKind(args.acquisition), model.train_targets(), args.ucb_alpha);
  const AcquisitionHandle acq = MakeAcquisitionHandle(spec, model);

  OptResult result;
  if (args.strategy == "direct") {
    DirectConfig direct;
    direct.max_evals = args.direct_max_evals;
    direct.Validate();
    result = DirectMaximize(acq, domain, direct);
  } else if (args.strategy == "local") {
    result = MultiStartMaximize(acq, domain, 1, LocalSearchConfig{}, args.seed, 1);
    result.strategy = Strategy::Local();
  } else if (args.strategy == "multilocal") {
    if (args.n_starts < 1) throw UsageError("--n-starts must be at least 1");
    result = MultiStartMaximize(acq, domain, args.n_starts, LocalSearchConfig{}, args.seed, threads);
  } else {
    throw UsageError("--strategy must be direct, local or multilocal");
  }

  const fs::path dir = PrepareOutDir(args.out_dir);
  std::ostringstream csv;
  csv << "strategy,acq_value,n_evals,converged";
  for (int i = 0; i < model.dim(); ++i) csv << ",x_" << i;
  csv << '\n' << result.strategy.Label() << ',' << FormatDouble(result.value) << ',' << result.n_evals << ','
      << (result.converged ? 1 : 0);
  for (Eigen::Index i = 0; i < result.x_star.size(); ++i) csv << ',' << FormatDouble(result.x_star[i]);
  csv << '\n';
  WriteText(dir / "result.csv", csv.str());
  WriteFlagManifest(dir, "optimize-acq",
                    {{"model", args.model_path}, {"acquisition", args.acquisition},
                     {"ucb_alpha", FormatDouble(args.ucb_alpha)}, {"strategy", args.strategy},
                     {"n_starts", std::to_string(args.n_starts)},
                     {"lower", JoinList(std::vector<double>(domain.lower().begin(), domain.lower().end()))},
                     {"upper", JoinList(std::vector<double>(domain.upper().begin(), domain.upper().end()))},
                     {"direct_max_evals", std::to_string(args.direct_max_evals)},
                     {"seed", std::to_string(args.seed)}});
  std::cout << result.strategy.Label() << ": acquisition " << FormatDouble(result.value) << " at "
            << FormatPoint(result.x_star) << " after " << result.n_evals << " evaluations\n";
  return 0;
}

int RunRunBo(const RunBoArgs& args, int threads) {
  ExperimentConfig cfg = LoadExperiment(args.config);
  cfg.timing = cfg.timing || args.timing;
  BoConfig bo = cfg.bo;
  bo.threads = threads;
  bo.record_timing = cfg.timing;
  const History history = RunBo(bo);

  const fs::path dir = PrepareOutDir(args.out_dir);
  std::ostringstream csv;
  WriteHistoryCsv(csv, history);
  WriteText(dir / "history.csv", csv.str());
  WriteConfigManifest(dir, "run-bo", ExperimentToSettings(cfg));
  if (history.error) {
    std::fprintf(stderr, "acqregret: %s\n", history.error->c_str());
    return 1;
  }
  std::cout << "best observed value " << FormatDouble(history.rows.back().best) << " after "
            << history.rows.size() << " evaluations; wrote " << (dir / "history.csv").string() << '\n';
  return 0;
}

int RunRegretExp(const RegretExpArgs& args, int threads) {
  ExperimentConfig cfg = LoadExperiment(args.config);
  cfg.basins = cfg.basins || args.basins;
  cfg.timing = cfg.timing || args.timing;
  cfg.threads = threads;
  const ExperimentResult result = RunRegretExperiment(cfg);

  const fs::path dir = PrepareOutDir(args.out_dir);
  WriteExperimentOutputs(dir, result);
  WriteConfigManifest(dir, "regret-exp", ExperimentToSettings(cfg));

  const PlotSeries series = ComputePlotSeries(RecordTable{result.start_counts, result.records},
                                              cfg.moving_avg_window);
  std::cout << result.benchmark << ": " << result.records.size() << " records, "
            << result.failures.size() << " failed rounds\n";
  for (std::size_t k = 0; k < result.start_counts.size() && !series.rounds.empty(); ++k) {
    std::cout << "  N=" << result.start_counts[k]
              << " final moving-average regret difference " << FormatDouble(series.regret_average[k].back())
              << '\n';
  }
  if (cfg.timing) std::cout << "  timing measured on a single worker\n";
  return result.failures.empty() ? 0 : 1;
}

int RunEstimateBasins(const EstimateBasinsArgs& args, int threads) {
  const GpModel model = LoadModel(args.model_path);
  const Domain domain = ResolveBox(args.lower, args.upper, model.dim());
  if (args.probes < 1) throw UsageError("--probes must be at least 1");
  if (!(args.cluster_tol > 0.0) || !(args.coincidence_tol > 0.0)) {
    throw UsageError("tolerances must be positive");
  }
  const AcquisitionSpec spec =
      AcquisitionSpec::ForTargets(ParseAcquisitionKind(args.acquisition), model.train_targets(), args.ucb_alpha);
  BasinStats stats = EstimateBasins(model, spec, domain, args.probes, args.cluster_tol,
                                    args.coincidence_tol, DirectConfig{}, LocalSearchConfig{},
                                    args.seed, threads);

  const fs::path dir = PrepareOutDir(args.out_dir);
  std::ostringstream basins;
  WriteBasinsCsv(basins, {stats});
  WriteText(dir / "basins.csv", basins.str());
  std::ostringstream clusters;
  clusters << "cluster,beta_hat";
  for (int i = 0; i < model.dim(); ++i) clusters << ",x_" << i;
  clusters << '\n';
  for (std::size_t c = 0; c < stats.beta_hat.size(); ++c) {
    clusters << c << ',' << FormatDouble(stats.beta_hat[c]);
    for (Eigen::Index i = 0; i < stats.cluster_best[c].size(); ++i) {
      clusters << ',' << FormatDouble(stats.cluster_best[c][i]);
    }
    clusters << '\n';
  }
  WriteText(dir / "clusters.csv", clusters.str());
  WriteFlagManifest(dir, "estimate-basins",
                    {{"model", args.model_path}, {"acquisition", args.acquisition},
                     {"ucb_alpha", FormatDouble(args.ucb_alpha)}, {"probes", std::to_string(args.probes)},
                     {"cluster_tol", FormatDouble(args.cluster_tol)},
                     {"coincidence_tol", FormatDouble(args.coincidence_tol)},
                     {"lower", JoinList(std::vector<double>(domain.lower().begin(), domain.lower().end()))},
                     {"upper", JoinList(std::vector<double>(domain.upper().begin(), domain.upper().end()))},
                     {"seed", std::to_string(args.seed)}});
  std::cout << stats.rho_hat << " clusters from " << stats.n_probes
            << " probes; global-basin frequency " << FormatDouble(stats.beta_g_hat) << '\n';
  return 0;
}

int RunTimingTable(const TimingTableArgs& args) {
  std::vector<std::pair<std::string, RecordTable>> inputs;
  for (const std::string& in : args.in_dirs) {
    const fs::path dir(in);
    if (!fs::is_directory(dir)) throw UsageError("not a directory: " + in);
    inputs.emplace_back(ReadRunInfo(dir).benchmark, LoadRecords(dir / "records.csv"));
  }
  const TimingTable table = MakeTimingTable(inputs);
  const std::string text = FormatTimingTable(table);
  std::cout << text;
  const fs::path out = PrepareOutDir(args.out_dir.empty() ? args.in_dirs.front() : args.out_dir);
  std::ostringstream csv;
  WriteTimingCsv(csv, table);
  WriteText(out / "timing.csv", csv.str());
  WriteText(out / "timing.txt", text);
  bool any = false;
  for (const TimingRow& row : table.rows) {
    any = any || row.direct.has_value();
    for (const auto& cell : row.local) any = any || cell.has_value();
  }
  if (!any) std::fprintf(stderr, "acqregret: no timing data; rerun regret-exp with --timing\n");
  return 0;
}

int RunPlot(const PlotArgs& args) {
  const fs::path in(args.in_dir);
  if (!fs::is_directory(in)) throw UsageError("not a directory: " + args.in_dir);
  const RunInfo info = ReadRunInfo(in);
  const int window = args.window.value_or(info.window);
  if (window < 1) throw UsageError("--window must be at least 1");
  const RecordTable table = LoadRecords(in / "records.csv");
  const fs::path out = args.out_dir.empty() ? in : fs::path(args.out_dir);
  for (const fs::path& p : EmitPlots(out, info.benchmark, table, window)) {
    std::cout << "wrote " << p.string() << '\n';
  }
  return 0;
}

}  // namespace acqregret::cli
