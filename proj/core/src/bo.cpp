#include "acqregret/bo.hpp"

#include "acqregret/errors.hpp"
#include "acqregret/format.hpp"
#include "acqregret/rng.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>

namespace acqregret {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

void BoConfig::Validate() const {
  if (rounds < 1) throw ConfigError("rounds must be at least 1");
  if (n_init < 1) throw ConfigError("n_init must be at least 1");
  if (gp_restarts < 1) throw ConfigError("gp_restarts must be at least 1");
  if (!(ucb_alpha > 0.0)) throw ConfigError("ucb_alpha must be positive");
  if (!(observation_noise >= 0.0)) throw ConfigError("observation_noise must be nonnegative");
  if (gp_fixed_noise && !(*gp_fixed_noise >= 0.0)) throw ConfigError("gp_noise must be nonnegative");
  if (threads < 1) throw ConfigError("threads must be at least 1");
  optimizer.direct.Validate();
  optimizer.local.Validate();
  if (optimizer.n_starts < 1) throw ConfigError("n_starts must be at least 1");
}

History RunBo(const BoConfig& cfg, const RoundObserver& observer) {
  cfg.Validate();
  const Benchmark bench = GetBenchmark(cfg.benchmark, cfg.dim);
  const Domain unit = Domain::UnitCube(bench.dim);
  Rng noise_rng(DeriveSeed(cfg.seed, {3}));

  History history;
  history.dim = bench.dim;
  double best = std::numeric_limits<double>::infinity();
  std::vector<Vector> xs_unit;
  std::vector<double> ys;

  auto append = [&](const Vector& x_unit, const std::string& strategy, double acq_value,
                    double wall) {
    const Vector x = bench.domain.FromUnit(x_unit);
    const double y = Observe(bench, x, cfg.observation_noise, noise_rng);
    best = std::min(best, y);
    xs_unit.push_back(x_unit);
    ys.push_back(y);
    history.rows.push_back({static_cast<int>(history.rows.size()) + 1, x, y, best, acq_value,
                            strategy, wall});
  };

  Rng init_rng(DeriveSeed(cfg.seed, {0}));
  for (int i = 0; i < cfg.n_init; ++i) {
    append(init_rng.UniformIn(unit), "init", kNaN, kNaN);
  }

  GpFitOptions fit;
  fit.restarts = cfg.gp_restarts;
  fit.fixed_noise = cfg.gp_fixed_noise;

  for (int round = 1; round <= cfg.rounds; ++round) {
    const Eigen::Index n = static_cast<Eigen::Index>(ys.size());
    Matrix inputs(n, bench.dim);
    Vector targets(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      inputs.row(i) = xs_unit[static_cast<std::size_t>(i)].transpose();
      targets[i] = ys[static_cast<std::size_t>(i)];
    }
    const double mean = targets.mean();
    double sd = std::sqrt((targets.array() - mean).square().mean());
    if (!(sd > 1e-12)) sd = 1.0;
    const Vector standardized = (targets.array() - mean) / sd;

    std::optional<GpFitResult> fitted;
    try {
      fitted.emplace(FitGp(inputs, standardized, cfg.kernel, fit,
                           DeriveSeed(cfg.seed, {1, static_cast<std::uint64_t>(round)})));
    } catch (const IllConditionedError& e) {
      history.error = "round " + std::to_string(round) + ": surrogate fit failed: " + e.what();
      return history;
    }
    const GpModel& model = fitted->model;
    const AcquisitionSpec spec =
        AcquisitionSpec::ForTargets(cfg.acquisition, standardized, cfg.ucb_alpha);
    const AcquisitionHandle acq = MakeAcquisitionHandle(spec, model);

    OptResult chosen;
    if (cfg.optimizer.kind == AcqOptimizerKind::kDirect) {
      chosen = DirectMaximize(acq, unit, cfg.optimizer.direct);
    } else {
      chosen = MultiStartMaximize(acq, unit, cfg.optimizer.n_starts, cfg.optimizer.local,
                                  DeriveSeed(cfg.seed, {2, static_cast<std::uint64_t>(round)}),
                                  cfg.threads);
    }
    if (observer) observer(RoundSnapshot{round, bench, model, spec, unit, chosen});
    append(chosen.x_star, chosen.strategy.Label(), chosen.value,
           cfg.record_timing ? chosen.wall_time_s : kNaN);
  }
  return history;
}

void WriteHistoryCsv(std::ostream& out, const History& history) {
  out << "round";
  for (int i = 0; i < history.dim; ++i) out << ",x_" << i;
  out << ",y,best,acq_value,strategy,wall_time_s\n";
  for (const HistoryRow& r : history.rows) {
    out << r.round;
    for (Eigen::Index i = 0; i < r.x.size(); ++i) out << ',' << FormatDouble(r.x[i]);
    out << ',' << FormatDouble(r.y) << ',' << FormatDouble(r.best) << ',' << FormatDouble(r.acq_value) << ',' << r.strategy
        << ',' << FormatDouble(r.wall_time_s) << '\n';
  }
}

}  // namespace acqregret
