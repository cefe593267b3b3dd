#include "acqregret/bo.hpp"
#include "acqregret/errors.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace acqregret {
namespace {

BoConfig SmallConfig(const std::string& benchmark, int rounds, std::uint64_t seed) {
  BoConfig cfg;
  cfg.benchmark = benchmark;
  cfg.rounds = rounds;
  cfg.seed = seed;
  cfg.gp_restarts = 2;
  cfg.optimizer.direct.max_evals = 300;
  return cfg;
}

std::string HistoryText(const History& h) {
  std::ostringstream out;
  WriteHistoryCsv(out, h);
  return out.str();
}

TEST(BoConfig, RejectsInvalidValues) {
  BoConfig cfg;
  cfg.rounds = 0;
  EXPECT_THROW(cfg.Validate(), ConfigError);
  cfg = BoConfig{};
  cfg.n_init = 0;
  EXPECT_THROW(cfg.Validate(), ConfigError);
  cfg = BoConfig{};
  cfg.observation_noise = -1.0;
  EXPECT_THROW(cfg.Validate(), ConfigError);
  EXPECT_NO_THROW(BoConfig{}.Validate());
}

TEST(RunBo, SingleRoundHasInitPlusOneRows) {
  const History h = RunBo(SmallConfig("branin", 1, 3));
  ASSERT_FALSE(h.error);
  ASSERT_EQ(h.rows.size(), 4u);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(h.rows[static_cast<std::size_t>(i)].strategy, "init");
    EXPECT_TRUE(std::isnan(h.rows[static_cast<std::size_t>(i)].acq_value));
  }
  EXPECT_EQ(h.rows.back().strategy, "direct");
  EXPECT_TRUE(std::isnan(h.rows.back().wall_time_s));
}

TEST(RunBo, IsDeterministic) {
  const BoConfig cfg = SmallConfig("sixhumpcamel", 6, 17);
  EXPECT_EQ(HistoryText(RunBo(cfg)), HistoryText(RunBo(cfg)));
  EXPECT_NE(HistoryText(RunBo(cfg)), HistoryText(RunBo(SmallConfig("sixhumpcamel", 6, 18))));
}

TEST(RunBo, IncumbentIsRunningMinimumAndQueriesAreFeasible) {
  BoConfig cfg = SmallConfig("sphere", 30, 5);
  const Benchmark b = GetBenchmark("sphere");
  const History h = RunBo(cfg);
  ASSERT_FALSE(h.error);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < h.rows.size(); ++i) {
    const HistoryRow& row = h.rows[i];
    EXPECT_EQ(row.round, static_cast<int>(i) + 1);
    EXPECT_TRUE(b.domain.contains(row.x));
    best = std::min(best, row.y);
    EXPECT_EQ(row.best, best);
    if (i > 0) EXPECT_LE(row.best, h.rows[i - 1].best);
  }
}

TEST(RunBo, MultiLocalStrategyLabelsRows) {
  BoConfig cfg = SmallConfig("branin", 2, 1);
  cfg.optimizer.kind = AcqOptimizerKind::kMultiLocal;
  cfg.optimizer.n_starts = 4;
  const History h = RunBo(cfg);
  EXPECT_EQ(h.rows.back().strategy, "multilocal(4)");
}

TEST(RunBo, RecordedAcquisitionMatchesSnapshot) {
  BoConfig cfg = SmallConfig("branin", 5, 2);
  int checked = 0;
  std::vector<double> seen;
  const History h = RunBo(cfg, [&](const RoundSnapshot& s) {
    const double v = AcquisitionValue(s.spec, s.model, s.chosen.x_star);
    EXPECT_NEAR(v, s.chosen.value, 1e-9);
    seen.push_back(s.chosen.value);
    ++checked;
  });
  EXPECT_EQ(checked, 5);
  for (int r = 0; r < 5; ++r) {
    EXPECT_EQ(h.rows[static_cast<std::size_t>(cfg.n_init + r)].acq_value, seen[static_cast<std::size_t>(r)]);
  }
}

TEST(RunBo, TimingIsRecordedOnRequest) {
  BoConfig cfg = SmallConfig("branin", 1, 2);
  cfg.record_timing = true;
  const History h = RunBo(cfg);
  EXPECT_GE(h.rows.back().wall_time_s, 0.0);
  EXPECT_TRUE(std::isnan(h.rows.front().wall_time_s));
}

TEST(WriteHistoryCsv, Header) {
  const History h = RunBo(SmallConfig("hartmann6d", 1, 2));
  const std::string text = HistoryText(h);
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "round,x_0,x_1,x_2,x_3,x_4,x_5,y,best,acq_value,strategy,wall_time_s");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 5);
}

// Pilot threshold, frozen: median final simple regret over 10 seeds.
TEST(RunBo, BraninReachesNearOptimum) {
  std::vector<double> regrets;
  for (std::uint64_t s = 0; s < 10; ++s) {
    BoConfig cfg;
    cfg.benchmark = "branin";
    cfg.rounds = 50;
    cfg.seed = DeriveSeed(2024, {s});
    const History h = RunBo(cfg);
    ASSERT_FALSE(h.error);
    regrets.push_back(h.rows.back().best - 0.397887);
  }
  std::nth_element(regrets.begin(), regrets.begin() + 5, regrets.end());
  const double upper = regrets[5];
  std::nth_element(regrets.begin(), regrets.begin() + 4, regrets.end());
  EXPECT_LT(0.5 * (regrets[4] + upper), 0.5);
}

}  // namespace
}  // namespace acqregret
