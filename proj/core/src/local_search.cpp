#include "acqregret/local_search.hpp"

#include "acqregret/errors.hpp"
#include "acqregret/parallel.hpp"
#include "acqregret/rng.hpp"

#include <chrono>

namespace acqregret {
namespace {

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

std::string Strategy::Label() const {
  switch (kind) {
    case StrategyKind::kGlobal: return "direct";
    case StrategyKind::kLocal: return "local";
    case StrategyKind::kMultiLocal: return "multilocal(" + std::to_string(n_starts) + ")";
  }
  return "unknown";
}

void LocalSearchConfig::Validate() const { ToOptions().Validate(); }

QuasiNewtonOptions LocalSearchConfig::ToOptions() const {
  return QuasiNewtonOptions{.step_tol = eps_opt, .max_iters = max_iters, .memory = memory,
                            .wolfe_c1 = wolfe_c1, .wolfe_c2 = wolfe_c2};
}

OptResult LocalMaximize(const AcquisitionHandle& acq, const Domain& domain, const Vector& x0,
                        const LocalSearchConfig& cfg, const IterateObserver& observer) {
  cfg.Validate();
  if (!domain.contains(x0)) throw PreconditionError("local search start point lies outside the domain");
  const auto start = Clock::now();
  const ValueGradFn negated = [&acq](const Vector& x, Vector& grad) {
    const double v = acq.value_and_grad(x, grad);
    grad = -grad;
    return -v;
  };
  IterateObserver flipped;
  if (observer) flipped = [&observer](const Vector& x, double f) { observer(x, -f); };
  const QuasiNewtonResult r =
      MinimizeInBox(negated, domain.lower(), domain.upper(), x0, cfg.ToOptions(), flipped);

  OptResult out;
  out.x_star = r.x;
  out.value = -r.value;
  out.strategy = Strategy::Local();
  out.n_evals = r.n_evals;
  out.converged = r.converged && !r.line_search_failed;
  out.start_points = {x0};
  out.wall_time_s = SecondsSince(start);
  return out;
}

std::vector<Vector> DrawStarts(const Domain& domain, int n, std::uint64_t seed) {
  std::vector<Vector> starts;
  starts.reserve(static_cast<std::size_t>(std::max(n, 0)));
  for (int i = 0; i < n; ++i) {
    Rng rng(DeriveSeed(seed, {static_cast<std::uint64_t>(i)}));
    starts.push_back(rng.UniformIn(domain));
  }
  return starts;
}

std::vector<OptResult> LocalMaximizeEach(const AcquisitionHandle& acq, const Domain& domain,
                                         const std::vector<Vector>& starts,
                                         const LocalSearchConfig& cfg, int threads) {
  std::vector<OptResult> results(starts.size());
  ParallelFor(static_cast<int>(starts.size()), threads, [&](int i) {
    results[static_cast<std::size_t>(i)] = LocalMaximize(acq, domain, starts[static_cast<std::size_t>(i)], cfg);
  });
  return results;
}

OptResult MultiStartMaximize(const AcquisitionHandle& acq, const Domain& domain, int n,
                             const LocalSearchConfig& cfg, std::uint64_t seed, int threads) {
  if (n < 1) throw PreconditionError("multi-start needs at least one start");
  const auto start = Clock::now();
  std::vector<Vector> starts = DrawStarts(domain, n, seed);
  const std::vector<OptResult> runs = LocalMaximizeEach(acq, domain, starts, cfg, threads);
  std::size_t best = 0;
  int evals = 0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    evals += runs[i].n_evals;
    if (runs[i].value > runs[best].value) best = i;
  }
  OptResult out = runs[best];
  out.strategy = Strategy::MultiLocal(n);
  out.n_evals = evals;
  out.start_points = std::move(starts);
  out.wall_time_s = SecondsSince(start);
  return out;
}

}  // namespace acqregret
