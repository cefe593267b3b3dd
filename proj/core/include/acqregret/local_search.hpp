#pragma once

#include "acqregret/domain.hpp"
#include "acqregret/objective.hpp"
#include "acqregret/quasi_newton.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace acqregret {

enum class StrategyKind { kGlobal, kLocal, kMultiLocal };

struct Strategy {
  StrategyKind kind = StrategyKind::kLocal;
  int n_starts = 1;  // MultiLocal only

  static Strategy Global() { return {StrategyKind::kGlobal, 0}; }
  static Strategy Local() { return {StrategyKind::kLocal, 1}; }
  static Strategy MultiLocal(int n) { return {StrategyKind::kMultiLocal, n}; }

  /// "direct", "local", or "multilocal(N)".
  std::string Label() const;
  friend bool operator==(const Strategy&, const Strategy&) = default;
};

struct LocalSearchConfig {
  double eps_opt = 1e-5;
  int max_iters = 200;
  int memory = 10;
  double wolfe_c1 = 1e-4;
  double wolfe_c2 = 0.9;

  void Validate() const;
  QuasiNewtonOptions ToOptions() const;
};

/// An acquisition-maximizer candidate.
struct OptResult {
  Vector x_star;
  double value = 0.0;
  Strategy strategy;
  int n_evals = 0;
  double wall_time_s = 0.0;
  bool converged = false;
  std::vector<Vector> start_points;
};

/// Quasi-Newton ascent of the acquisition from x0 inside the box. Throws
/// PreconditionError if x0 lies outside the domain. A line-search failure
/// returns the best point reached with converged = false. The observer sees
/// every accepted iterate with its acquisition value.
OptResult LocalMaximize(const AcquisitionHandle& acq, const Domain& domain, const Vector& x0,
                        const LocalSearchConfig& cfg, const IterateObserver& observer = {});

/// Start i is drawn uniformly in the box from a stream derived from
/// (seed, i), so the first n starts for a seed are the same whatever count
/// is requested.
std::vector<Vector> DrawStarts(const Domain& domain, int n, std::uint64_t seed);

/// One local ascent per start, in start order.
std::vector<OptResult> LocalMaximizeEach(const AcquisitionHandle& acq, const Domain& domain,
                                         const std::vector<Vector>& starts,
                                         const LocalSearchConfig& cfg, int threads = 1);

/// Best of n local ascents from DrawStarts(domain, n, seed). The first start
/// wins ties. n_evals sums over starts and start_points lists all n.
OptResult MultiStartMaximize(const AcquisitionHandle& acq, const Domain& domain, int n,
                             const LocalSearchConfig& cfg, std::uint64_t seed, int threads = 1);

}  // namespace acqregret
