#pragma once

#include "acqregret/domain.hpp"
#include "acqregret/local_search.hpp"
#include "acqregret/objective.hpp"

#include <map>
#include <set>
#include <utility>
#include <vector>

namespace acqregret {

struct DirectConfig {
  int max_evals = 10000;
  int max_depth = 30;       // no axis is trisected more than this many times
  double epsilon_po = 1e-4; // potential-optimality slack, relative to the incumbent
  double max_wall_time_s = 0.0;  // 0 disables the wall-clock cap

  void Validate() const;
};

/// Hyperrectangle of the unit-cube partition. Side length on axis i is
/// 3^-levels[i].
struct DirectRect {
  Vector center;
  std::vector<int> levels;
  double f_center = 0.0;  // acquisition at the center (maximization)
  long index = 0;         // creation order

  /// Distance from the center to a vertex, the size used for selection.
  double SizeIndex() const;
  double Volume() const;
  int LevelSum() const;
};

/// DIRECT (DIviding RECTangles) on the box, run as an explicit state machine
/// so tests can inspect the partition between iterations.
///
/// Each iteration takes the best rectangle of every size class, keeps those
/// on the lower-right convex hull of (size, -f_center) that also pass the
/// epsilon test, and trisects each along its longest sides in order of the
/// best new center value. Ties go to the lowest creation index; nothing is
/// randomized.
class DirectSearch {
 public:
  DirectSearch(AcquisitionHandle acq, Domain domain, DirectConfig cfg);

  /// Runs one selection-and-division pass. Returns false once the budget,
  /// depth or wall-clock limit stops the search.
  bool Step();
  void Run();

  const std::vector<DirectRect>& rects() const { return rects_; }
  /// Acquisition values in evaluation order.
  const std::vector<double>& evaluations() const { return evaluations_; }
  int n_evals() const { return static_cast<int>(evaluations_.size()); }
  std::size_t best_index() const { return best_; }
  bool finished() const { return finished_; }

  /// Best center mapped back to the original box.
  OptResult Result() const;

 private:
  double Evaluate(const Vector& unit_point);
  std::vector<std::size_t> SelectPotentiallyOptimal() const;
  void Divide(std::size_t rect);
  void Track(std::size_t rect);
  void Untrack(std::size_t rect);

  AcquisitionHandle acq_;
  Domain domain_;
  DirectConfig cfg_;
  std::vector<DirectRect> rects_;
  std::vector<double> evaluations_;
  std::size_t best_ = 0;
  // Divisible rectangles keyed by level sum, ordered by (-f_center, index)
  // so each class's representative is its first element.
  std::map<int, std::set<std::pair<double, std::size_t>>> classes_;
  bool finished_ = false;
  double elapsed_s_ = 0.0;
};

/// Maximizes the acquisition over the domain with DIRECT.
OptResult DirectMaximize(const AcquisitionHandle& acq, const Domain& domain, const DirectConfig& cfg);

}  // namespace acqregret
