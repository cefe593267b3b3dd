#include "acqregret/direct.hpp"

#include "acqregret/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

namespace acqregret {
namespace {

using Clock = std::chrono::steady_clock;

double ThirdPower(int level) { return std::pow(3.0, -static_cast<double>(level)); }

struct SizeClass {
  double size;
  double h;  // -f_center of the class representative (minimization view)
  std::size_t rect;
};

}  // namespace

void DirectConfig::Validate() const {
  if (max_evals < 1) throw ConfigError("DIRECT max_evals must be at least 1");
  if (max_depth < 1) throw ConfigError("DIRECT max_depth must be at least 1");
  if (!(epsilon_po >= 0.0)) throw ConfigError("DIRECT epsilon must be nonnegative");
  if (!(max_wall_time_s >= 0.0)) throw ConfigError("DIRECT wall-clock cap must be nonnegative");
}

double DirectRect::SizeIndex() const {
  double sum = 0.0;
  for (int l : levels) sum += ThirdPower(2 * l);
  return 0.5 * std::sqrt(sum);
}

double DirectRect::Volume() const {
  double v = 1.0;
  for (int l : levels) v *= ThirdPower(l);
  return v;
}

int DirectRect::LevelSum() const { return std::accumulate(levels.begin(), levels.end(), 0); }

DirectSearch::DirectSearch(AcquisitionHandle acq, Domain domain, DirectConfig cfg)
    : acq_(std::move(acq)), domain_(std::move(domain)), cfg_(cfg) {
  cfg_.Validate();
  const int d = domain_.dim();
  DirectRect root;
  root.center = Vector::Constant(d, 0.5);
  root.levels.assign(static_cast<std::size_t>(d), 0);
  root.index = 0;
  const auto start = Clock::now();
  root.f_center = Evaluate(root.center);
  elapsed_s_ += std::chrono::duration<double>(Clock::now() - start).count();
  rects_.push_back(std::move(root));
  best_ = 0;
  Track(0);
  if (n_evals() >= cfg_.max_evals) finished_ = true;
}

void DirectSearch::Track(std::size_t rect) {
  const DirectRect& r = rects_[rect];
  if (*std::min_element(r.levels.begin(), r.levels.end()) >= cfg_.max_depth) return;
  classes_[r.LevelSum()].emplace(-r.f_center, rect);
}

void DirectSearch::Untrack(std::size_t rect) {
  const DirectRect& r = rects_[rect];
  const auto it = classes_.find(r.LevelSum());
  if (it == classes_.end()) return;
  it->second.erase({-r.f_center, rect});
  if (it->second.empty()) classes_.erase(it);
}

double DirectSearch::Evaluate(const Vector& unit_point) {
  double v = acq_.value(domain_.FromUnit(unit_point));
  // NaN never wins; -inf keeps the rectangle in the partition.
  if (std::isnan(v)) v = -std::numeric_limits<double>::infinity();
  evaluations_.push_back(v);
  return v;
}

std::vector<std::size_t> DirectSearch::SelectPotentiallyOptimal() const {
  // Trisecting only the longest sides keeps every rectangle's levels within
  // {m, m+1}, so the level sum identifies the size class.
  if (classes_.empty()) return {};

  // Ascending size = descending level sum.
  std::vector<SizeClass> classes;
  classes.reserve(classes_.size());
  for (auto it = classes_.rbegin(); it != classes_.rend(); ++it) {
    const std::size_t idx = it->second.begin()->second;
    classes.push_back({rects_[idx].SizeIndex(), -rects_[idx].f_center, idx});
  }

  const double f_min = -rects_[best_].f_center;
  // Start the hull at the class holding the lowest h (largest such class on ties).
  std::size_t start = 0;
  for (std::size_t j = 1; j < classes.size(); ++j) {
    if (classes[j].h <= classes[start].h) start = j;
  }

  // Lower convex hull over classes[start..], keeping collinear points.
  std::vector<std::size_t> hull;
  for (std::size_t j = start; j < classes.size(); ++j) {
    while (hull.size() >= 2) {
      const SizeClass& a = classes[hull[hull.size() - 2]];
      const SizeClass& b = classes[hull.back()];
      const SizeClass& c = classes[j];
      const double cross = (b.size - a.size) * (c.h - a.h) - (b.h - a.h) * (c.size - a.size);
      if (cross < 0.0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(j);
  }

  const double threshold = f_min - cfg_.epsilon_po * std::abs(f_min);
  std::vector<std::size_t> selected;
  for (std::size_t k = 0; k < hull.size(); ++k) {
    const SizeClass& c = classes[hull[k]];
    if (k + 1 < hull.size()) {
      const SizeClass& next = classes[hull[k + 1]];
      const double slope = (next.h - c.h) / (next.size - c.size);
      if (!(c.h - slope * c.size <= threshold)) continue;
    }
    selected.push_back(c.rect);
  }
  std::sort(selected.begin(), selected.end());
  return selected;
}

void DirectSearch::Divide(std::size_t rect_index) {
  const DirectRect parent = rects_[rect_index];
  const int min_level = *std::min_element(parent.levels.begin(), parent.levels.end());
  std::vector<int> axes;
  for (std::size_t i = 0; i < parent.levels.size(); ++i) {
    if (parent.levels[i] == min_level) axes.push_back(static_cast<int>(i));
  }
  const double delta = ThirdPower(min_level + 1);

  struct Probe {
    int axis;
    double w;
    DirectRect lo;
    DirectRect hi;
  };
  std::vector<Probe> probes;
  probes.reserve(axes.size());
  for (int axis : axes) {
    Probe p;
    p.axis = axis;
    p.lo.center = parent.center;
    p.lo.center[axis] -= delta;
    p.lo.f_center = Evaluate(p.lo.center);
    p.hi.center = parent.center;
    p.hi.center[axis] += delta;
    p.hi.f_center = Evaluate(p.hi.center);
    p.w = std::max(p.lo.f_center, p.hi.f_center);
    probes.push_back(std::move(p));
  }
  // Best new value first; stable keeps axis order on ties.
  std::stable_sort(probes.begin(), probes.end(),
                   [](const Probe& a, const Probe& b) { return a.w > b.w; });

  std::vector<int> levels = parent.levels;
  for (Probe& p : probes) {
    levels[static_cast<std::size_t>(p.axis)] += 1;
    for (DirectRect* child : {&p.lo, &p.hi}) {
      child->levels = levels;
      child->index = static_cast<long>(rects_.size());
      rects_.push_back(std::move(*child));
      const std::size_t idx = rects_.size() - 1;
      if (rects_[idx].f_center > rects_[best_].f_center) best_ = idx;
      Track(idx);
    }
  }
  Untrack(rect_index);
  rects_[rect_index].levels = levels;
  Track(rect_index);
}

bool DirectSearch::Step() {
  if (finished_) return false;
  const auto start = Clock::now();
  const std::vector<std::size_t> selected = SelectPotentiallyOptimal();
  if (selected.empty()) {
    finished_ = true;
    return false;
  }
  bool divided_any = false;
  for (std::size_t idx : selected) {
    const DirectRect& r = rects_[idx];
    const int min_level = *std::min_element(r.levels.begin(), r.levels.end());
    const auto n_axes = std::count(r.levels.begin(), r.levels.end(), min_level);
    if (n_evals() + 2 * static_cast<int>(n_axes) > cfg_.max_evals) {
      finished_ = true;
      break;
    }
    Divide(idx);
    divided_any = true;
  }
  elapsed_s_ += std::chrono::duration<double>(Clock::now() - start).count();
  if (cfg_.max_wall_time_s > 0.0 && elapsed_s_ >= cfg_.max_wall_time_s) finished_ = true;
  if (n_evals() >= cfg_.max_evals) finished_ = true;
  if (!divided_any) finished_ = true;
  return !finished_;
}

void DirectSearch::Run() {
  while (Step()) {
  }
}

OptResult DirectSearch::Result() const {
  OptResult out;
  out.x_star = domain_.FromUnit(rects_[best_].center);
  out.value = rects_[best_].f_center;
  out.strategy = Strategy::Global();
  out.n_evals = n_evals();
  out.converged = true;
  out.wall_time_s = elapsed_s_;
  return out;
}

OptResult DirectMaximize(const AcquisitionHandle& acq, const Domain& domain, const DirectConfig& cfg) {
  const auto start = Clock::now();
  DirectSearch search(acq, domain, cfg);
  search.Run();
  OptResult out = search.Result();
  out.wall_time_s = std::chrono::duration<double>(Clock::now() - start).count();
  return out;
}

}  // namespace acqregret
