#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <vector>

#include "scn/core/scene.hpp"

namespace scn {

/// Grid-alignment tolerance for time arguments, relative to the step.
inline constexpr double kGridAlignmentTolerance = 1e-9;
/// Default continuity bound (scene units per second) for jump detection.
inline constexpr double kDefaultContinuityBound = 100.0;
inline constexpr double kDefaultStep = 0.1;

/// Uniform time grid t_i = i * step, i = 0 .. count-1.
class TimeGrid {
 public:
  TimeGrid(double step, std::size_t count, bool closed_end = true);

  /// Grid covering [0, duration] (duration must be a multiple of step).
  static TimeGrid over(double duration, double step = kDefaultStep, bool closed_end = true);
  /// The zero-sample grid of the empty history (root of every branching tree).
  static TimeGrid empty(double step);

  double step() const noexcept { return step_; }
  std::size_t count() const noexcept { return count_; }
  bool closed_end() const noexcept { return closed_end_; }
  double time(std::size_t i) const noexcept { return static_cast<double>(i) * step_; }
  double duration() const noexcept { return count_ == 0 ? 0.0 : time(count_ - 1); }

  /// Index of grid-aligned time `t`; GridAlignmentError / RangeError otherwise.
  std::size_t index_of(double t) const;
  /// Number of steps represented by `t` (alignment-checked, no range check).
  std::size_t steps_in(double t) const;

  TimeGrid with_count(std::size_t count) const;

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

 private:
  TimeGrid(double step, std::size_t count, bool closed_end, bool allow_empty);

  double step_;
  std::size_t count_;
  bool closed_end_;
};

bool same_step(double a, double b);

/// A concrete scenario sampled on a uniform grid, piecewise-linear between
/// samples. Immutable.
class Trajectory {
 public:
  Trajectory(SchemaPtr schema, TimeGrid grid, std::vector<double> flat_values);
  Trajectory(SchemaPtr schema, TimeGrid grid, const std::vector<Scene>& samples);

  static Trajectory empty(SchemaPtr schema, double step);

  const SchemaPtr& schema() const noexcept { return schema_; }
  const TimeGrid& grid() const noexcept { return grid_; }
  double step() const noexcept { return grid_.step(); }
  std::size_t count() const noexcept { return grid_.count(); }
  bool is_empty() const noexcept { return grid_.count() == 0; }
  double duration() const noexcept { return grid_.duration(); }
  std::size_t width() const noexcept { return schema_->size(); }

  std::span<const double> values(std::size_t i) const;
  std::span<const double> flat() const noexcept { return data_; }
  Scene sample(std::size_t i) const;
  Scene start() const { return sample(0); }
  Scene last() const { return sample(count() - 1); }
  std::vector<Scene> samples() const;

  /// Piecewise-linear interpolation at any t in [0, duration].
  Scene at(double t) const;

  /// Indices i flagged as candidate jumps between samples i and i+1.
  std::vector<std::size_t> discontinuities(double continuity_bound = kDefaultContinuityBound) const;

  /// Bit-exact equality of schema, step and samples.
  friend bool operator==(const Trajectory& a, const Trajectory& b);
  /// Canonical ordering: sample count, then lexicographic over samples.
  friend std::strong_ordering operator<=>(const Trajectory& a, const Trajectory& b);

 private:
  struct Trusted {};
  Trajectory(Trusted, SchemaPtr schema, TimeGrid grid, std::vector<double> flat_values);

  friend Trajectory prefix_count(const Trajectory& c, std::size_t count);
  friend Trajectory extend_values(const Trajectory& c, std::span<const double> next);

  SchemaPtr schema_;
  TimeGrid grid_;
  std::vector<double> data_;
};

Trajectory prefix(const Trajectory& c, double upto);
/// Prefix holding the first `count` samples.
Trajectory prefix_count(const Trajectory& c, std::size_t count);
Trajectory extend(const Trajectory& c, std::span<const Scene> tail);
Trajectory extend(const Trajectory& c, const Scene& next);
/// Appends raw values (already validated against the schema).
Trajectory extend_values(const Trajectory& c, std::span<const double> next);
bool is_prefix(const Trajectory& a, const Trajectory& b);
double trajectory_distance(const Trajectory& a, const Trajectory& b);

}  // namespace scn
