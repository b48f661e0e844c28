#include "scn/core/trajectory.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "scn/error.hpp"

namespace scn {

TimeGrid::TimeGrid(double step, std::size_t count, bool closed_end)
    : TimeGrid(step, count, closed_end, false) {}

TimeGrid::TimeGrid(double step, std::size_t count, bool closed_end, bool allow_empty)
    : step_(step), count_(count), closed_end_(closed_end) {
  if (!(step > 0.0) || !std::isfinite(step)) throw ValueError(fmt::format("grid step must be > 0, got {}", step));
  if (count == 0 && !allow_empty) throw ValueError("grid needs at least one point");
}

TimeGrid TimeGrid::over(double duration, double step, bool closed_end) {
  if (duration < 0.0) throw RangeError(fmt::format("negative duration {}", duration));
  TimeGrid probe(step, 1, closed_end);
  return TimeGrid(step, probe.steps_in(duration) + 1, closed_end);
}

TimeGrid TimeGrid::empty(double step) { return TimeGrid(step, 0, true, true); }

std::size_t TimeGrid::steps_in(double t) const {
  const double ratio = t / step_;
  const double k = std::round(ratio);
  if (std::abs(t - k * step_) > kGridAlignmentTolerance * step_ || !std::isfinite(t)) {
    throw GridAlignmentError(fmt::format("time {} is not aligned to step {}", t, step_));
  }
  if (k < 0) throw RangeError(fmt::format("time {} is negative", t));
  return static_cast<std::size_t>(k);
}

std::size_t TimeGrid::index_of(double t) const {
  const std::size_t k = steps_in(t);
  if (k >= count_) throw RangeError(fmt::format("time {} beyond grid duration {}", t, duration()));
  return k;
}

TimeGrid TimeGrid::with_count(std::size_t count) const { return TimeGrid(step_, count, closed_end_, true); }

bool same_step(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); }

Trajectory::Trajectory(SchemaPtr schema, TimeGrid grid, std::vector<double> flat_values)
    : schema_(std::move(schema)), grid_(grid), data_(std::move(flat_values)) {
  if (!schema_) throw SchemaError("trajectory without schema");
  const std::size_t k = schema_->size();
  if (data_.size() != k * grid_.count()) {
    throw SchemaError(fmt::format("trajectory holds {} values, expected {} x {}", data_.size(), grid_.count(), k));
  }
  for (std::size_t i = 0; i < grid_.count(); ++i) {
    validate_scene_values(*schema_, std::span<const double>(data_).subspan(i * k, k));
  }
}

Trajectory::Trajectory(Trusted, SchemaPtr schema, TimeGrid grid, std::vector<double> flat_values)
    : schema_(std::move(schema)), grid_(grid), data_(std::move(flat_values)) {}

namespace {

std::vector<double> flatten(const SchemaPtr& schema, const std::vector<Scene>& samples) {
  std::vector<double> flat;
  flat.reserve(samples.size() * (schema ? schema->size() : 0));
  for (const auto& s : samples) {
    require_same_schema(schema, s.schema());
    flat.insert(flat.end(), s.values().begin(), s.values().end());
  }
  return flat;
}

}  // namespace

Trajectory::Trajectory(SchemaPtr schema, TimeGrid grid, const std::vector<Scene>& samples)
    : Trajectory(schema, grid, flatten(schema, samples)) {}

Trajectory Trajectory::empty(SchemaPtr schema, double step) {
  return Trajectory(std::move(schema), TimeGrid::empty(step), std::vector<double>{});
}

std::span<const double> Trajectory::values(std::size_t i) const {
  if (i >= count()) throw RangeError(fmt::format("sample {} out of range ({} samples)", i, count()));
  const std::size_t k = width();
  return std::span<const double>(data_).subspan(i * k, k);
}

Scene Trajectory::sample(std::size_t i) const {
  auto v = values(i);
  return Scene(schema_, std::vector<double>(v.begin(), v.end()));
}

std::vector<Scene> Trajectory::samples() const {
  std::vector<Scene> out;
  out.reserve(count());
  for (std::size_t i = 0; i < count(); ++i) out.push_back(sample(i));
  return out;
}

Scene Trajectory::at(double t) const {
  if (is_empty()) throw RangeError("interpolation on an empty trajectory");
  if (t < 0.0 || t > duration() + kGridAlignmentTolerance * step()) {
    throw RangeError(fmt::format("time {} outside [0, {}]", t, duration()));
  }
  const double pos = t / step();
  const auto lo = std::min(static_cast<std::size_t>(std::floor(pos)), count() - 1);
  if (lo + 1 >= count()) return sample(count() - 1);
  const double w = pos - static_cast<double>(lo);
  auto a = values(lo);
  auto b = values(lo + 1);
  std::vector<double> out(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) out[j] = a[j] + w * (b[j] - a[j]);
  if (schema_) {
    for (std::size_t j = 0; j < out.size(); ++j) {
      if ((*schema_)[j].unit == Unit::EnumCode) out[j] = w < 0.5 ? a[j] : b[j];
    }
  }
  return Scene(schema_, std::move(out));
}

std::vector<std::size_t> Trajectory::discontinuities(double continuity_bound) const {
  std::vector<std::size_t> flags;
  for (std::size_t i = 0; i + 1 < count(); ++i) {
    if (scene_distance(values(i), values(i + 1)) > continuity_bound * step()) flags.push_back(i);
  }
  return flags;
}

bool operator==(const Trajectory& a, const Trajectory& b) {
  return a.count() == b.count() && same_step(a.step(), b.step()) && same_schema(a.schema_, b.schema_) &&
         a.data_ == b.data_;
}

std::strong_ordering operator<=>(const Trajectory& a, const Trajectory& b) {
  if (auto c = a.count() <=> b.count(); c != 0) return c;
  const auto& x = a.data_;
  const auto& y = b.data_;
  const std::size_t n = std::min(x.size(), y.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] < y[i]) return std::strong_ordering::less;
    if (y[i] < x[i]) return std::strong_ordering::greater;
  }
  return x.size() <=> y.size();
}

Trajectory prefix_count(const Trajectory& c, std::size_t count) {
  if (count > c.count()) throw RangeError(fmt::format("prefix of {} samples exceeds {}", count, c.count()));
  const std::size_t k = c.width();
  std::vector<double> data(c.flat().begin(), c.flat().begin() + static_cast<std::ptrdiff_t>(count * k));
  return Trajectory(Trajectory::Trusted{}, c.schema(), c.grid().with_count(count), std::move(data));
}

Trajectory prefix(const Trajectory& c, double upto) {
  if (c.is_empty()) throw RangeError("prefix of an empty trajectory");
  const std::size_t k = c.grid().steps_in(upto);
  if (k >= c.count()) throw RangeError(fmt::format("prefix time {} beyond duration {}", upto, c.duration()));
  return prefix_count(c, k + 1);
}

Trajectory extend_values(const Trajectory& c, std::span<const double> next) {
  if (next.size() != c.width()) throw SchemaError("appended scene width differs from schema");
  validate_scene_values(*c.schema(), next);
  std::vector<double> data;
  data.reserve(c.flat().size() + next.size());
  data.insert(data.end(), c.flat().begin(), c.flat().end());
  data.insert(data.end(), next.begin(), next.end());
  return Trajectory(Trajectory::Trusted{}, c.schema(), c.grid().with_count(c.count() + 1), std::move(data));
}

Trajectory extend(const Trajectory& c, std::span<const Scene> tail) {
  std::vector<double> data(c.flat().begin(), c.flat().end());
  data.reserve(data.size() + tail.size() * c.width());
  for (const auto& s : tail) {
    require_same_schema(c.schema(), s.schema());
    data.insert(data.end(), s.values().begin(), s.values().end());
  }
  return Trajectory(c.schema(), c.grid().with_count(c.count() + tail.size()), std::move(data));
}

Trajectory extend(const Trajectory& c, const Scene& next) { return extend(c, std::span<const Scene>(&next, 1)); }

bool is_prefix(const Trajectory& a, const Trajectory& b) {
  if (!same_step(a.step(), b.step())) throw GridAlignmentError("trajectories use different grid steps");
  require_same_schema(a.schema(), b.schema());
  if (a.count() > b.count()) return false;
  return std::equal(a.flat().begin(), a.flat().end(), b.flat().begin());
}

double trajectory_distance(const Trajectory& a, const Trajectory& b) {
  require_same_schema(a.schema(), b.schema());
  if (a.count() != b.count() || !same_step(a.step(), b.step())) {
    throw GridAlignmentError("trajectory_distance needs identical grids");
  }
  double sup = 0.0;
  for (std::size_t i = 0; i < a.count(); ++i) sup = std::max(sup, scene_distance(a.values(i), b.values(i)));
  return sup;
}

}  // namespace scn
