#include "scn/dynamics/model.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "scn/core/trajectory.hpp"
#include "scn/error.hpp"

namespace scn {

DeterministicModel::DeterministicModel(std::string id, SchemaPtr schema, std::vector<std::size_t> writes,
                                       EvolveFn evolve, double theta_max, std::map<std::string, double> params)
    : id_(std::move(id)),
      schema_(std::move(schema)),
      writes_(std::move(writes)),
      evolve_(std::move(evolve)),
      theta_max_(theta_max),
      params_(std::move(params)) {
  if (!schema_) throw SchemaError("model without schema");
  if (!(theta_max_ >= 0.0)) throw ValueError("model theta_max must be >= 0");
  std::sort(writes_.begin(), writes_.end());
  writes_.erase(std::unique(writes_.begin(), writes_.end()), writes_.end());
  for (auto w : writes_) {
    if (w >= schema_->size()) throw SchemaError(fmt::format("model '{}' writes dimension {} outside schema", id_, w));
  }
}

std::vector<double> DeterministicModel::evolve_values(double theta, std::span<const double> start) const {
  if (theta < 0.0 || theta > theta_max_ * (1.0 + 1e-12)) {
    throw DomainExceededError(fmt::format("model '{}' evaluated at {} beyond theta_max {}", id_, theta, theta_max_),
                              theta_max_);
  }
  if (start.size() != schema_->size()) throw SchemaError("scene width differs from model schema");
  return evolve_(theta, start);
}

Scene DeterministicModel::evolve(double theta, const Scene& start) const {
  require_same_schema(schema_, start.schema());
  return Scene(schema_, evolve_values(theta, start.values()));
}

DeterministicModel DeterministicModel::with_theta_max(double theta_max) const {
  DeterministicModel copy = *this;
  if (!(theta_max >= 0.0)) throw ValueError("theta_max must be >= 0");
  copy.theta_max_ = theta_max;
  return copy;
}

namespace {

struct Bound {
  std::size_t x;
  std::optional<std::size_t> y, vx, vy, clock;
};

Bound bind(const SceneSchema& schema, const PlanarBinding& b) {
  Bound out{schema.index_of(b.x), {}, {}, {}, {}};
  if (b.y) out.y = schema.index_of(*b.y);
  if (b.vx) out.vx = schema.index_of(*b.vx);
  if (b.vy) out.vy = schema.index_of(*b.vy);
  if (b.clock) out.clock = schema.index_of(*b.clock);
  return out;
}

std::vector<std::size_t> written(const Bound& b, bool velocities, bool clock) {
  std::vector<std::size_t> w{b.x};
  if (b.y) w.push_back(*b.y);
  if (velocities) {
    if (b.vx) w.push_back(*b.vx);
    if (b.vy) w.push_back(*b.vy);
  }
  if (clock && b.clock) w.push_back(*b.clock);
  return w;
}

void require(bool ok, std::string_view model, std::string_view what) {
  if (!ok) throw SchemaError(fmt::format("{} needs a '{}' binding", model, what));
}

/// Position on the piecewise-linear path at absolute time tau.
std::pair<double, double> path_position(const std::vector<Waypoint>& w, double tau) {
  if (tau <= w.front().t) return {w.front().x, w.front().y};
  if (tau >= w.back().t) return {w.back().x, w.back().y};
  auto it = std::upper_bound(w.begin(), w.end(), tau, [](double t, const Waypoint& p) { return t < p.t; });
  const Waypoint& b = *it;
  const Waypoint& a = *(it - 1);
  const double span = b.t - a.t;
  const double f = span > 0.0 ? (tau - a.t) / span : 1.0;
  return {a.x + f * (b.x - a.x), a.y + f * (b.y - a.y)};
}

/// Right-sided segment slope at absolute time tau.
std::pair<double, double> path_velocity(const std::vector<Waypoint>& w, double tau) {
  if (tau < w.front().t || tau >= w.back().t) return {0.0, 0.0};
  auto it = std::upper_bound(w.begin(), w.end(), tau, [](double t, const Waypoint& p) { return t < p.t; });
  const Waypoint& b = *it;
  const Waypoint& a = *(it - 1);
  const double span = b.t - a.t;
  if (span <= 0.0) return {0.0, 0.0};
  return {(b.x - a.x) / span, (b.y - a.y) / span};
}

}  // namespace

DeterministicModel identity_model(SchemaPtr schema) {
  return DeterministicModel(
      "identity", std::move(schema), {},
      [](double, std::span<const double> s) { return std::vector<double>(s.begin(), s.end()); });
}

DeterministicModel constant_velocity(SchemaPtr schema, const PlanarBinding& binding, double vx, double vy) {
  const Bound b = bind(*schema, binding);
  return DeterministicModel(
      "constant_velocity", schema, written(b, false, false),
      [b, vx, vy](double theta, std::span<const double> s) {
        std::vector<double> out(s.begin(), s.end());
        out[b.x] = s[b.x] + vx * theta;
        if (b.y) out[*b.y] = s[*b.y] + vy * theta;
        return out;
      },
      kUnbounded, {{"vx", vx}, {"vy", vy}});
}

DeterministicModel constant_acceleration(SchemaPtr schema, const PlanarBinding& binding, double ax, double ay) {
  const Bound b = bind(*schema, binding);
  require(b.vx.has_value(), "constant_acceleration", "vx");
  require(!b.y || b.vy.has_value(), "constant_acceleration", "vy");
  return DeterministicModel(
      "constant_acceleration", schema, written(b, true, false),
      [b, ax, ay](double theta, std::span<const double> s) {
        std::vector<double> out(s.begin(), s.end());
        const double half_t2 = 0.5 * theta * theta;
        out[b.x] = s[b.x] + s[*b.vx] * theta + ax * half_t2;
        out[*b.vx] = s[*b.vx] + ax * theta;
        if (b.y) {
          out[*b.y] = s[*b.y] + s[*b.vy] * theta + ay * half_t2;
          out[*b.vy] = s[*b.vy] + ay * theta;
        }
        return out;
      },
      kUnbounded, {{"ax", ax}, {"ay", ay}});
}

DeterministicModel stop_at(SchemaPtr schema, const PlanarBinding& binding, double t_stop) {
  const Bound b = bind(*schema, binding);
  require(b.vx.has_value(), "stop_at", "vx");
  require(!b.y || b.vy.has_value(), "stop_at", "vy");
  require(b.clock.has_value(), "stop_at", "clock");
  return DeterministicModel(
      "stop_at", schema, written(b, true, true),
      [b, t_stop](double theta, std::span<const double> s) {
        std::vector<double> out(s.begin(), s.end());
        const double clock = s[*b.clock];
        out[*b.clock] = clock + theta;
        if (clock >= t_stop) return out;  // already at rest
        const double moving = std::min(theta, t_stop - clock);
        out[b.x] = s[b.x] + s[*b.vx] * moving;
        if (b.y) out[*b.y] = s[*b.y] + s[*b.vy] * moving;
        if (clock + theta >= t_stop) {
          out[*b.vx] = 0.0;
          if (b.vy) out[*b.vy] = 0.0;
        }
        return out;
      },
      kUnbounded, {{"t_stop", t_stop}});
}

DeterministicModel waypoint_follower(SchemaPtr schema, const PlanarBinding& binding, std::vector<Waypoint> waypoints) {
  const Bound b = bind(*schema, binding);
  require(b.clock.has_value(), "waypoint_follower", "clock");
  if (waypoints.empty()) throw ValueError("waypoint_follower needs at least one waypoint");
  for (std::size_t i = 1; i < waypoints.size(); ++i) {
    if (waypoints[i].t < waypoints[i - 1].t) throw ValueError("waypoint times must be nondecreasing");
  }
  return DeterministicModel(
      "waypoint_follower", schema, written(b, true, true),
      [b, w = std::move(waypoints)](double theta, std::span<const double> s) {
        std::vector<double> out(s.begin(), s.end());
        const double clock = s[*b.clock];
        const double later = clock + theta;
        out[*b.clock] = later;
        const auto [p0x, p0y] = path_position(w, clock);
        const auto [p1x, p1y] = path_position(w, later);
        out[b.x] = s[b.x] + (p1x - p0x);
        if (b.y) out[*b.y] = s[*b.y] + (p1y - p0y);
        if (theta > 0.0) {
          const auto [v0x, v0y] = path_velocity(w, clock);
          const auto [v1x, v1y] = path_velocity(w, later);
          if (b.vx) out[*b.vx] = s[*b.vx] + (v1x - v0x);
          if (b.vy) out[*b.vy] = s[*b.vy] + (v1y - v0y);
        }
        return out;
      });
}

SemigroupReport check_semigroup(const DeterministicModel& model, const SemigroupOptions& options) {
  if (options.trials == 0) throw ValueError("check_semigroup needs trials >= 1");
  std::mt19937_64 rng(options.seed);
  const auto& schema = *model.schema();
  std::uniform_real_distribution<double> value(-options.value_range, options.value_range);
  std::uniform_real_distribution<double> clock(0.0, options.value_range);
  std::uniform_int_distribution<std::size_t> steps(0, options.max_steps);
  SemigroupReport report;
  report.trials = options.trials;
  for (std::size_t trial = 0; trial < options.trials; ++trial) {
    std::vector<double> s(schema.size());
    for (std::size_t j = 0; j < s.size(); ++j) {
      double v = schema[j].unit == Unit::Second ? clock(rng) : value(rng);
      if (options.integer_values || schema[j].unit == Unit::EnumCode) v = std::round(v);
      s[j] = v;
    }
    const double t1 = static_cast<double>(steps(rng)) * options.step;
    const double t2 = static_cast<double>(steps(rng)) * options.step;
    if (t1 + t2 > model.theta_max()) continue;
    const auto identity = model.evolve_values(0.0, s);
    report.max_identity_residual = std::max(report.max_identity_residual, scene_distance(identity, s));
    const auto composed = model.evolve_values(t2, model.evolve_values(t1, s));
    const auto direct = model.evolve_values(t1 + t2, s);
    report.max_residual = std::max(report.max_residual, scene_distance(composed, direct));
  }
  report.passes = report.max_identity_residual == 0.0 && report.max_residual <= kSemigroupTolerance;
  return report;
}

}  // namespace scn
