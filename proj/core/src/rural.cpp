#include "scn/rural/rural.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "scn/dynamics/model.hpp"
#include "scn/error.hpp"

namespace scn {

void RuralConfig::validate() const {
  if (n < 0 || m < 0) throw ValueError("rural configuration needs n, m >= 0");
  if (!(v_tractor_max > 0.0) || !(v_car_max > 0.0)) throw ValueError("speed limits must be positive");
  if (!(gap_min > 0.0)) throw ValueError("gap_min must be positive");
  if (!(step > 0.0) || !(accel > 0.0) || !(lane_width > 0.0)) throw ValueError("step, accel and lane width must be positive");
  if (std::abs((lane_ew - lane_we) - lane_width) > 1e-12) throw ValueError("lane centers must be one lane width apart");
  if (!(v_overtake > v_tractor)) throw ValueError("overtaking speed must exceed the tractor speed");
  if (!(v_tractor + v_blue > 0.0)) throw ValueError("blue cars must approach the tractor");
}

std::vector<std::vector<int>> weak_compositions(int m, int parts) {
  if (m < 0 || parts < 1) throw RangeError(fmt::format("weak_compositions needs m >= 0 and parts >= 1, got ({}, {})", m, parts));
  std::vector<std::vector<int>> out;
  std::vector<int> current(static_cast<std::size_t>(parts), 0);
  auto fill = [&](auto&& self, std::size_t index, int remaining) -> void {
    if (index + 1 == current.size()) {
      current[index] = remaining;
      out.push_back(current);
      return;
    }
    for (int v = 0; v <= remaining; ++v) {
      current[index] = v;
      self(self, index + 1, remaining - v);
    }
  };
  fill(fill, 0, m);
  return out;
}

BigInt factorial(unsigned n) {
  BigInt out = 1;
  for (unsigned i = 2; i <= n; ++i) out *= i;
  return out;
}

BigInt binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigInt out = 1;
  for (unsigned i = 1; i <= k; ++i) {
    out *= n - k + i;
    out /= i;
  }
  return out;
}

BigInt count_lower_bound(int n, int m) {
  if (n < 0 || m < 0) throw RangeError("count_lower_bound needs n, m >= 0");
  const auto f = factorial(static_cast<unsigned>(n));
  return f * f * binomial(static_cast<unsigned>(m + n), static_cast<unsigned>(n));
}

std::vector<ManeuverChoice> enumerate_choices(int n, int m) {
  const BigInt total = count_lower_bound(n, m);
  if (total > kMaxChoices) {
    throw ComplexityError(fmt::format("{} maneuver choices exceed the limit of {}", total.str(), kMaxChoices));
  }
  std::vector<int> identity(static_cast<std::size_t>(n));
  std::iota(identity.begin(), identity.end(), 0);
  std::vector<std::vector<int>> perms;
  auto p = identity;
  do {
    perms.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  const auto compositions = weak_compositions(m, n + 1);

  std::vector<ManeuverChoice> out;
  out.reserve(static_cast<std::size_t>(total));
  for (const auto& order : perms) {
    for (const auto& r : compositions) {
      for (const auto& final_order : perms) out.push_back({order, r, final_order});
    }
  }
  return out;
}

std::vector<std::string> rural_actors(int n, int m) {
  std::vector<std::string> actors{"tractor"};
  for (int i = 1; i <= n; ++i) actors.push_back(fmt::format("red{}", i));
  for (int i = 1; i <= m; ++i) actors.push_back(fmt::format("blue{}", i));
  return actors;
}

SchemaPtr rural_schema(int n, int m) {
  std::vector<Dimension> dims;
  for (const auto& a : rural_actors(n, m)) {
    dims.push_back({a + "_x", Unit::Meter});
    dims.push_back({a + "_y", Unit::Meter});
    dims.push_back({a + "_vx", Unit::MeterPerSecond});
    dims.push_back({a + "_vy", Unit::MeterPerSecond});
  }
  return make_schema(std::move(dims));
}

namespace {

std::size_t tractor() { return 0; }
std::size_t red(int i) { return static_cast<std::size_t>(1 + i); }
std::size_t blue(const RuralConfig& cfg, int j) { return static_cast<std::size_t>(1 + cfg.n + j); }

struct Timing {
  double dv;
  double t_accel;
  double closing;
  double gap_far;
  double slot_far;
  double front;
  double rear;
};

Timing timing(const RuralConfig& cfg) {
  Timing t{};
  t.dv = cfg.v_overtake - cfg.v_tractor;
  t.t_accel = t.dv / cfg.accel;
  t.closing = cfg.v_tractor + cfg.v_blue;
  t.gap_far = cfg.n > 0 ? cfg.queue_gap + cfg.queue_spacing * (cfg.n - 1) : 0.0;
  t.slot_far = cfg.n > 0 ? cfg.slot_gap + cfg.slot_spacing * (cfg.n - 1) : 0.0;
  t.front = (t.slot_far + cfg.clearance) / t.closing + cfg.headway;
  t.rear = (t.gap_far + cfg.clearance) / t.closing + cfg.headway;
  return t;
}

/// Exact number of grid steps in `t`, or ScheduleError.
std::size_t aligned_steps(double t, double dt, std::string_view what) {
  const double q = t / dt;
  const double r = std::round(q);
  if (q < -1e-9 || std::abs(q - r) > 1e-9) {
    throw ScheduleError(fmt::format("{} of {} s is not a nonnegative multiple of the grid step {}", what, t, dt));
  }
  return static_cast<std::size_t>(r);
}

/// Smallest grid index at or after time t.
std::size_t snap_up(double t, double dt) { return static_cast<std::size_t>(std::ceil(t / dt - 1e-9)); }

void validate_choice(const ManeuverChoice& c, int n, int m) {
  auto is_perm = [n](std::vector<int> v) {
    if (v.size() != static_cast<std::size_t>(n)) return false;
    std::sort(v.begin(), v.end());
    for (int i = 0; i < n; ++i) {
      if (v[static_cast<std::size_t>(i)] != i) return false;
    }
    return true;
  };
  if (!is_perm(c.overtake_order) || !is_perm(c.final_order)) throw ValueError("choice orders must be permutations of the red cars");
  if (c.blue_passes.size() != static_cast<std::size_t>(n + 1)) throw ValueError("choice needs n + 1 blue pass counts");
  int sum = 0;
  for (int r : c.blue_passes) {
    if (r < 0) throw ValueError("blue pass counts must be nonnegative");
    sum += r;
  }
  if (sum != m) throw ValueError(fmt::format("blue pass counts sum to {}, expected {}", sum, m));
}

}  // namespace

TimeGrid rural_grid(const RuralConfig& cfg) {
  cfg.validate();
  const auto t = timing(cfg);
  const double cruise_max = cfg.n > 0 ? std::max(0.0, (t.gap_far + t.slot_far) / t.dv - t.t_accel) : 0.0;
  const double per_red = t.front + t.rear + cfg.headway + 2.0 * t.t_accel + cruise_max;
  const double duration = cfg.n * per_red + cfg.m * cfg.headway + t.front + t.rear +
                          cfg.pass_clearance / t.closing + 2.0 * cfg.headway +
                          (2.0 * cfg.n + cfg.m + 4.0) * cfg.step;
  return TimeGrid(cfg.step, snap_up(duration, cfg.step) + 1);
}

Trajectory synthesize(const ManeuverChoice& choice, const RuralConfig& cfg, const TimeGrid& grid) {
  cfg.validate();
  validate_choice(choice, cfg.n, cfg.m);
  const double dt = grid.step();
  const auto t = timing(cfg);
  const std::size_t n_accel = cfg.n > 0 ? aligned_steps(t.t_accel, dt, "acceleration phase") : 0;
  if (cfg.n > 0 && n_accel == 0) throw ScheduleError("acceleration phase shorter than one grid step");

  std::vector<std::size_t> slot_of(static_cast<std::size_t>(cfg.n));
  for (std::size_t s = 0; s < choice.final_order.size(); ++s) slot_of[static_cast<std::size_t>(choice.final_order[s])] = s;
  std::vector<std::size_t> n_cruise(static_cast<std::size_t>(cfg.n));
  for (int k = 0; k < cfg.n; ++k) {
    const double gain = cfg.queue_gap + cfg.queue_spacing * k + cfg.slot_gap +
                        cfg.slot_spacing * static_cast<double>(slot_of[static_cast<std::size_t>(k)]);
    const double cruise = gain / t.dv - t.t_accel;
    if (cruise < -1e-9) throw ScheduleError(fmt::format("red{} cannot reach its slot: gap too small", k + 1));
    n_cruise[static_cast<std::size_t>(k)] = aligned_steps(std::max(0.0, cruise), dt, "cruise phase");
  }

  // Event schedule in grid steps.
  std::vector<std::size_t> start(static_cast<std::size_t>(cfg.n));
  std::vector<double> crossing;
  std::size_t cursor = 0;
  auto pass_blues = [&](int count, double from) {
    std::optional<std::size_t> last;
    double time = from;
    for (int b = 0; b < count; ++b) {
      const std::size_t tau = snap_up(time, dt);
      crossing.push_back(static_cast<double>(tau) * dt);
      last = tau;
      time = static_cast<double>(tau) * dt + cfg.headway;
    }
    return last;
  };
  for (std::size_t j = 0; j < choice.overtake_order.size(); ++j) {
    const int k = choice.overtake_order[j];
    const double free_at = static_cast<double>(cursor) * dt;
    const auto last = pass_blues(choice.blue_passes[static_cast<std::size_t>(k + 1)],
                                 free_at + (j == 0 ? cfg.headway : t.front));
    std::size_t s = j == 0 ? 0 : cursor + snap_up(cfg.headway, dt);
    if (last) s = std::max(s, snap_up(static_cast<double>(*last) * dt + t.rear, dt));
    start[static_cast<std::size_t>(k)] = s;
    cursor = s + 2 * n_accel + n_cruise[static_cast<std::size_t>(k)];
  }
  const auto last = pass_blues(choice.blue_passes[0], static_cast<double>(cursor) * dt + (cfg.n == 0 ? cfg.headway : t.front));
  std::size_t end = cursor;
  if (last) end = std::max(end, snap_up(static_cast<double>(*last) * dt + cfg.pass_clearance / t.closing, dt));
  end += snap_up(cfg.headway, dt);
  if (end >= grid.count()) {
    throw ScheduleError(fmt::format("schedule needs {} s but the grid ends at {} s", static_cast<double>(end) * dt,
                                    grid.duration()));
  }

  const auto schema = rural_schema(cfg.n, cfg.m);
  const std::size_t width = schema->size();
  std::vector<double> state(width, 0.0);
  auto set = [&](std::size_t actor, double x, double y, double vx) {
    state[4 * actor] = x;
    state[4 * actor + 1] = y;
    state[4 * actor + 2] = vx;
    state[4 * actor + 3] = 0.0;
  };
  set(tractor(), 0.0, cfg.lane_we, cfg.v_tractor);
  for (int k = 0; k < cfg.n; ++k) set(red(k), -(cfg.queue_gap + cfg.queue_spacing * k), cfg.lane_we, cfg.v_tractor);
  for (int b = 0; b < cfg.m; ++b) set(blue(cfg, b), t.closing * crossing[static_cast<std::size_t>(b)], cfg.lane_ew, -cfg.v_blue);

  const auto actors = rural_actors(cfg.n, cfg.m);
  const std::array<double, 3> accelerations{0.0, cfg.accel, -cfg.accel};
  std::vector<std::array<DeterministicModel, 3>> models;
  models.reserve(actors.size());
  for (const auto& a : actors) {
    const PlanarBinding binding{a + "_x", a + "_y", a + "_vx", a + "_vy", std::nullopt};
    models.push_back({constant_acceleration(schema, binding, accelerations[0]),
                      constant_acceleration(schema, binding, accelerations[1]),
                      constant_acceleration(schema, binding, accelerations[2])});
  }

  std::vector<double> data;
  data.reserve(grid.count() * width);
  data.insert(data.end(), state.begin(), state.end());
  for (std::size_t p = 0; p + 1 < grid.count(); ++p) {
    std::vector<double> next = state;
    for (std::size_t a = 0; a < actors.size(); ++a) {
      std::size_t action = 0;
      double lane = 0.0;
      if (a >= 1 && a <= static_cast<std::size_t>(cfg.n)) {
        const std::size_t k = a - 1;
        const std::size_t s = start[k];
        const std::size_t cruise_end = s + n_accel + n_cruise[k];
        if (p >= s && p < s + n_accel) {
          action = 1;
          if (p == s) lane = cfg.lane_width;
        } else if (p >= cruise_end && p < cruise_end + n_accel) {
          action = 2;
          if (p + 1 == cruise_end + n_accel) lane = -cfg.lane_width;
        }
      }
      const auto out = models[a][action].evolve_values(dt, state);
      for (std::size_t d = 4 * a; d < 4 * a + 4; ++d) next[d] = out[d];
      next[4 * a + 1] = next[4 * a + 1] + lane;
    }
    state = std::move(next);
    data.insert(data.end(), state.begin(), state.end());
  }
  return Trajectory(schema, grid, std::move(data));
}

InstancePtr rural_instance(const RuralConfig& cfg) {
  cfg.validate();
  StepLogicConfig config;
  config.id = fmt::format("rural(n={}, m={})", cfg.n, cfg.m);
  config.schema = rural_schema(cfg.n, cfg.m);
  const auto actors = rural_actors(cfg.n, cfg.m);
  for (std::size_t a = 0; a < actors.size(); ++a) {
    config.actors.push_back(StepActor{actors[a], 4 * a, 4 * a + 1, 4 * a + 2, 4 * a + 3, {0.0, -cfg.accel, cfg.accel},
                                      {0.0}, {0.0, -cfg.lane_width, cfg.lane_width}});
  }
  const auto grid = rural_grid(cfg);
  config.step = grid.step();
  config.horizon = grid.count();
  return make_step_instance(std::move(config));
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

LinearConstraint difference(std::size_t plus, std::size_t minus, double lo, double hi) {
  return {{{plus, 1.0}, {minus, -1.0}}, lo, hi};
}

LinearConstraint single(std::size_t dim, double lo, double hi) { return {{{dim, 1.0}}, lo, hi}; }

Formula atom_or_true(const SchemaPtr& schema, std::vector<LinearConstraint> constraints) {
  if (constraints.empty()) return Formula::truth();
  return Formula::atom(ScenePredicate(schema, std::move(constraints)));
}

}  // namespace

Formula rural_phase_one(const RuralConfig& cfg) {
  cfg.validate();
  const auto schema = rural_schema(cfg.n, cfg.m);
  const double half = cfg.lane_width / 2.0;
  const std::size_t tx = 4 * tractor();
  std::vector<LinearConstraint> c{single(tx + 2, -cfg.v_tractor_max, cfg.v_tractor_max),
                                  single(tx + 1, cfg.lane_we - half, cfg.lane_we + half)};
  for (int k = 0; k < cfg.n; ++k) {
    const std::size_t r = 4 * red(k);
    c.push_back(difference(tx, r, cfg.gap_min, kInf));
    c.push_back(single(r + 1, cfg.lane_we - half, cfg.lane_we + half));
  }
  for (int b = 0; b < cfg.m; ++b) {
    const std::size_t u = 4 * blue(cfg, b);
    c.push_back(difference(u, tx, 0.0, kInf));
    c.push_back(single(u + 1, cfg.lane_ew - half, cfg.lane_ew + half));
  }
  return atom_or_true(schema, std::move(c));
}

Formula rural_phase_three(const RuralConfig& cfg) {
  cfg.validate();
  const auto schema = rural_schema(cfg.n, cfg.m);
  const double half = cfg.lane_width / 2.0;
  const std::size_t tx = 4 * tractor();
  std::vector<LinearConstraint> c;
  for (int k = 0; k < cfg.n; ++k) {
    const std::size_t r = 4 * red(k);
    c.push_back(difference(r, tx, cfg.gap_min, kInf));
    c.push_back(single(r + 1, cfg.lane_we - half, cfg.lane_we + half));
  }
  for (int b = 0; b < cfg.m; ++b) {
    const std::size_t u = 4 * blue(cfg, b);
    c.push_back(difference(tx, u, cfg.pass_clearance, kInf));
    c.push_back(single(u + 1, cfg.lane_ew - half, cfg.lane_ew + half));
  }
  return atom_or_true(schema, std::move(c));
}

AbstractScenario rural_formula(const RuralConfig& cfg) {
  auto instance = rural_instance(cfg);
  const auto& schema = instance->schema();
  std::vector<LinearConstraint> caps;
  const std::size_t actors = static_cast<std::size_t>(1 + cfg.n + cfg.m);
  for (std::size_t a = 0; a < actors; ++a) {
    const double cap = a == tractor() ? cfg.v_tractor_max : cfg.v_car_max;
    caps.push_back(single(4 * a + 2, -cap, cap));
    caps.push_back(single(4 * a + 3, -cap, cap));
  }
  Formula constraint = make_and(rural_phase_one(cfg), Formula::eventually(rural_phase_three(cfg)));
  std::vector<Formula> world{Formula::always(Formula::atom(ScenePredicate(schema, std::move(caps))))};
  return AbstractScenario(std::move(constraint), std::move(world), std::move(instance));
}

std::string to_string(const ManeuverChoice& choice) {
  return fmt::format("order={} passes={} final={}", choice.overtake_order, choice.blue_passes, choice.final_order);
}

}  // namespace scn
