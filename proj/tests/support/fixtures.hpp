#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "scn/core/scene.hpp"
#include "scn/core/trajectory.hpp"
#include "scn/dynamics/family.hpp"
#include "scn/dynamics/model.hpp"
#include "scn/logic/abstract.hpp"
#include "scn/logic/formula.hpp"
#include "scn/logic/instance.hpp"
#include "scn/logical/logical_scenario.hpp"

#ifndef SCN_SCENARIO_DIR
#define SCN_SCENARIO_DIR "scenarios"
#endif

namespace scn::testing {

inline std::string scenario_path(const std::string& file) { return std::string(SCN_SCENARIO_DIR) + "/" + file; }

/// phi(t, s) = (s0 + 10 t, s1 - 5 t, s2, s3)
inline DeterministicModel example2_model() {
  return DeterministicModel(
      "example2", planar_schema(), {0, 1},
      [](double t, std::span<const double> s) {
        return std::vector<double>{s[0] + 10.0 * t, s[1] - 5.0 * t, s[2], s[3]};
      });
}

inline Scene example2_start() { return Scene(planar_schema(), {-50.0, 100.0, 10.0, -5.0}); }

inline TimeGrid example2_grid() { return TimeGrid::over(20.0, 0.1); }

/// Closed form of the straight drive, sample by sample.
inline Trajectory example2_closed_form() {
  const TimeGrid grid = example2_grid();
  std::vector<double> flat;
  for (std::size_t i = 0; i < grid.count(); ++i) {
    const double t = grid.time(i);
    flat.insert(flat.end(), {-50.0 + 10.0 * t, 100.0 - 5.0 * t, 10.0, -5.0});
  }
  return Trajectory(planar_schema(), grid, std::move(flat));
}

inline Formula lambda_ex() {
  const auto s = planar_schema();
  return Formula::conj(Formula::scene(Scene(s, {-50.0, 100.0, 10.0, -5.0})),
                       Formula::eventually(Formula::disj(Formula::scene(Scene(s, {150.0, 0.0, 10.0, -5.0})),
                                                         Formula::scene(Scene(s, {0.0, 0.0, 0.0, 0.0})))));
}

inline AbstractScenario example3() { return AbstractScenario(lambda_ex(), {}, make_example_instance()); }

/// Same start, braking to rest at the origin: x decelerates at 1 m/s^2 for
/// 10 s; y decelerates for 4 s, coasts 3.5 s and brakes at 1 m/s^2 for 9 s.
/// At rest from 16.5 s on.
inline Trajectory stop_at_origin_variant() {
  const TimeGrid grid = example2_grid();
  std::vector<double> flat;
  for (std::size_t i = 0; i < grid.count(); ++i) {
    const double t = static_cast<double>(i) / 10.0;
    double x = 0.0;
    double vx = 0.0;
    if (t < 10.0) {
      x = -50.0 + 10.0 * t - 0.5 * t * t;
      vx = 10.0 - t;
    }
    double y = 0.0;
    double vy = 0.0;
    if (t <= 4.0) {
      y = 100.0 - 5.0 * t - 0.5 * t * t;
      vy = -5.0 - t;
    } else if (t <= 7.5) {
      y = 72.0 - 9.0 * (t - 4.0);
      vy = -9.0;
    } else if (t < 16.5) {
      const double u = t - 7.5;
      y = 40.5 - 9.0 * u + 0.5 * u * u;
      vy = -9.0 + u;
    }
    flat.insert(flat.end(), {x, y, vx, vy});
  }
  return Trajectory(planar_schema(), grid, std::move(flat));
}

/// Example 2 driven from the wrong starting scene (0, 0, 0, 0).
inline Trajectory wrong_start_variant() {
  const TimeGrid grid = example2_grid();
  std::vector<double> flat;
  for (std::size_t i = 0; i < grid.count(); ++i) {
    const double t = grid.time(i);
    flat.insert(flat.end(), {10.0 * t, -5.0 * t, 10.0, -5.0});
  }
  return Trajectory(planar_schema(), grid, std::move(flat));
}

inline SchemaPtr bit_schema() { return make_schema({{"bit", Unit::EnumCode}}); }

/// Bit string of length n read from the binary digits of `code`, most
/// significant first.
inline Trajectory bit_word(std::uint64_t code, std::size_t n) {
  std::vector<double> flat;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t shift = n - 1 - i;
    flat.push_back(shift < 64 ? static_cast<double>((code >> shift) & 1U) : 0.0);
  }
  return Trajectory(bit_schema(), TimeGrid(1.0, n), std::move(flat));
}

/// Logical scenario with one discrete speed axis of k values and a constant
/// velocity binder over the planar schema.
inline LogicalScenario speed_scenario(std::size_t k, double step = 0.1, double duration = 2.0) {
  std::vector<double> values;
  for (std::size_t i = 0; i < k; ++i) values.push_back(0.5 + 0.25 * static_cast<double>(i));
  ParameterSpace space({DiscreteAxis{"v", values}});
  Binder binder = [](std::span<const double> x) {
    const double v = x[0];
    Scene start(planar_schema(), {0.0, 1.0, v, 0.5 * v});
    return Binding{start, combine({constant_velocity(planar_schema(), PlanarBinding{"x", "y"}, v, 0.5 * v)}, 0.1)};
  };
  return LogicalScenario("speeds" + std::to_string(k), std::move(space), std::move(binder),
                         TimeGrid::over(duration, step));
}

/// C(t) = x t on a one-dimensional schema, x in [1, 3].
inline LogicalScenario slope_scenario() {
  const auto schema = make_schema({{"c", Unit::Meter}});
  Binder binder = [schema](std::span<const double> x) {
    return Binding{Scene(schema, {0.0}), combine({constant_velocity(schema, PlanarBinding{"c"}, x[0])}, 0.1)};
  };
  return LogicalScenario("slope", ParameterSpace({ContinuousAxis{"x", 1.0, 3.0}}), std::move(binder),
                         TimeGrid::over(10.0, 0.1));
}

inline Trajectory line_trace(double slope, const LogicalScenario& l) {
  std::vector<double> flat;
  for (std::size_t i = 0; i < l.grid().count(); ++i) flat.push_back(slope * l.grid().time(i));
  return Trajectory(l.schema(), l.grid(), std::move(flat));
}

}  // namespace scn::testing
