#include <cmath>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "generators.hpp"
#include "scn/error.hpp"

using namespace scn;
using namespace scn::testing;

namespace {

/// x, vx and an absolute clock.
SchemaPtr clocked_schema() {
  return make_schema({{"x", Unit::Meter}, {"vx", Unit::MeterPerSecond}, {"clock", Unit::Second}});
}

SchemaPtr clocked_planar() {
  return make_schema({{"x", Unit::Meter},
                      {"y", Unit::Meter},
                      {"vx", Unit::MeterPerSecond},
                      {"vy", Unit::MeterPerSecond},
                      {"clock", Unit::Second}});
}

std::vector<DeterministicModel> builtins() {
  const auto p = planar_schema();
  const auto c = clocked_planar();
  const PlanarBinding full{"x", "y", "vx", "vy", "clock"};
  return {
      identity_model(p),
      constant_velocity(p, PlanarBinding{"x", "y"}, 10.0, -5.0),
      constant_acceleration(p, PlanarBinding{"x", "y", "vx", "vy"}, -1.0, 0.5),
      constant_acceleration(p, PlanarBinding{"x", std::nullopt, "vx"}, 2.5),
      stop_at(c, full, 37.5),
      waypoint_follower(c, full, {{0.0, 0.0, 0.0}, {10.0, 50.0, 0.0}, {30.0, 50.0, 20.0}, {45.0, -10.0, 3.5}}),
  };
}

AttributeLevelScenario example2_attribute_level() {
  return {example2_start(), combine({example2_model()}), example2_grid()};
}

}  // namespace

TEST(Builtins, SemigroupLawsHold) {
  for (const auto& model : builtins()) {
    SCOPED_TRACE(model.id());
    const auto report = check_semigroup(model, {.trials = 1000, .seed = 17});
    EXPECT_EQ(report.trials, 1000u);
    EXPECT_EQ(report.max_identity_residual, 0.0);
    EXPECT_LE(report.max_residual, kSemigroupTolerance);
    EXPECT_TRUE(report.passes);
  }
}

TEST(Builtins, BrokenModelFailsSemigroupCheck) {
  const auto s = make_schema({{"x", Unit::Meter}});
  const DeterministicModel squared("squared", s, {0},
                                   [](double t, std::span<const double> v) { return std::vector<double>{v[0] + t * t}; });
  EXPECT_FALSE(check_semigroup(squared, {.trials = 50}).passes);
}

TEST(Builtins, RequireBindings) {
  const auto p = planar_schema();
  EXPECT_THROW(constant_acceleration(p, PlanarBinding{"x"}, 1.0), SchemaError);
  EXPECT_THROW(stop_at(p, PlanarBinding{"x", "y", "vx", "vy"}, 1.0), SchemaError);
  EXPECT_THROW(waypoint_follower(clocked_planar(), PlanarBinding{"x", "y", "vx", "vy", "clock"}, {}), ValueError);
  EXPECT_THROW(constant_velocity(p, PlanarBinding{"speed"}, 1.0), SchemaError);
}

TEST(Builtins, StopAtComesToRest) {
  const auto s = clocked_schema();
  const auto m = stop_at(s, PlanarBinding{"x", std::nullopt, "vx", std::nullopt, "clock"}, 2.0);
  const Scene start(s, {0.0, 3.0, 0.0});
  const Scene later = m.evolve(5.0, start);
  EXPECT_DOUBLE_EQ(later[0], 6.0);
  EXPECT_EQ(later[1], 0.0);
  EXPECT_DOUBLE_EQ(later[2], 5.0);
}

TEST(Builtins, WaypointFollowerPassesThroughWaypoints) {
  const auto s = clocked_planar();
  const auto m = waypoint_follower(s, PlanarBinding{"x", "y", "vx", "vy", "clock"},
                                   {{0.0, 0.0, 0.0}, {10.0, 50.0, 0.0}, {30.0, 50.0, 20.0}});
  const Scene start(s, {0.0, 0.0, 5.0, 0.0, 0.0});
  const Scene at10 = m.evolve(10.0, start);
  EXPECT_NEAR(at10[0], 50.0, 1e-12);
  EXPECT_NEAR(at10[1], 0.0, 1e-12);
  const Scene at20 = m.evolve(20.0, start);
  EXPECT_NEAR(at20[0], 50.0, 1e-12);
  EXPECT_NEAR(at20[1], 10.0, 1e-12);
  EXPECT_NEAR(at20[3], 1.0, 1e-12);
}

TEST(Evaluate, ExampleTwoMatchesClosedForm) {
  const Trajectory c = evaluate(example2_attribute_level());
  EXPECT_EQ(c, example2_closed_form());
  EXPECT_EQ(c.last(), Scene(planar_schema(), {150.0, 0.0, 10.0, -5.0}));
}

TEST(Evaluate, IsDeterministicAndStartsAtStart) {
  Rng rng(2);
  for (const auto& model : builtins()) {
    const auto schema = model.schema();
    for (int trial = 0; trial < 20; ++trial) {
      auto values = random_values(rng, schema->size(), 50.0);
      if (schema->size() == 5) values[4] = std::abs(values[4]);
      const AttributeLevelScenario a{Scene(schema, values), combine({model}), TimeGrid::over(5.0, 0.1)};
      const Trajectory first = evaluate(a);
      EXPECT_EQ(first, evaluate(a));
      EXPECT_EQ(first.start(), a.start);
    }
  }
}

TEST(Evaluate, OverlongGridReportsTsup) {
  const auto model = example2_model().with_theta_max(10.0);
  const AttributeLevelScenario a{example2_start(), combine({model}), example2_grid()};
  try {
    evaluate(a);
    FAIL() << "expected DomainExceededError";
  } catch (const DomainExceededError& e) {
    EXPECT_EQ(e.t_sup(), 10.0);
  }
  const auto r = evaluate_detailed(a, {.allow_truncation = true});
  EXPECT_TRUE(r.truncated);
  EXPECT_EQ(r.trajectory.count(), 101u);
  EXPECT_EQ(r.trajectory, prefix(example2_closed_form(), 10.0));
}

TEST(Combine, ValidatesMembers) {
  const auto p = planar_schema();
  EXPECT_THROW(combine({}), ValueError);
  EXPECT_THROW(combine({identity_model(p)}, 0.0), ValueError);
  EXPECT_THROW(combine({identity_model(p), identity_model(clocked_schema())}), SchemaError);
  const auto a = constant_velocity(p, PlanarBinding{"x"}, 1.0);
  const auto b = constant_velocity(p, PlanarBinding{"x"}, 2.0);
  EXPECT_THROW(combine({a, b}), OwnershipError);
  EXPECT_NO_THROW(combine({a, b}, 0.1, {0}));
}

TEST(Combine, MembersKeepTheirOwnDimensions) {
  const auto p = planar_schema();
  const auto along = constant_velocity(p, PlanarBinding{"x"}, 3.0);
  const auto across = constant_acceleration(p, PlanarBinding{"y", std::nullopt, "vy"}, -0.5);
  const Scene start(p, {1.0, 2.0, 3.0, 4.0});
  const TimeGrid grid = TimeGrid::over(4.0, 0.1);
  const Trajectory joint = evaluate({start, combine({along, across}), grid});
  const Trajectory x_alone = evaluate({start, combine({along}), grid});
  const Trajectory y_alone = evaluate({start, combine({across}), grid});
  for (std::size_t i = 0; i < grid.count(); ++i) {
    EXPECT_EQ(joint.values(i)[0], x_alone.values(i)[0]);
    EXPECT_EQ(joint.values(i)[1], y_alone.values(i)[1]);
    EXPECT_EQ(joint.values(i)[3], y_alone.values(i)[3]);
    EXPECT_EQ(joint.values(i)[2], 3.0);
  }
}

TEST(Combine, RestrictionToMemberOnRandomPairs) {
  Rng rng(12);
  const auto p = planar_schema();
  for (int trial = 0; trial < 100; ++trial) {
    const auto along = constant_velocity(p, PlanarBinding{"x"}, small_int(rng, -5, 5));
    const auto across = constant_acceleration(p, PlanarBinding{"y", std::nullopt, "vy"}, small_int(rng, -2, 2));
    const Scene start(p, random_values(rng, 4, 20.0));
    const TimeGrid grid = TimeGrid::over(2.0, 0.1);
    const Trajectory joint = evaluate({start, combine({along, across}), grid});
    const Trajectory a = evaluate({start, combine({along}), grid});
    const Trajectory b = evaluate({start, combine({across}), grid});
    for (std::size_t i = 0; i < grid.count(); ++i) {
      ASSERT_EQ(joint.values(i)[0], a.values(i)[0]);
      ASSERT_EQ(joint.values(i)[1], b.values(i)[1]);
      ASSERT_EQ(joint.values(i)[3], b.values(i)[3]);
    }
  }
}

TEST(Combine, ContradictionTruncatesDomain) {
  const auto s = clocked_schema();
  const auto cruise = constant_velocity(s, PlanarBinding{"x"}, 1.0);
  const auto stopping = stop_at(s, PlanarBinding{"x", std::nullopt, "vx", std::nullopt, "clock"}, 0.5);
  const AttributeLevelScenario a{Scene(s, {0.0, 1.0, 0.0}), combine({cruise, stopping}, 0.1, {0}),
                                 TimeGrid::over(2.0, 0.1)};
  try {
    evaluate(a);
    FAIL() << "expected TruncatedResult";
  } catch (const TruncatedResult& e) {
    EXPECT_NEAR(e.contradiction_time(), 0.6, 1e-12);
    EXPECT_EQ(e.trajectory().count(), 6u);
    EXPECT_NEAR(e.trajectory().duration(), 0.5, 1e-12);
  }
  const auto r = evaluate_detailed(a, {.allow_truncation = true});
  EXPECT_TRUE(r.truncated);
  ASSERT_TRUE(r.contradiction_time.has_value());
  EXPECT_NEAR(*r.contradiction_time, 0.6, 1e-12);
  EXPECT_NEAR(r.t_sup, 0.5, 1e-12);
}

TEST(Combine, AgreeingSharedWritersDoNotContradict) {
  const auto p = planar_schema();
  const auto a = constant_velocity(p, PlanarBinding{"x"}, 2.0);
  const auto b = constant_velocity(p, PlanarBinding{"x"}, 2.0);
  const auto r = evaluate_detailed({Scene(p, {0, 0, 0, 0}), combine({a, b}, 0.1, {0}), TimeGrid::over(3.0, 0.1)});
  EXPECT_FALSE(r.truncated);
  EXPECT_EQ(r.trajectory.count(), 31u);
}

TEST(Combine, ContradictionLeavesTimeZero) {
  const auto p = planar_schema();
  const auto a = constant_velocity(p, PlanarBinding{"x"}, 1.0);
  const auto b = constant_velocity(p, PlanarBinding{"x"}, -1.0);
  const auto r = evaluate_detailed({Scene(p, {0, 0, 0, 0}), combine({a, b}, 0.5, {0}), TimeGrid::over(1.0, 0.1)},
                                   {.allow_truncation = true});
  EXPECT_EQ(r.trajectory.count(), 1u);
  EXPECT_EQ(r.trajectory.start(), Scene(p, {0, 0, 0, 0}));
}
