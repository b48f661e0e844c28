#include <cmath>
#include <cstdint>
#include <set>

#include <gtest/gtest.h>

#include "oracle.hpp"
#include "scn/error.hpp"
#include "scn/monitor/monitor.hpp"
#include "scn/rural/rural.hpp"

using namespace scn;
using namespace scn::testing;

namespace {

std::uint64_t choose(unsigned n, unsigned k) {
  std::vector<std::vector<std::uint64_t>> row(n + 1, std::vector<std::uint64_t>(n + 1, 0));
  for (unsigned i = 0; i <= n; ++i) {
    row[i][0] = 1;
    for (unsigned j = 1; j <= i; ++j) row[i][j] = row[i - 1][j - 1] + (j <= i - 1 ? row[i - 1][j] : 0);
  }
  return row[n][k];
}

std::uint64_t fact(unsigned n) { return n == 0 ? 1 : n * fact(n - 1); }

RuralConfig config(int n, int m) {
  RuralConfig cfg;
  cfg.n = n;
  cfg.m = m;
  return cfg;
}

/// Rolls the start scene forward with every actor coasting.
Trajectory coasting(const Scene& start, const TimeGrid& grid) {
  const double dt = grid.step();
  std::vector<double> s(start.values().begin(), start.values().end());
  std::vector<double> flat = s;
  for (std::size_t i = 1; i < grid.count(); ++i) {
    for (std::size_t a = 0; a + 3 < s.size(); a += 4) {
      s[a] = s[a] + s[a + 2] * dt;
      s[a + 1] = s[a + 1] + s[a + 3] * dt;
    }
    flat.insert(flat.end(), s.begin(), s.end());
  }
  return Trajectory(start.schema(), grid, std::move(flat));
}

}  // namespace

TEST(WeakCompositions, Examples) {
  EXPECT_EQ(weak_compositions(2, 4).size(), 10u);
  const auto zero = weak_compositions(0, 5);
  ASSERT_EQ(zero.size(), 1u);
  EXPECT_EQ(zero[0], std::vector<int>(5, 0));
  EXPECT_THROW(weak_compositions(-1, 2), RangeError);
  EXPECT_THROW(weak_compositions(2, 0), RangeError);
}

TEST(WeakCompositions, CountsAndSumsMatchBinomial) {
  for (int m = 0; m <= 8; ++m) {
    for (int parts = 1; parts <= 8; ++parts) {
      const auto all = weak_compositions(m, parts);
      ASSERT_EQ(all.size(), choose(static_cast<unsigned>(m + parts - 1), static_cast<unsigned>(parts - 1)));
      std::set<std::vector<int>> unique(all.begin(), all.end());
      EXPECT_EQ(unique.size(), all.size());
      for (const auto& c : all) {
        ASSERT_EQ(c.size(), static_cast<std::size_t>(parts));
        int sum = 0;
        for (int r : c) {
          ASSERT_GE(r, 0);
          sum += r;
        }
        ASSERT_EQ(sum, m);
      }
    }
  }
}

TEST(CountLowerBound, Examples) {
  EXPECT_EQ(count_lower_bound(3, 2), 360);
  EXPECT_EQ(count_lower_bound(0, 0), 1);
  EXPECT_EQ(count_lower_bound(1, 1), 2);
  EXPECT_EQ(count_lower_bound(20, 20), factorial(20) * factorial(20) * binomial(40, 20));
  EXPECT_EQ(binomial(5, 3), 10);
}

TEST(EnumerateChoices, MatchesClosedForm) {
  for (int n = 0; n <= 4; ++n) {
    for (int m = 0; m <= 3; ++m) {
      const auto choices = enumerate_choices(n, m);
      const std::uint64_t expected = fact(n) * fact(n) * choose(static_cast<unsigned>(m + n), static_cast<unsigned>(n));
      ASSERT_EQ(choices.size(), expected) << n << ", " << m;
      EXPECT_EQ(BigInt(choices.size()), count_lower_bound(n, m));
      std::set<ManeuverChoice> unique(choices.begin(), choices.end());
      EXPECT_EQ(unique.size(), choices.size());
    }
  }
  EXPECT_EQ(enumerate_choices(3, 2).size(), 360u);
  EXPECT_EQ(enumerate_choices(1, 0).size(), 1u);
}

TEST(EnumerateChoices, TriplesAreWellFormed) {
  for (const auto& c : enumerate_choices(3, 2)) {
    std::vector<int> a = c.overtake_order, b = c.final_order;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    EXPECT_EQ(a, (std::vector<int>{0, 1, 2}));
    EXPECT_EQ(b, (std::vector<int>{0, 1, 2}));
    ASSERT_EQ(c.blue_passes.size(), 4u);
    EXPECT_EQ(c.blue_passes[0] + c.blue_passes[1] + c.blue_passes[2] + c.blue_passes[3], 2);
  }
}

TEST(EnumerateChoices, GuardsExplosion) { EXPECT_THROW(enumerate_choices(6, 3), ComplexityError); }

TEST(Units, SpeedLimitConversions) {
  EXPECT_NEAR(kmh_to_mps(40.0), 100.0 / 9.0, 1e-12 * 100.0 / 9.0);
  EXPECT_NEAR(kmh_to_mps(100.0), 250.0 / 9.0, 1e-12 * 250.0 / 9.0);
  EXPECT_NEAR(mps_to_kmh(kmh_to_mps(40.0)), 40.0, 1e-12 * 40.0);
  EXPECT_NEAR(mps_to_kmh(kmh_to_mps(100.0)), 100.0, 1e-12 * 100.0);
}

TEST(RuralConfig, Validates) {
  RuralConfig cfg;
  cfg.n = -1;
  EXPECT_THROW(cfg.validate(), ValueError);
  cfg = RuralConfig{};
  cfg.gap_min = 0.0;
  EXPECT_THROW(cfg.validate(), ValueError);
  cfg = RuralConfig{};
  cfg.v_car_max = -1.0;
  EXPECT_THROW(cfg.validate(), ValueError);
}

TEST(Synthesize, AllChoicesAcceptedWithinCaps) {
  const auto cfg = config(3, 2);
  const auto grid = rural_grid(cfg);
  const auto a = rural_formula(cfg);
  const auto one = rural_phase_one(cfg);
  const auto three = rural_phase_three(cfg);
  for (const auto& choice : enumerate_choices(3, 2)) {
    const Trajectory c = synthesize(choice, cfg, grid);
    const auto verdict = monitor_word(c, a);
    ASSERT_TRUE(verdict.accepted()) << to_string(choice) << ": " << verdict.reason;
    std::optional<std::size_t> last_one, first_three;
    for (std::size_t i = 0; i < c.count(); ++i) {
      const auto v = c.values(i);
      for (std::size_t k = 0; k < v.size(); k += 4) {
        const double cap = k == 0 ? cfg.v_tractor_max : cfg.v_car_max;
        ASSERT_LE(std::hypot(v[k + 2], v[k + 3]), cap + 1e-12);
      }
      if (holds_at(one, c, i)) last_one = i;
      if (!first_three && holds_at(three, c, i)) first_three = i;
    }
    ASSERT_TRUE(last_one && first_three);
    EXPECT_LT(*last_one, *first_three);
  }
}

TEST(Synthesize, FinalOrderIsRealized) {
  const auto cfg = config(3, 2);
  const auto grid = rural_grid(cfg);
  for (const auto& choice : enumerate_choices(3, 2)) {
    const Trajectory c = synthesize(choice, cfg, grid);
    const auto end = c.last();
    // slot 0 is nearest to the tractor
    for (std::size_t s = 0; s + 1 < choice.final_order.size(); ++s) {
      const std::size_t near = 4 * static_cast<std::size_t>(choice.final_order[s] + 1);
      const std::size_t far = 4 * static_cast<std::size_t>(choice.final_order[s + 1] + 1);
      EXPECT_LT(end[near], end[far]);
    }
  }
}

TEST(Synthesize, DistinctChoicesGiveDistinctTrajectories) {
  const auto cfg = config(2, 1);
  const auto grid = rural_grid(cfg);
  const auto choices = enumerate_choices(2, 1);
  std::vector<Trajectory> traces;
  for (const auto& c : choices) traces.push_back(synthesize(c, cfg, grid));
  for (std::size_t i = 0; i < traces.size(); ++i) {
    for (std::size_t j = i + 1; j < traces.size(); ++j) EXPECT_GT(trajectory_distance(traces[i], traces[j]), 0.0);
  }
}

TEST(Synthesize, TractorOnly) {
  const auto cfg = config(0, 0);
  const auto grid = rural_grid(cfg);
  const auto choices = enumerate_choices(0, 0);
  ASSERT_EQ(choices.size(), 1u);
  const Trajectory c = synthesize(choices[0], cfg, grid);
  EXPECT_EQ(c.width(), 4u);
  EXPECT_TRUE(monitor_word(c, rural_formula(cfg)).accepted());
}

TEST(Synthesize, ShortGridIsScheduleError) {
  const auto cfg = config(3, 2);
  const auto choice = enumerate_choices(3, 2).front();
  EXPECT_THROW(synthesize(choice, cfg, TimeGrid::over(5.0, cfg.step)), ScheduleError);
}

TEST(RuralFormula, RedCarThatNeverPassesIsRejected) {
  const auto cfg = config(3, 2);
  const auto grid = rural_grid(cfg);
  const Trajectory ok = synthesize(enumerate_choices(3, 2).front(), cfg, grid);
  Scene start = ok.start();
  for (std::size_t k = 4; k < 16; k += 4) start = start.with(k + 2, start[2]);
  const Trajectory stuck = coasting(start, grid);
  const auto a = rural_formula(cfg);
  EXPECT_TRUE(holds_at(rural_phase_one(cfg), stuck, 0));
  EXPECT_FALSE(monitor_word(stuck, a).accepted());
  const AbstractScenario world_only(Formula::truth(), a.world(), a.instance());
  EXPECT_TRUE(monitor_word(stuck, world_only).accepted());
}

TEST(RuralFormula, FastTractorViolatesWorldModel) {
  const auto cfg = config(3, 2);
  const auto grid = rural_grid(cfg);
  const Trajectory ok = synthesize(enumerate_choices(3, 2).front(), cfg, grid);
  const Scene start = ok.start().with(2, kmh_to_mps(50.0));
  const Trajectory fast = coasting(start, grid);
  const auto a = rural_formula(cfg);
  const AbstractScenario world_only(Formula::truth(), a.world(), a.instance());
  EXPECT_FALSE(monitor_word(fast, world_only).accepted());
  EXPECT_FALSE(monitor_word(fast, a).accepted());
}
