#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "scn/core/trajectory.hpp"
#include "scn/logic/abstract.hpp"

namespace scn {

using BigInt = boost::multiprecision::cpp_int;

constexpr double kmh_to_mps(double kmh) noexcept { return kmh / 3.6; }
constexpr double mps_to_kmh(double mps) noexcept { return mps * 3.6; }

/// Two-lane rural road with a slow tractor, n red cars queued behind it and m
/// oncoming blue cars. Positions in m, speeds in m/s, times in s.
struct RuralConfig {
  int n = 3;
  int m = 2;
  double v_tractor_max = kmh_to_mps(40.0);
  double v_car_max = kmh_to_mps(100.0);
  double gap_min = 50.0;

  /// Lane centers; the WE lane (traffic heading east, +x) and the EW lane.
  double lane_we = 0.0;
  double lane_ew = 3.5;
  double lane_width = 3.5;

  double step = 0.5;
  double v_tractor = 10.0;
  double v_overtake = 25.0;
  double v_blue = 25.0;
  double accel = 2.5;
  /// Red car i starts queue_gap + i * queue_spacing behind the tractor.
  double queue_gap = 60.0;
  double queue_spacing = 30.0;
  /// Final slot s lies slot_gap + s * slot_spacing ahead of the tractor.
  double slot_gap = 60.0;
  double slot_spacing = 30.0;
  double headway = 2.0;
  /// Spatial clearance between a red car in the EW lane and a blue car.
  double clearance = 10.0;
  /// A blue car has passed the tractor once it is this far behind it.
  double pass_clearance = 1.0;

  /// ValueError on negative counts, non-positive limits or gap_min <= 0.
  void validate() const;
};

/// overtake_order[j]: red car overtaking j-th; blue_passes[k]: blue cars let
/// through by red car k (1-based), blue_passes[0] the rest; final_order[s]:
/// red car in slot s, slot 0 closest to the tractor. Red cars are 0-based in
/// the orders.
struct ManeuverChoice {
  std::vector<int> overtake_order;
  std::vector<int> blue_passes;
  std::vector<int> final_order;

  friend bool operator==(const ManeuverChoice&, const ManeuverChoice&) = default;
  friend auto operator<=>(const ManeuverChoice&, const ManeuverChoice&) = default;
};

/// All ordered tuples of `parts` nonnegative integers summing to m, in
/// lexicographic order. RangeError on negative input or parts < 1.
std::vector<std::vector<int>> weak_compositions(int m, int parts);

BigInt binomial(unsigned n, unsigned k);
BigInt factorial(unsigned n);
/// (n!)^2 * C(m + n, n).
BigInt count_lower_bound(int n, int m);

inline constexpr std::size_t kMaxChoices = 1'000'000;

/// Every (overtake order, blue composition, final order) triple.
/// ComplexityError when the count exceeds kMaxChoices.
std::vector<ManeuverChoice> enumerate_choices(int n, int m);

/// Joint schema: for the tractor, red1..redn and blue1..bluem the entries
/// <actor>_x, <actor>_y (m), <actor>_vx, <actor>_vy (m/s).
SchemaPtr rural_schema(int n, int m);
std::vector<std::string> rural_actors(int n, int m);

/// Grid long enough for every choice of the configuration.
TimeGrid rural_grid(const RuralConfig& cfg);

/// Deterministic joint trajectory of one choice, stepped with the constant
/// acceleration built-in plus instantaneous lane offsets. ScheduleError when
/// the grid is too short or the maneuver times are not grid aligned.
Trajectory synthesize(const ManeuverChoice& choice, const RuralConfig& cfg, const TimeGrid& grid);

/// Step logic over the joint schema: every actor chooses ax in
/// {-accel, 0, accel} and a lane offset in {-w, 0, w}; any start scene.
InstancePtr rural_instance(const RuralConfig& cfg);

/// Scene predicates of the first and third phase.
Formula rural_phase_one(const RuralConfig& cfg);
Formula rural_phase_three(const RuralConfig& cfg);

/// phase one at the start, eventually phase three; speed limits as world
/// model.
AbstractScenario rural_formula(const RuralConfig& cfg);

std::string to_string(const ManeuverChoice& choice);

}  // namespace scn
