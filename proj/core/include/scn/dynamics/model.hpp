#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scn/core/scene.hpp"

namespace scn {

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

/// Evolution function: maps (theta, scene values) to the evolved values.
using EvolveFn = std::function<std::vector<double>(double theta, std::span<const double> state)>;

/// A dynamical system (Theta, S, phi) acting on scenes of one schema. The
/// model owns the dimensions listed in `writes`; the remaining entries of its
/// output are ignored when it is combined into a family.
class DeterministicModel {
 public:
  DeterministicModel(std::string id, SchemaPtr schema, std::vector<std::size_t> writes, EvolveFn evolve,
                     double theta_max = kUnbounded, std::map<std::string, double> params = {});

  const std::string& id() const noexcept { return id_; }
  const SchemaPtr& schema() const noexcept { return schema_; }
  const std::vector<std::size_t>& writes() const noexcept { return writes_; }
  double theta_max() const noexcept { return theta_max_; }
  const std::map<std::string, double>& params() const noexcept { return params_; }

  Scene evolve(double theta, const Scene& start) const;
  std::vector<double> evolve_values(double theta, std::span<const double> start) const;

  /// Same model restricted to [0, theta_max].
  DeterministicModel with_theta_max(double theta_max) const;

 private:
  std::string id_;
  SchemaPtr schema_;
  std::vector<std::size_t> writes_;
  EvolveFn evolve_;
  double theta_max_;
  std::map<std::string, double> params_;
};

/// Names the scene entries a planar built-in reads and writes.
struct PlanarBinding {
  std::string x;
  std::optional<std::string> y;
  std::optional<std::string> vx;
  std::optional<std::string> vy;
  /// Scene entry holding absolute time; required by time-dependent models.
  std::optional<std::string> clock;
};

struct Waypoint {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
};

DeterministicModel identity_model(SchemaPtr schema);

/// x += vx * theta, y += vy * theta. Writes the position entries only.
DeterministicModel constant_velocity(SchemaPtr schema, const PlanarBinding& binding, double vx, double vy = 0.0);

/// Closed-form kinematics from the scene's own velocity entries.
DeterministicModel constant_acceleration(SchemaPtr schema, const PlanarBinding& binding, double ax, double ay = 0.0);

/// Moves at the scene's velocity until the clock reaches t_stop, then zeroes
/// the velocity and freezes the position.
DeterministicModel stop_at(SchemaPtr schema, const PlanarBinding& binding, double t_stop);

/// Piecewise-linear position through the waypoints (indexed by the clock
/// entry), velocity equal to the segment slope. Holds the first/last waypoint
/// outside their time span. Written in offset form so that the identity and
/// semigroup laws hold for any starting scene.
DeterministicModel waypoint_follower(SchemaPtr schema, const PlanarBinding& binding, std::vector<Waypoint> waypoints);

struct SemigroupOptions {
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  double step = 0.1;
  std::size_t max_steps = 100;
  /// Random scene entries are drawn from [-value_range, value_range]; clock
  /// entries (unit s) from [0, value_range].
  double value_range = 100.0;
  bool integer_values = false;
};

struct SemigroupReport {
  std::size_t trials = 0;
  double max_identity_residual = 0.0;
  double max_residual = 0.0;
  bool passes = false;
};

inline constexpr double kSemigroupTolerance = 1e-9;

/// Randomized check of phi(0, S) = S and phi(t2, phi(t1, S)) = phi(t1 + t2, S)
/// on grid-aligned times.
SemigroupReport check_semigroup(const DeterministicModel& model, const SemigroupOptions& options = {});

}  // namespace scn
