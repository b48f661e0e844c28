#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scn/core/trajectory.hpp"

namespace scn {

class LogicalScenario;

/// Tolerance used when checking that an observed scene is a successor.
inline constexpr double kSuccessorTolerance = 1e-9;

/// A finitely branching scenario logic on a fixed time grid. The tree is
/// rooted at the empty history; the first layer holds the start scenes.
class LogicInstance {
 public:
  virtual ~LogicInstance() = default;

  virtual std::string id() const = 0;
  virtual const SchemaPtr& schema() const = 0;
  virtual double step() const = 0;
  /// Number of samples of a complete scenario.
  virtual std::size_t horizon() const = 0;

  /// Candidate next scenes (raw values) after `prefix`. Empty at the horizon.
  virtual std::vector<std::vector<double>> successors(const Trajectory& prefix) const = 0;
  virtual bool is_successor(const Trajectory& prefix, std::span<const double> next) const;
  /// Whether sample i of `c` is a successor of the first i samples.
  virtual bool is_successor_step(const Trajectory& c, std::size_t i) const;
  /// Children of `prefix` in the branching tree.
  virtual std::vector<Trajectory> branch(const Trajectory& prefix) const;
  /// Successors depend only on the last scene and the length.
  virtual bool markov() const { return false; }

  Trajectory root() const { return Trajectory::empty(schema(), step()); }
  /// Throws SchemaError / GridAlignmentError when `c` does not fit the instance.
  void require_compatible(const Trajectory& c) const;
};

using InstancePtr = std::shared_ptr<const LogicInstance>;

/// Binary branching on one enum-code dimension "bit": every scenario shorter
/// than n has the children C+0 and C+1.
InstancePtr make_binary_instance(std::size_t n);

/// Encoding of a logical scenario with finite parameter space: the first
/// layer holds the starting scenes S0(x), afterwards each node continues along
/// the realized trajectories of the parameters consistent with it.
InstancePtr make_encoding_instance(const LogicalScenario& scenario);

/// Actor of a step logic: four scene entries and finite action sets.
struct StepActor {
  std::string name;
  std::size_t x = 0;
  std::size_t y = 0;
  std::size_t vx = 0;
  std::size_t vy = 0;
  std::vector<double> ax{0.0};
  std::vector<double> ay{0.0};
  /// Instantaneous lateral displacement applied on top of the y kinematics.
  std::vector<double> lane{0.0};
};

struct StepLogicConfig {
  std::string id = "step";
  SchemaPtr schema;
  std::vector<StepActor> actors;
  double step = kDefaultStep;
  std::size_t horizon = 1;
  /// Finite start set; without one any conforming scene may start (such an
  /// instance cannot be enumerated from the root).
  std::optional<std::vector<std::vector<double>>> start;
};

/// Per-step quantized kinematics: for each actor and action (ax, ay, lane),
/// x' = x + vx dt + ax dt^2 / 2, vx' = vx + ax dt, likewise for y plus the lane
/// offset. Entries not owned by an actor stay constant.
class StepLogic : public LogicInstance {
 public:
  explicit StepLogic(StepLogicConfig config);

  std::string id() const override { return config_.id; }
  const SchemaPtr& schema() const override { return config_.schema; }
  double step() const override { return config_.step; }
  std::size_t horizon() const override { return config_.horizon; }
  std::vector<std::vector<double>> successors(const Trajectory& prefix) const override;
  bool is_successor(const Trajectory& prefix, std::span<const double> next) const override;
  bool is_successor_step(const Trajectory& c, std::size_t i) const override;
  bool markov() const override { return true; }

  const StepLogicConfig& config() const noexcept { return config_; }
  /// Successors of a single scene.
  std::vector<std::vector<double>> successors_of(std::span<const double> scene) const;

 private:
  bool step_ok(std::size_t length, std::span<const double> last, std::span<const double> next) const;

  StepLogicConfig config_;
  std::vector<bool> owned_;
};

InstancePtr make_step_instance(StepLogicConfig config);

/// Planar schema x, y (m), vx, vy (m/s).
SchemaPtr planar_schema();
/// The worked-example logic on the planar schema: one actor with
/// ax, ay in {0, -1, 1} m/s^2, step 0.1 s, 201 samples (20 s), start set
/// {(-50,100,10,-5), (0,0,0,0), (150,0,10,-5)}.
InstancePtr make_example_instance();

/// Wraps an instance and corrupts the first sample of every child, breaking
/// the prefix property. Used to exercise check_axioms.
InstancePtr make_prefix_mutant(InstancePtr base);

}  // namespace scn
