#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "scn/core/trajectory.hpp"
#include "scn/dynamics/family.hpp"

namespace scn {

struct ContinuousAxis {
  std::string name;
  double lo = 0.0;
  double hi = 0.0;
};

struct DiscreteAxis {
  std::string name;
  std::vector<double> values;
};

using Axis = std::variant<ContinuousAxis, DiscreteAxis>;

const std::string& axis_name(const Axis& axis);

/// Membership tolerance for discrete axis values.
inline constexpr double kDiscreteMemberTolerance = 1e-12;

/// Product of closed intervals and finite value sets, X subset of R^n.
class ParameterSpace {
 public:
  ParameterSpace() = default;
  explicit ParameterSpace(std::vector<Axis> axes);

  std::size_t dimension() const noexcept { return axes_.size(); }
  const std::vector<Axis>& axes() const noexcept { return axes_; }
  const Axis& operator[](std::size_t i) const { return axes_[i]; }

  /// Throws OutOfSpaceError naming the first violating axis.
  void require_contains(std::span<const double> x) const;
  bool contains(std::span<const double> x) const;
  /// True when every axis is discrete (X is finite).
  bool finite() const noexcept;
  /// All points of a finite space in axis-lexicographic order.
  std::vector<std::vector<double>> points() const;

 private:
  std::vector<Axis> axes_;
};

/// x -> (S0(x), Phi(x)).
struct Binding {
  Scene start;
  ModelFamily family;
};
using Binder = std::function<Binding(std::span<const double> x)>;

/// Map from a parameter space to concrete scenarios on a fixed grid.
class LogicalScenario {
 public:
  LogicalScenario(std::string name, ParameterSpace space, Binder binder, TimeGrid grid);

  const std::string& name() const noexcept { return name_; }
  const ParameterSpace& space() const noexcept { return space_; }
  const TimeGrid& grid() const noexcept { return grid_; }
  /// Schema of the scenes produced by the binder (probed at construction).
  const SchemaPtr& schema() const noexcept { return schema_; }

  Binding bind(std::span<const double> x) const;

 private:
  std::string name_;
  ParameterSpace space_;
  Binder binder_;
  TimeGrid grid_;
  SchemaPtr schema_;
};

/// evaluate(binder(x)); OutOfSpaceError when x is outside the space.
Trajectory realize(const LogicalScenario& scenario, std::span<const double> x);

struct UniformMarginal {};
struct TruncatedNormalMarginal {
  double mu = 0.0;
  double sigma = 1.0;
};
struct DiscreteWeightedMarginal {
  std::vector<double> weights;
};
using Marginal = std::variant<UniformMarginal, TruncatedNormalMarginal, DiscreteWeightedMarginal>;

/// Independent per-axis marginals; uniform on axes without an entry.
class ParameterDistribution {
 public:
  ParameterDistribution() = default;
  explicit ParameterDistribution(std::vector<Marginal> marginals);

  const std::vector<Marginal>& marginals() const noexcept { return marginals_; }
  /// Throws ValueError when a marginal does not fit its axis.
  void validate(const ParameterSpace& space) const;

  /// Draws one parameter vector using uniforms from `next_uniform` in [0, 1).
  std::vector<double> draw(const ParameterSpace& space, const std::function<double()>& next_uniform) const;

 private:
  std::vector<Marginal> marginals_;
};

struct LogicalSample {
  std::vector<double> x;
  Trajectory trajectory;
};

/// Count i.i.d. draws x_j ~ dist, each realized. Draw j uses its own generator
/// derived from (seed, j), so results do not depend on `workers`.
std::vector<LogicalSample> sample(const LogicalScenario& scenario, const ParameterDistribution& dist,
                                  std::size_t count, std::uint64_t seed, std::size_t workers = 1);

/// Only the parameter draws, without realizing trajectories.
std::vector<std::vector<double>> sample_parameters(const ParameterSpace& space, const ParameterDistribution& dist,
                                                   std::size_t count, std::uint64_t seed);

struct InvertOptions {
  std::size_t grid_points = 16;
  double shrink = 0.5;
  /// Permit more than kMaxInvertAxes axes.
  bool force = false;
};

inline constexpr std::size_t kMaxInvertAxes = 6;

struct InversionResult {
  bool found = false;
  std::vector<double> x;
  double residual = 0.0;
  std::size_t evaluations = 0;
};

/// Searches x minimizing trajectory_distance(realize(L, x), C): grid scan,
/// then coordinate pattern search on continuous axes. found iff the best
/// residual is <= tol.
InversionResult invert(const LogicalScenario& scenario, const Trajectory& observed, double tol,
                       const InvertOptions& options = {});

struct RegistryInversion {
  /// Index into the registry of the first scenario reproducing the trace.
  std::optional<std::size_t> scenario;
  InversionResult result;
};

/// Unknown-model case: tries each logical scenario of a registry in order.
RegistryInversion invert_any(std::span<const LogicalScenario> registry, const Trajectory& observed, double tol,
                             const InvertOptions& options = {});

}  // namespace scn
