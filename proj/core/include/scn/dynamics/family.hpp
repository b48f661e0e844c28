#pragma once

#include <optional>
#include <vector>

#include "scn/core/trajectory.hpp"
#include "scn/dynamics/model.hpp"
#include "scn/error.hpp"

namespace scn {

/// Threshold above which two members disagree on a shared dimension.
inline constexpr double kContradictionThreshold = 1e-6;

/// A finite family of deterministic models understood as one model. Each
/// member writes its owned dimensions; dimensions listed as shared may be
/// written by several members, which then have to agree.
class ModelFamily {
 public:
  const std::vector<DeterministicModel>& members() const noexcept { return members_; }
  const SchemaPtr& schema() const noexcept { return members_.front().schema(); }
  double epsilon() const noexcept { return epsilon_; }
  const std::vector<std::size_t>& shared() const noexcept { return shared_; }
  /// Intersection of the member time domains.
  double theta_max() const noexcept;

  struct Step {
    std::vector<double> values;
    /// First shared dimension where members disagree, if any.
    std::optional<std::size_t> contradiction;
  };
  Step evolve(double theta, std::span<const double> start) const;

 private:
  friend ModelFamily combine(std::vector<DeterministicModel>, double, std::vector<std::size_t>);
  ModelFamily() = default;

  std::vector<DeterministicModel> members_;
  double epsilon_ = 0.0;
  std::vector<std::size_t> shared_;
  /// owner_[d]: index of the member writing d (first writer for shared).
  std::vector<std::optional<std::size_t>> owner_;
};

/// Throws SchemaError on mixed schemas, OwnershipError when two members write
/// the same non-shared dimension, ValueError on an empty list or epsilon <= 0.
ModelFamily combine(std::vector<DeterministicModel> members, double epsilon = kDefaultStep,
                    std::vector<std::size_t> shared = {});

/// Starting scene plus model family evaluated on a requested grid.
struct AttributeLevelScenario {
  Scene start;
  ModelFamily family;
  TimeGrid grid;
};

struct EvaluationResult {
  Trajectory trajectory;
  bool truncated = false;
  /// Grid time of the first member contradiction, when one occurred.
  std::optional<double> contradiction_time;
  /// Supremum of the realized time domain.
  double t_sup = 0.0;
};

/// Raised when members contradict each other before the end of the grid.
class TruncatedResult : public Error {
 public:
  TruncatedResult(const std::string& message, Trajectory truncated, double contradiction_time)
      : Error("TruncatedResult", message), trajectory_(std::move(truncated)), time_(contradiction_time) {}

  const Trajectory& trajectory() const noexcept { return trajectory_; }
  double contradiction_time() const noexcept { return time_; }

 private:
  Trajectory trajectory_;
  double time_;
};

struct EvaluateOptions {
  /// Return truncated trajectories instead of raising DomainExceededError or
  /// TruncatedResult.
  bool allow_truncation = false;
};

EvaluationResult evaluate_detailed(const AttributeLevelScenario& scenario, const EvaluateOptions& options = {});
/// samples[i] = Phi(t_i, start); raises on domain overrun or contradiction.
Trajectory evaluate(const AttributeLevelScenario& scenario);

}  // namespace scn
