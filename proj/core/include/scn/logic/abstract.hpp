#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scn/logic/formula.hpp"
#include "scn/logic/instance.hpp"

namespace scn {

/// Constraint formula plus world-model formulas over one logic instance.
/// Membership always uses the conjunction of both.
class AbstractScenario {
 public:
  AbstractScenario(Formula constraint, std::vector<Formula> world, InstancePtr instance);

  const Formula& constraint() const noexcept { return constraint_; }
  const std::vector<Formula>& world() const noexcept { return world_; }
  const InstancePtr& instance() const noexcept { return instance_; }
  /// constraint and every world formula.
  const Formula& formula() const noexcept { return formula_; }
  /// Conjunction of the world formulas (true when there are none).
  const Formula& world_formula() const noexcept { return world_formula_; }

 private:
  Formula constraint_;
  std::vector<Formula> world_;
  InstancePtr instance_;
  Formula formula_;
  Formula world_formula_;
};

/// A node of the branching tree: a history and the obligation left for its
/// continuation.
struct Node {
  Trajectory trajectory;
  Formula residual;
};

Formula residual_of(const Formula& f, const Trajectory& c);

/// Root node of a formula on an instance (the empty history).
Node root_node(const LogicInstance& instance, const Formula& f);

/// Children of `node` that the formula does not rule out.
std::vector<Node> viable_children(const LogicInstance& instance, const Node& node);

/// The branching semantics over `steps` grid steps: {C} for 0 steps, else the
/// iterated one-step expansion. Sorted canonically, duplicate-free.
std::vector<Trajectory> expand(const LogicInstance& instance, const Formula& f, const Trajectory& c,
                               std::size_t steps);
std::vector<Trajectory> expand(const AbstractScenario& a, const Trajectory& c, std::size_t steps);

struct EnumerateOptions {
  /// Refuse when the estimated leaf count exceeds this, unless forced.
  double max_leaves = 1e7;
  bool force = false;
  std::size_t node_budget = 100'000'000;
};

/// Leaf estimate: product of the viable branching factors along the first
/// viable path.
double estimate_leaves(const LogicInstance& instance, const Formula& f);

/// All horizon-length scenarios of the formula, in canonical order.
std::vector<Trajectory> enumerate(const LogicInstance& instance, const Formula& f, const EnumerateOptions& options = {});
std::vector<Trajectory> enumerate(const AbstractScenario& a, const EnumerateOptions& options = {});

/// Result of following one trajectory through the branching tree.
struct PathCheck {
  bool accepted = false;
  /// Index of the first sample that left the tree or falsified the formula.
  std::optional<std::size_t> violation;
  std::string reason;
  Formula residual = Formula::truth();
};

/// Follows C's own path: every sample must be a successor of its history and
/// keep the residual satisfiable; a full-length C is accepted when its final
/// residual holds. Shorter traces are never accepted.
PathCheck follow_path(const LogicInstance& instance, const Formula& f, const Trajectory& c);
bool accepts_bounded(const LogicInstance& instance, const Formula& f, const Trajectory& c);

/// Conjunction of next-chained scene constants pinning every sample of C.
Formula trace_formula(const Trajectory& c);

struct AxiomCounterexample {
  std::string axiom;
  std::string formula;
  Trajectory prefix;
  std::size_t t1 = 0;
  std::size_t t2 = 0;
  std::string detail;
};

struct AxiomReport {
  std::size_t probes = 0;
  std::size_t identity_failures = 0;
  std::size_t composition_failures = 0;
  std::size_t prefix_failures = 0;
  std::size_t conjunction_failures = 0;
  /// First few counterexamples.
  std::vector<AxiomCounterexample> counterexamples;

  std::size_t failures() const noexcept {
    return identity_failures + composition_failures + prefix_failures + conjunction_failures;
  }
  bool passes() const noexcept { return failures() == 0; }
};

struct AxiomOptions {
  std::uint64_t seed = 1;
  /// Upper bound on the number of leaves of one probed expansion.
  double expansion_budget = 256;
  std::size_t max_counterexamples = 8;
};

/// Randomized check of identity, composition, prefix and conjunction on
/// prefixes drawn by random walks through the instance's tree.
AxiomReport check_axioms(const LogicInstance& instance, std::span<const Formula> formulas, std::size_t probes,
                         const AxiomOptions& options = {});

enum class SampleStrategy { UniformLeaf, UniformBranch, Rejection };
std::string_view to_string(SampleStrategy s);
std::optional<SampleStrategy> parse_strategy(std::string_view text);

struct AbstractSampleOptions {
  /// Random walks per draw for uniform-branch and rejection.
  std::size_t max_attempts = 10'000;
  std::size_t node_budget = 10'000'000;
};

struct AbstractSampleResult {
  std::vector<Trajectory> samples;
  std::size_t attempts = 0;
  /// accepted / attempts (1 for uniform-leaf).
  double acceptance_rate = 1.0;
};

/// Draws `count` scenarios of A. Draw j uses a generator derived from
/// (seed, j). uniform-branch is biased towards paths with little branching.
AbstractSampleResult sample_abstract(const AbstractScenario& a, std::size_t count, SampleStrategy strategy,
                                     std::uint64_t seed, const AbstractSampleOptions& options = {});

/// Number of accepted leaves below the root (exact below 2^53).
double count_scenarios(const AbstractScenario& a, std::size_t node_budget = 10'000'000);

/// True when every reachable node has at most one viable child.
bool is_deterministic(const AbstractScenario& a, std::size_t node_budget = 1'000'000);

}  // namespace scn
