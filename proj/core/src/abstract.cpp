#include "scn/logic/abstract.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <fmt/format.h>

#include "scn/error.hpp"
#include "scn/util/random.hpp"
#include "tree_memo.hpp"

namespace scn {

AbstractScenario::AbstractScenario(Formula constraint, std::vector<Formula> world, InstancePtr instance)
    : constraint_(std::move(constraint)),
      world_(std::move(world)),
      instance_(std::move(instance)),
      formula_(constraint_),
      world_formula_(Formula::conj_all(world_)) {
  if (!instance_) throw ValueError("abstract scenario without logic instance");
  require_formula_schema(constraint_, instance_->schema());
  for (const auto& w : world_) require_formula_schema(w, instance_->schema());
  if (!world_.empty()) formula_ = Formula::conj(constraint_, world_formula_);
}

Formula residual_of(const Formula& f, const Trajectory& c) {
  Formula r = f;
  for (std::size_t i = 0; i < c.count(); ++i) {
    if (r.is_true() || r.is_false()) break;
    r = progress(r, c.values(i));
  }
  return r;
}

Node root_node(const LogicInstance& instance, const Formula& f) { return {instance.root(), f}; }

std::vector<Node> viable_children(const LogicInstance& instance, const Node& node) {
  std::vector<Node> out;
  if (node.residual.is_false()) return out;
  const std::size_t horizon = instance.horizon();
  for (auto& child : instance.branch(node.trajectory)) {
    Formula r = progress(node.residual, child.values(child.count() - 1));
    if (residual_verdict(r, child.count(), horizon) == Verdict3::False3) continue;
    out.push_back({std::move(child), std::move(r)});
  }
  return out;
}

namespace {

void canonicalize(std::vector<Trajectory>& v) {
  std::sort(v.begin(), v.end(), [](const Trajectory& a, const Trajectory& b) { return a < b; });
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

void require_within_horizon(const LogicInstance& instance, const Trajectory& c, std::size_t steps) {
  if (c.count() + steps > instance.horizon()) {
    throw HorizonError(fmt::format("expanding {} samples by {} steps passes the horizon of {} samples", c.count(),
                                   steps, instance.horizon()));
  }
}

}  // namespace

std::vector<Trajectory> expand(const LogicInstance& instance, const Formula& f, const Trajectory& c,
                               std::size_t steps) {
  instance.require_compatible(c);
  require_within_horizon(instance, c, steps);
  if (steps == 0) return {c};
  std::vector<Node> level{{c, residual_of(f, c)}};
  for (std::size_t s = 0; s < steps && !level.empty(); ++s) {
    std::vector<Node> next;
    for (const auto& node : level) {
      for (auto& child : viable_children(instance, node)) next.push_back(std::move(child));
    }
    level = std::move(next);
  }
  std::vector<Trajectory> out;
  out.reserve(level.size());
  for (auto& n : level) out.push_back(std::move(n.trajectory));
  canonicalize(out);
  return out;
}

std::vector<Trajectory> expand(const AbstractScenario& a, const Trajectory& c, std::size_t steps) {
  return expand(*a.instance(), a.formula(), c, steps);
}

double estimate_leaves(const LogicInstance& instance, const Formula& f) {
  Node node = root_node(instance, f);
  double estimate = 1.0;
  while (node.trajectory.count() < instance.horizon()) {
    auto children = viable_children(instance, node);
    if (children.empty()) break;
    estimate *= static_cast<double>(children.size());
    node = std::move(children.front());
  }
  return estimate;
}

std::vector<Trajectory> enumerate(const LogicInstance& instance, const Formula& f, const EnumerateOptions& options) {
  if (!options.force) {
    const double estimate = estimate_leaves(instance, f);
    if (estimate > options.max_leaves) {
      throw ComplexityError(fmt::format("estimated {:.3g} leaves exceed the enumeration limit of {:.3g}", estimate,
                                        options.max_leaves));
    }
  }
  const std::size_t horizon = instance.horizon();
  std::vector<Trajectory> leaves;
  std::vector<Node> stack{root_node(instance, f)};
  std::size_t visited = 0;
  while (!stack.empty()) {
    Node node = std::move(stack.back());
    stack.pop_back();
    if (++visited > options.node_budget) {
      throw ComplexityError(fmt::format("enumeration visited more than {} nodes", options.node_budget));
    }
    if (node.trajectory.count() == horizon) {
      leaves.push_back(std::move(node.trajectory));
      continue;
    }
    auto children = viable_children(instance, node);
    for (auto it = children.rbegin(); it != children.rend(); ++it) stack.push_back(std::move(*it));
  }
  canonicalize(leaves);
  return leaves;
}

std::vector<Trajectory> enumerate(const AbstractScenario& a, const EnumerateOptions& options) {
  return enumerate(*a.instance(), a.formula(), options);
}

PathCheck follow_path(const LogicInstance& instance, const Formula& f, const Trajectory& c) {
  instance.require_compatible(c);
  const std::size_t horizon = instance.horizon();
  PathCheck check;
  check.residual = f;
  for (std::size_t i = 0; i < c.count(); ++i) {
    if (i >= horizon) {
      check.violation = i;
      check.reason = fmt::format("sample {} lies beyond the horizon of {} samples", i, horizon);
      return check;
    }
    if (!instance.is_successor_step(c, i)) {
      check.violation = i;
      check.reason = i == 0 ? std::string("starting scene is not a start scene of the logic")
                            : fmt::format("sample {} is not a successor of its history", i);
      return check;
    }
    if (!check.residual.is_true()) check.residual = progress(check.residual, c.values(i));
    if (residual_verdict(check.residual, i + 1, horizon) == Verdict3::False3) {
      check.violation = i;
      check.reason = i + 1 == horizon ? std::string("formula not satisfied at the end of the scenario")
                                      : fmt::format("formula violated at sample {}", i);
      return check;
    }
  }
  if (c.count() != horizon) {
    check.reason = fmt::format("trace has {} samples, the horizon is {}", c.count(), horizon);
    return check;
  }
  check.accepted = true;
  return check;
}

bool accepts_bounded(const LogicInstance& instance, const Formula& f, const Trajectory& c) {
  return follow_path(instance, f, c).accepted;
}

Formula trace_formula(const Trajectory& c) {
  if (c.is_empty()) return Formula::truth();
  Formula f = Formula::scene(c.sample(c.count() - 1));
  for (std::size_t i = c.count() - 1; i-- > 0;) f = Formula::conj(Formula::scene(c.sample(i)), Formula::next(f));
  return f;
}

AxiomReport check_axioms(const LogicInstance& instance, std::span<const Formula> formulas, std::size_t probes,
                         const AxiomOptions& options) {
  if (probes == 0) throw ValueError("check_axioms needs probes >= 1");
  if (formulas.empty()) throw ValueError("check_axioms needs at least one formula");
  const std::size_t horizon = instance.horizon();
  AxiomReport report;
  report.probes = probes;

  for (std::size_t probe = 0; probe < probes; ++probe) {
    Rng rng(derive_seed(options.seed, probe));
    const Formula& f = formulas[rng.below(formulas.size())];
    const Formula& g = formulas[rng.below(formulas.size())];

    Trajectory c = instance.root();
    const std::size_t length = rng.below(horizon + 1);
    while (c.count() < length) {
      auto children = instance.branch(c);
      if (children.empty()) break;
      c = std::move(children[rng.below(children.size())]);
    }

    const double fanout = std::max<double>(2.0, static_cast<double>(instance.successors(c).size()));
    const auto affordable = static_cast<std::size_t>(std::floor(std::log(options.expansion_budget) / std::log(fanout)));
    const std::size_t total = rng.below(std::min(horizon - c.count(), affordable) + 1);
    const std::size_t t1 = rng.below(total + 1);
    const std::size_t t2 = total - t1;

    auto fail = [&](std::size_t& counter, std::string axiom, const Formula& which, std::string detail) {
      ++counter;
      if (report.counterexamples.size() < options.max_counterexamples) {
        report.counterexamples.push_back({std::move(axiom), to_string(which), c, t1, t2, std::move(detail)});
      }
    };

    const auto zero = expand(instance, f, c, 0);
    if (zero.size() != 1 || !(zero.front() == c)) fail(report.identity_failures, "identity", f, "expand(C, 0) != {C}");

    const auto full = expand(instance, f, c, total);
    std::vector<Trajectory> composed;
    for (const auto& mid : expand(instance, f, c, t1)) {
      for (auto& leaf : expand(instance, f, mid, t2)) composed.push_back(std::move(leaf));
    }
    canonicalize(composed);
    if (composed != full) {
      fail(report.composition_failures, "composition", f,
           fmt::format("|expand(C, t1+t2)| = {}, |union| = {}", full.size(), composed.size()));
    }

    for (const auto& ext : full) {
      if (ext.count() != c.count() + total || !is_prefix(c, ext)) {
        fail(report.prefix_failures, "prefix", f, "an expansion does not extend C");
        break;
      }
    }

    const auto with_g = expand(instance, g, c, total);
    const auto both = expand(instance, Formula::conj(f, g), c, total);
    std::vector<Trajectory> intersection;
    std::set_intersection(full.begin(), full.end(), with_g.begin(), with_g.end(), std::back_inserter(intersection),
                          [](const Trajectory& a, const Trajectory& b) { return a < b; });
    if (both != intersection || both.size() > std::min(full.size(), with_g.size())) {
      fail(report.conjunction_failures, "conjunction", Formula::conj(f, g),
           fmt::format("|expand(f and g)| = {}, |intersection| = {}", both.size(), intersection.size()));
    }
  }
  return report;
}

std::string_view to_string(SampleStrategy s) {
  switch (s) {
    case SampleStrategy::UniformLeaf: return "uniform-leaf";
    case SampleStrategy::UniformBranch: return "uniform-branch";
    case SampleStrategy::Rejection: return "rejection";
  }
  return "?";
}

std::optional<SampleStrategy> parse_strategy(std::string_view text) {
  if (text == "uniform-leaf") return SampleStrategy::UniformLeaf;
  if (text == "uniform-branch") return SampleStrategy::UniformBranch;
  if (text == "rejection") return SampleStrategy::Rejection;
  return std::nullopt;
}

namespace {

/// Memoized count of accepted leaves below a node.
class LeafCounter {
 public:
  LeafCounter(const LogicInstance& instance, std::size_t budget) : instance_(instance), budget_(budget) {}

  double count(const Node& node) {
    if (node.residual.is_false()) return 0.0;
    if (node.trajectory.count() == instance_.horizon()) {
      return residual_verdict(node.residual, node.trajectory.count(), instance_.horizon()) == Verdict3::True3 ? 1.0
                                                                                                              : 0.0;
    }
    auto key = detail::key_of(instance_, node);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    if (++visited_ > budget_) throw ComplexityError(fmt::format("leaf counting visited more than {} nodes", budget_));
    double total = 0.0;
    for (const auto& child : viable_children(instance_, node)) total += count(child);
    memo_.emplace(std::move(key), total);
    return total;
  }

 private:
  const LogicInstance& instance_;
  std::size_t budget_;
  std::size_t visited_ = 0;
  detail::StateMemo<double> memo_;
};

bool has_accepting(const LogicInstance& instance, const Formula& f, std::size_t budget) {
  detail::StateMemo<bool> dead;
  std::size_t visited = 0;
  std::function<bool(const Node&)> search = [&](const Node& node) -> bool {
    if (node.trajectory.count() == instance.horizon()) return true;
    auto key = detail::key_of(instance, node);
    if (dead.contains(key)) return false;
    if (++visited > budget) throw ComplexityError("satisfiability search exceeded its node budget");
    for (const auto& child : viable_children(instance, node)) {
      if (search(child)) return true;
    }
    dead.emplace(std::move(key), true);
    return false;
  };
  return search(root_node(instance, f));
}

[[noreturn]] void exhausted(const AbstractScenario& a, std::size_t attempts, std::size_t accepted,
                            std::size_t budget) {
  bool satisfiable = true;
  try {
    satisfiable = has_accepting(*a.instance(), a.formula(), budget);
  } catch (const ComplexityError&) {
  }
  if (!satisfiable) throw Unsatisfiable("the abstract scenario has no concrete scenario");
  const double rate = attempts == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(attempts);
  throw RejectionBudgetError(fmt::format("no accepted scenario within {} attempts", attempts), rate);
}

}  // namespace

AbstractSampleResult sample_abstract(const AbstractScenario& a, std::size_t count, SampleStrategy strategy,
                                     std::uint64_t seed, const AbstractSampleOptions& options) {
  if (count == 0) throw ValueError("sample count must be >= 1");
  const auto& instance = *a.instance();
  const std::size_t horizon = instance.horizon();
  if (a.formula().is_false()) throw Unsatisfiable("the constraint formula is false");
  AbstractSampleResult result;
  result.samples.reserve(count);

  if (strategy == SampleStrategy::UniformLeaf) {
    LeafCounter counter(instance, options.node_budget);
    const Node root = root_node(instance, a.formula());
    if (counter.count(root) == 0.0) throw Unsatisfiable("the abstract scenario has no concrete scenario");
    for (std::size_t j = 0; j < count; ++j) {
      Rng rng(derive_seed(seed, j));
      Node node = root;
      while (node.trajectory.count() < horizon) {
        auto children = viable_children(instance, node);
        std::vector<double> weights;
        double total = 0.0;
        for (const auto& child : children) {
          weights.push_back(counter.count(child));
          total += weights.back();
        }
        const double u = rng.uniform() * total;
        double cumulative = 0.0;
        std::size_t pick = children.size();
        for (std::size_t i = 0; i < children.size(); ++i) {
          if (weights[i] == 0.0) continue;
          pick = i;
          cumulative += weights[i];
          if (u < cumulative) break;
        }
        node = std::move(children[pick]);
      }
      result.samples.push_back(std::move(node.trajectory));
    }
    result.attempts = count;
    return result;
  }

  std::size_t accepted = 0;
  for (std::size_t j = 0; j < count; ++j) {
    Rng rng(derive_seed(seed, j));
    bool done = false;
    for (std::size_t attempt = 0; attempt < options.max_attempts && !done; ++attempt) {
      ++result.attempts;
      const Formula& guide = strategy == SampleStrategy::Rejection ? a.world_formula() : a.formula();
      Node node = root_node(instance, guide);
      Formula full = a.formula();
      while (node.trajectory.count() < horizon) {
        auto children = viable_children(instance, node);
        if (children.empty()) break;
        node = std::move(children[rng.below(children.size())]);
        if (strategy == SampleStrategy::Rejection && !full.is_false()) {
          full = progress(full, node.trajectory.values(node.trajectory.count() - 1));
        }
      }
      if (node.trajectory.count() < horizon) continue;
      if (strategy == SampleStrategy::Rejection &&
          residual_verdict(full, node.trajectory.count(), horizon) != Verdict3::True3) {
        continue;
      }
      ++accepted;
      result.samples.push_back(std::move(node.trajectory));
      done = true;
    }
    if (!done) exhausted(a, result.attempts, accepted, options.node_budget);
  }
  result.acceptance_rate = static_cast<double>(accepted) / static_cast<double>(result.attempts);
  return result;
}

double count_scenarios(const AbstractScenario& a, std::size_t node_budget) {
  LeafCounter counter(*a.instance(), node_budget);
  return counter.count(root_node(*a.instance(), a.formula()));
}

bool is_deterministic(const AbstractScenario& a, std::size_t node_budget) {
  const auto& instance = *a.instance();
  std::vector<Node> stack{root_node(instance, a.formula())};
  std::size_t visited = 0;
  while (!stack.empty()) {
    Node node = std::move(stack.back());
    stack.pop_back();
    if (++visited > node_budget) throw ComplexityError("determinism check exceeded its node budget");
    auto children = viable_children(instance, node);
    if (children.size() > 1) return false;
    for (auto& child : children) stack.push_back(std::move(child));
  }
  return true;
}

}  // namespace scn
