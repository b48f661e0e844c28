#include "scn/dynamics/family.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace scn {

ModelFamily combine(std::vector<DeterministicModel> members, double epsilon, std::vector<std::size_t> shared) {
  if (members.empty()) throw ValueError("a model family needs at least one member");
  if (!(epsilon > 0.0)) throw ValueError(fmt::format("contradiction epsilon must be > 0, got {}", epsilon));
  const auto& schema = members.front().schema();
  for (const auto& m : members) require_same_schema(schema, m.schema());
  std::sort(shared.begin(), shared.end());
  shared.erase(std::unique(shared.begin(), shared.end()), shared.end());
  for (auto d : shared) {
    if (d >= schema->size()) throw SchemaError(fmt::format("shared dimension {} outside schema", d));
  }

  ModelFamily family;
  family.owner_.assign(schema->size(), std::nullopt);
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (auto d : members[i].writes()) {
      if (family.owner_[d] && !std::binary_search(shared.begin(), shared.end(), d)) {
        throw OwnershipError(fmt::format("dimension '{}' is written by '{}' and '{}' without a shared declaration",
                                         (*schema)[d].name, members[*family.owner_[d]].id(), members[i].id()));
      }
      if (!family.owner_[d]) family.owner_[d] = i;
    }
  }
  family.members_ = std::move(members);
  family.epsilon_ = epsilon;
  family.shared_ = std::move(shared);
  return family;
}

double ModelFamily::theta_max() const noexcept {
  double t = kUnbounded;
  for (const auto& m : members_) t = std::min(t, m.theta_max());
  return t;
}

ModelFamily::Step ModelFamily::evolve(double theta, std::span<const double> start) const {
  Step step{std::vector<double>(start.begin(), start.end()), std::nullopt};
  if (members_.size() == 1) {
    const auto out = members_.front().evolve_values(theta, start);
    for (auto d : members_.front().writes()) step.values[d] = out[d];
    return step;
  }
  std::vector<std::vector<double>> outs;
  outs.reserve(members_.size());
  for (const auto& m : members_) outs.push_back(m.evolve_values(theta, start));
  for (std::size_t d = 0; d < owner_.size(); ++d) {
    if (owner_[d]) step.values[d] = outs[*owner_[d]][d];
  }
  for (auto d : shared_) {
    if (!owner_[d]) continue;
    const double reference = outs[*owner_[d]][d];
    for (std::size_t i = 0; i < members_.size(); ++i) {
      const auto& w = members_[i].writes();
      if (!std::binary_search(w.begin(), w.end(), d)) continue;
      if (std::abs(outs[i][d] - reference) > kContradictionThreshold) {
        if (!step.contradiction) step.contradiction = d;
      }
    }
  }
  return step;
}

EvaluationResult evaluate_detailed(const AttributeLevelScenario& scenario, const EvaluateOptions& options) {
  const auto& family = scenario.family;
  require_same_schema(family.schema(), scenario.start.schema());
  TimeGrid grid = scenario.grid;
  const double theta_max = family.theta_max();
  bool truncated = false;
  if (grid.duration() > theta_max * (1.0 + 1e-12)) {
    if (!options.allow_truncation) {
      throw DomainExceededError(
          fmt::format("requested grid ends at {} but the family is defined up to t_sup = {}", grid.duration(), theta_max),
          theta_max);
    }
    grid = grid.with_count(static_cast<std::size_t>(std::floor(theta_max / grid.step() + kGridAlignmentTolerance)) + 1);
    truncated = true;
  }

  const std::size_t k = family.schema()->size();
  std::vector<double> data;
  data.reserve(grid.count() * k);
  std::optional<double> contradiction;
  std::size_t kept = grid.count();
  for (std::size_t i = 0; i < grid.count(); ++i) {
    const double t = grid.time(i);
    auto step = family.evolve(t, scenario.start.values());
    if (i > 0 && step.contradiction) {
      contradiction = t;
      const double end = t - family.epsilon();
      const double last = std::floor(end / grid.step() + kGridAlignmentTolerance);
      kept = end < 0.0 ? 1 : std::min(i, static_cast<std::size_t>(last) + 1);
      break;
    }
    data.insert(data.end(), step.values.begin(), step.values.end());
  }
  data.resize(kept * k);
  Trajectory trajectory(family.schema(), grid.with_count(kept), std::move(data));
  EvaluationResult result{std::move(trajectory), truncated || contradiction.has_value(), contradiction,
                          contradiction ? *contradiction - family.epsilon() : std::min(theta_max, grid.duration())};
  if (contradiction && !options.allow_truncation) {
    const double t_c = *contradiction;
    throw TruncatedResult(fmt::format("members contradict at t = {}; domain truncated to [0, {}]", t_c,
                                      result.trajectory.duration()),
                          std::move(result.trajectory), t_c);
  }
  return result;
}

Trajectory evaluate(const AttributeLevelScenario& scenario) { return evaluate_detailed(scenario).trajectory; }

}  // namespace scn
