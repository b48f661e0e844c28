#include "scn/logic/instance.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include <fmt/format.h>

#include "scn/error.hpp"
#include "scn/logical/logical_scenario.hpp"

namespace scn {

namespace {

bool bit_equal(std::span<const double> a, std::span<const double> b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end(), [](double x, double y) {
    return std::bit_cast<std::uint64_t>(x) == std::bit_cast<std::uint64_t>(y);
  });
}

void push_unique(std::vector<std::vector<double>>& out, std::span<const double> v) {
  for (const auto& o : out) {
    if (bit_equal(o, v)) return;
  }
  out.emplace_back(v.begin(), v.end());
}

}  // namespace

bool LogicInstance::is_successor(const Trajectory& prefix, std::span<const double> next) const {
  for (const auto& s : successors(prefix)) {
    if (scenes_match(next, s, kSuccessorTolerance)) return true;
  }
  return false;
}

bool LogicInstance::is_successor_step(const Trajectory& c, std::size_t i) const {
  return is_successor(prefix_count(c, i), c.values(i));
}

std::vector<Trajectory> LogicInstance::branch(const Trajectory& prefix) const {
  std::vector<Trajectory> out;
  for (const auto& s : successors(prefix)) out.push_back(extend_values(prefix, s));
  return out;
}

void LogicInstance::require_compatible(const Trajectory& c) const {
  require_same_schema(schema(), c.schema());
  if (!same_step(c.step(), step())) {
    throw GridAlignmentError(fmt::format("trace step {} differs from instance step {}", c.step(), step()));
  }
}

namespace {

class BinaryLogic : public LogicInstance {
 public:
  explicit BinaryLogic(std::size_t n) : n_(n), schema_(make_schema({{"bit", Unit::EnumCode}})) {
    if (n == 0) throw ValueError("binary logic needs n >= 1");
  }

  std::string id() const override { return fmt::format("bin({})", n_); }
  const SchemaPtr& schema() const override { return schema_; }
  double step() const override { return 1.0; }
  std::size_t horizon() const override { return n_; }
  bool markov() const override { return true; }

  std::vector<std::vector<double>> successors(const Trajectory& prefix) const override {
    if (prefix.count() >= n_) return {};
    return {{0.0}, {1.0}};
  }

  bool is_successor(const Trajectory& prefix, std::span<const double> next) const override {
    return prefix.count() < n_ && next.size() == 1 && (next[0] == 0.0 || next[0] == 1.0);
  }

  bool is_successor_step(const Trajectory& c, std::size_t i) const override {
    return i < n_ && (c.values(i)[0] == 0.0 || c.values(i)[0] == 1.0);
  }

 private:
  std::size_t n_;
  SchemaPtr schema_;
};

class EncodingLogic : public LogicInstance {
 public:
  explicit EncodingLogic(const LogicalScenario& scenario)
      : id_(fmt::format("enc({})", scenario.name())),
        schema_(scenario.schema()),
        step_(scenario.grid().step()),
        horizon_(scenario.grid().count()) {
    for (const auto& x : scenario.space().points()) realized_.push_back(realize(scenario, x));
  }

  std::string id() const override { return id_; }
  const SchemaPtr& schema() const override { return schema_; }
  double step() const override { return step_; }
  std::size_t horizon() const override { return horizon_; }

  std::vector<std::vector<double>> successors(const Trajectory& prefix) const override {
    std::vector<std::vector<double>> out;
    const std::size_t k = prefix.count();
    if (k >= horizon_) return out;
    const std::size_t w = schema_->size();
    for (const auto& r : realized_) {
      if (r.count() <= k) continue;
      if (!bit_equal(prefix.flat(), r.flat().subspan(0, k * w))) continue;
      push_unique(out, r.values(k));
    }
    return out;
  }

 private:
  std::string id_;
  SchemaPtr schema_;
  double step_;
  std::size_t horizon_;
  std::vector<Trajectory> realized_;
};

class PrefixMutant : public LogicInstance {
 public:
  explicit PrefixMutant(InstancePtr base) : base_(std::move(base)) {}

  std::string id() const override { return "mutant(" + base_->id() + ")"; }
  const SchemaPtr& schema() const override { return base_->schema(); }
  double step() const override { return base_->step(); }
  std::size_t horizon() const override { return base_->horizon(); }
  std::vector<std::vector<double>> successors(const Trajectory& prefix) const override {
    return base_->successors(prefix);
  }
  bool is_successor(const Trajectory& prefix, std::span<const double> next) const override {
    return base_->is_successor(prefix, next);
  }
  bool is_successor_step(const Trajectory& c, std::size_t i) const override { return base_->is_successor_step(c, i); }
  bool markov() const override { return base_->markov(); }

  std::vector<Trajectory> branch(const Trajectory& prefix) const override {
    auto children = base_->branch(prefix);
    for (auto& child : children) {
      if (child.count() < 2) continue;
      std::vector<double> data(child.flat().begin(), child.flat().end());
      data[0] += 1.0;
      child = Trajectory(child.schema(), child.grid(), std::move(data));
    }
    return children;
  }

 private:
  InstancePtr base_;
};

}  // namespace

InstancePtr make_binary_instance(std::size_t n) { return std::make_shared<BinaryLogic>(n); }

InstancePtr make_encoding_instance(const LogicalScenario& scenario) {
  if (!scenario.space().finite()) throw ValueError("the encoding logic needs a finite parameter space");
  return std::make_shared<EncodingLogic>(scenario);
}

InstancePtr make_prefix_mutant(InstancePtr base) { return std::make_shared<PrefixMutant>(std::move(base)); }

StepLogic::StepLogic(StepLogicConfig config) : config_(std::move(config)) {
  if (!config_.schema) throw SchemaError("step logic without schema");
  if (!(config_.step > 0.0)) throw ValueError("step logic needs step > 0");
  if (config_.horizon == 0) throw ValueError("step logic needs horizon >= 1");
  const std::size_t k = config_.schema->size();
  owned_.assign(k, false);
  for (const auto& a : config_.actors) {
    for (auto d : {a.x, a.y, a.vx, a.vy}) {
      if (d >= k) throw SchemaError(fmt::format("actor '{}' refers to a dimension outside the schema", a.name));
      if (owned_[d]) throw OwnershipError(fmt::format("dimension '{}' is owned by two actors", (*config_.schema)[d].name));
      owned_[d] = true;
    }
    if (a.ax.empty() || a.ay.empty() || a.lane.empty()) {
      throw ValueError(fmt::format("actor '{}' has an empty action set", a.name));
    }
  }
  if (config_.start) {
    if (config_.start->empty()) throw ValueError("step logic start set is empty");
    for (const auto& s : *config_.start) {
      if (s.size() != k) throw SchemaError("start scene width differs from schema");
      validate_scene_values(*config_.schema, s);
    }
  }
}

std::vector<std::vector<double>> StepLogic::successors_of(std::span<const double> scene) const {
  const double dt = config_.step;
  const double half = 0.5 * dt * dt;
  std::vector<std::vector<double>> out{std::vector<double>(scene.begin(), scene.end())};
  for (const auto& a : config_.actors) {
    std::vector<std::vector<double>> next;
    next.reserve(out.size() * a.ax.size() * a.ay.size() * a.lane.size());
    for (const auto& partial : out) {
      for (double ax : a.ax) {
        for (double ay : a.ay) {
          for (double lane : a.lane) {
            auto s = partial;
            s[a.x] = scene[a.x] + scene[a.vx] * dt + ax * half;
            s[a.vx] = scene[a.vx] + ax * dt;
            s[a.y] = scene[a.y] + scene[a.vy] * dt + ay * half + lane;
            s[a.vy] = scene[a.vy] + ay * dt;
            next.push_back(std::move(s));
          }
        }
      }
    }
    out = std::move(next);
  }
  return out;
}

std::vector<std::vector<double>> StepLogic::successors(const Trajectory& prefix) const {
  if (prefix.is_empty()) {
    if (!config_.start) throw ComplexityError(fmt::format("instance '{}' has an unbounded start set", config_.id));
    return *config_.start;
  }
  if (prefix.count() >= config_.horizon) return {};
  return successors_of(prefix.values(prefix.count() - 1));
}

bool StepLogic::is_successor(const Trajectory& prefix, std::span<const double> next) const {
  if (prefix.is_empty()) return step_ok(0, {}, next);
  return step_ok(prefix.count(), prefix.values(prefix.count() - 1), next);
}

bool StepLogic::is_successor_step(const Trajectory& c, std::size_t i) const {
  if (i == 0) return step_ok(0, {}, c.values(0));
  return step_ok(i, c.values(i - 1), c.values(i));
}

bool StepLogic::step_ok(std::size_t length, std::span<const double> last, std::span<const double> next) const {
  const std::size_t k = config_.schema->size();
  if (next.size() != k) return false;
  if (length == 0) {
    if (!config_.start) {
      for (double v : next) {
        if (!std::isfinite(v)) return false;
      }
      return true;
    }
    return std::any_of(config_.start->begin(), config_.start->end(),
                       [&](const auto& s) { return scenes_match(next, s, kSuccessorTolerance); });
  }
  if (length >= config_.horizon) return false;
  auto close = [](double a, double b) { return std::abs(a - b) <= kSuccessorTolerance * std::max(1.0, std::abs(b)); };
  for (std::size_t d = 0; d < k; ++d) {
    if (!owned_[d] && !close(next[d], last[d])) return false;
  }
  const double dt = config_.step;
  const double half = 0.5 * dt * dt;
  for (const auto& a : config_.actors) {
    bool x_ok = false;
    for (double ax : a.ax) {
      if (close(next[a.x], last[a.x] + last[a.vx] * dt + ax * half) && close(next[a.vx], last[a.vx] + ax * dt)) {
        x_ok = true;
        break;
      }
    }
    if (!x_ok) return false;
    bool y_ok = false;
    for (double ay : a.ay) {
      if (!close(next[a.vy], last[a.vy] + ay * dt)) continue;
      for (double lane : a.lane) {
        if (close(next[a.y], last[a.y] + last[a.vy] * dt + ay * half + lane)) {
          y_ok = true;
          break;
        }
      }
      if (y_ok) break;
    }
    if (!y_ok) return false;
  }
  return true;
}

InstancePtr make_step_instance(StepLogicConfig config) { return std::make_shared<StepLogic>(std::move(config)); }

SchemaPtr planar_schema() {
  static const SchemaPtr schema = make_schema(
      {{"x", Unit::Meter}, {"y", Unit::Meter}, {"vx", Unit::MeterPerSecond}, {"vy", Unit::MeterPerSecond}});
  return schema;
}

InstancePtr make_example_instance() {
  StepLogicConfig config;
  config.id = "ex";
  config.schema = planar_schema();
  config.actors.push_back(StepActor{"ego", 0, 1, 2, 3, {0.0, -1.0, 1.0}, {0.0, -1.0, 1.0}, {0.0}});
  config.step = 0.1;
  config.horizon = 201;
  config.start = std::vector<std::vector<double>>{{-50.0, 100.0, 10.0, -5.0}, {0.0, 0.0, 0.0, 0.0}, {150.0, 0.0, 10.0, -5.0}};
  return make_step_instance(std::move(config));
}

}  // namespace scn
