#include "scn/monitor/monitor.hpp"

#include <fmt/format.h>

#include "scn/error.hpp"
#include "tree_memo.hpp"

namespace scn {

std::string_view to_string(WordVerdict v) { return v == WordVerdict::Accepted ? "Accepted" : "Rejected"; }

WordResult monitor_word(const Trajectory& c, const AbstractScenario& a) {
  const auto& instance = *a.instance();
  instance.require_compatible(c);
  if (c.count() != instance.horizon()) {
    throw LengthError(fmt::format("trace has {} samples, the word problem needs {}", c.count(), instance.horizon()));
  }
  const auto check = follow_path(instance, a.formula(), c);
  WordResult result;
  result.verdict = check.accepted ? WordVerdict::Accepted : WordVerdict::Rejected;
  result.reason = check.reason;
  if (check.violation) {
    result.violation_index = check.violation;
    result.violation_time = c.grid().time(*check.violation);
  }
  return result;
}

namespace {

constexpr unsigned kAccept = 1;
constexpr unsigned kReject = 2;

class PrefixExplorer {
 public:
  PrefixExplorer(const LogicInstance& instance, std::size_t budget) : instance_(instance), budget_(budget) {}

  unsigned explore(const Node& node) {
    const std::size_t horizon = instance_.horizon();
    const auto v = residual_verdict(node.residual, node.trajectory.count(), horizon);
    if (v == Verdict3::True3) return kAccept;
    if (v == Verdict3::False3) return kReject;
    auto key = detail::key_of(instance_, node);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    if (++visited_ > budget_) {
      throw ComplexityError(fmt::format("prefix monitoring visited more than {} nodes", budget_));
    }
    unsigned mask = 0;
    for (auto& child : instance_.branch(node.trajectory)) {
      Formula r = progress(node.residual, child.values(child.count() - 1));
      mask |= explore({std::move(child), std::move(r)});
      if (mask == (kAccept | kReject)) break;
    }
    memo_.emplace(std::move(key), mask);
    return mask;
  }

 private:
  const LogicInstance& instance_;
  std::size_t budget_;
  std::size_t visited_ = 0;
  detail::StateMemo<unsigned> memo_;
};

}  // namespace

Verdict3 monitor_prefix(const Trajectory& prefix, const AbstractScenario& a, const PrefixOptions& options) {
  const auto& instance = *a.instance();
  instance.require_compatible(prefix);
  if (prefix.count() > instance.horizon()) {
    throw LengthError(fmt::format("prefix has {} samples, the horizon is {}", prefix.count(), instance.horizon()));
  }
  for (std::size_t i = 0; i < prefix.count(); ++i) {
    if (!instance.is_successor_step(prefix, i)) return Verdict3::False3;
  }
  PrefixExplorer explorer(instance, options.node_budget);
  const unsigned mask = explorer.explore({prefix, residual_of(a.formula(), prefix)});
  if (mask == kAccept) return Verdict3::True3;
  if (mask == (kAccept | kReject)) return Verdict3::Unknown3;
  return Verdict3::False3;
}

MonitorStream::MonitorStream(AbstractScenario a, PrefixOptions options)
    : scenario_(std::move(a)), options_(options), width_(scenario_.instance()->schema()->size()) {
  verdict_ = monitor_prefix(scenario_.instance()->root(), scenario_, options_);
}

Verdict3 MonitorStream::step(const Scene& scene) {
  require_same_schema(scenario_.instance()->schema(), scene.schema());
  return step(scene.values());
}

Verdict3 MonitorStream::step(std::span<const double> values) {
  if (length() >= scenario_.instance()->horizon()) {
    throw HorizonError(fmt::format("monitor already holds the full horizon of {} samples", length()));
  }
  if (values.size() != width_) throw SchemaError("scene width differs from the monitored schema");
  validate_scene_values(*scenario_.instance()->schema(), values);
  data_.insert(data_.end(), values.begin(), values.end());
  if (verdict_ == Verdict3::Unknown3) verdict_ = monitor_prefix(prefix(), scenario_, options_);
  return verdict_;
}

Trajectory MonitorStream::prefix() const {
  const auto& instance = *scenario_.instance();
  if (data_.empty()) return instance.root();
  return Trajectory(instance.schema(), TimeGrid(instance.step(), length()), data_);
}

MonitorStream monitor_stream(const AbstractScenario& a, PrefixOptions options) { return MonitorStream(a, options); }

}  // namespace scn
