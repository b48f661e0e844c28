#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scn/logic/abstract.hpp"

namespace scn {

enum class WordVerdict { Accepted, Rejected };
std::string_view to_string(WordVerdict v);

struct WordResult {
  WordVerdict verdict = WordVerdict::Rejected;
  /// First sample that left the tree or falsified the formula.
  std::optional<std::size_t> violation_index;
  std::optional<double> violation_time;
  std::string reason;

  bool accepted() const noexcept { return verdict == WordVerdict::Accepted; }
};

/// Word problem: is the full-length trace C in the scenario set of A.
/// Follows C's own path through the tree. LengthError when C does not have
/// the horizon length, SchemaError on a schema mismatch.
WordResult monitor_word(const Trajectory& c, const AbstractScenario& a);

struct PrefixOptions {
  std::size_t node_budget = 5'000'000;
};

/// Prefix problem over horizon-length extensions: True3 when every
/// extension in the tree is accepted, False3 when none is, Unknown3
/// otherwise. ComplexityError when the exploration exceeds its budget.
Verdict3 monitor_prefix(const Trajectory& prefix, const AbstractScenario& a, const PrefixOptions& options = {});

/// Online three-valued monitor. True3 and False3 are terminal.
class MonitorStream {
 public:
  explicit MonitorStream(AbstractScenario a, PrefixOptions options = {});

  Verdict3 step(const Scene& scene);
  Verdict3 step(std::span<const double> values);

  Verdict3 verdict() const noexcept { return verdict_; }
  std::size_t length() const noexcept { return data_.size() / width_; }
  Trajectory prefix() const;

 private:
  AbstractScenario scenario_;
  PrefixOptions options_;
  std::size_t width_;
  std::vector<double> data_;
  Verdict3 verdict_;
};

MonitorStream monitor_stream(const AbstractScenario& a, PrefixOptions options = {});

}  // namespace scn
