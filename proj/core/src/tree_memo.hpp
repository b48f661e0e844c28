#pragma once

#include <bit>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "scn/logic/abstract.hpp"

namespace scn::detail {

/// Memo key of a tree node. Markov instances are keyed on the last scene,
/// others on the whole history.
struct StateKey {
  std::size_t length = 0;
  std::vector<double> values;
  Formula residual = Formula::truth();

  friend bool operator==(const StateKey& a, const StateKey& b) {
    if (a.length != b.length || a.values.size() != b.values.size() || !(a.residual == b.residual)) return false;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
      if (std::bit_cast<std::uint64_t>(a.values[i]) != std::bit_cast<std::uint64_t>(b.values[i])) return false;
    }
    return true;
  }
};

struct StateKeyHash {
  std::size_t operator()(const StateKey& k) const noexcept {
    std::size_t h = k.length * 0x9e3779b97f4a7c15ULL ^ k.residual.hash();
    for (double v : k.values) h = (h ^ std::bit_cast<std::uint64_t>(v)) * 0x100000001b3ULL;
    return h;
  }
};

inline StateKey key_of(const LogicInstance& instance, const Node& node) {
  const auto& c = node.trajectory;
  StateKey key{c.count(), {}, node.residual};
  if (instance.markov()) {
    if (!c.is_empty()) {
      const auto last = c.values(c.count() - 1);
      key.values.assign(last.begin(), last.end());
    }
  } else {
    key.values.assign(c.flat().begin(), c.flat().end());
  }
  return key;
}

template <typename T>
using StateMemo = std::unordered_map<StateKey, T, StateKeyHash>;

}  // namespace scn::detail
