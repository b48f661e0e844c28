#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "fixtures.hpp"
#include "scn/logic/formula.hpp"
#include "scn/logic/instance.hpp"

namespace scn::testing {

/// Direct finite-trace semantics, evaluated position by position on a
/// complete trace. Bounded operators look at positions i..i+k.
inline bool holds_at(const Formula& f, const Trajectory& c, std::size_t i) {
  const std::size_t n = c.count();
  auto last_in = [&](std::optional<std::size_t> within) {
    return within ? std::min(n - 1, i + *within) : n - 1;
  };
  switch (f.op()) {
    case Op::True: return true;
    case Op::False: return false;
    case Op::Atom: return f.predicate().holds(c.values(i));
    case Op::SceneConst: {
      const auto v = c.values(i);
      const auto t = f.target();
      for (std::size_t d = 0; d < t.size(); ++d) {
        if (std::abs(v[d] - t[d]) > 1e-9 * std::max(1.0, std::abs(t[d]))) return false;
      }
      return true;
    }
    case Op::And: return holds_at(f.left(), c, i) && holds_at(f.right(), c, i);
    case Op::Or: return holds_at(f.left(), c, i) || holds_at(f.right(), c, i);
    case Op::Next: return i + 1 < n && holds_at(f.sub(), c, i + 1);
    case Op::Eventually:
      for (std::size_t j = i; j <= last_in(f.within()); ++j) {
        if (holds_at(f.sub(), c, j)) return true;
      }
      return false;
    case Op::Always:
      for (std::size_t j = i; j <= last_in(f.within()); ++j) {
        if (!holds_at(f.sub(), c, j)) return false;
      }
      return true;
  }
  return false;
}

inline bool holds(const Formula& f, const Trajectory& c) { return c.count() > 0 && holds_at(f, c, 0); }

/// Every bit string of length n, in counting order.
inline std::vector<Trajectory> all_bit_words(std::size_t n) {
  std::vector<Trajectory> out;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << n); ++code) out.push_back(bit_word(code, n));
  return out;
}

/// One quantized step of every actor, recomputed from the configuration.
inline std::vector<std::vector<double>> step_children(const StepLogicConfig& cfg, const std::vector<double>& s) {
  const double dt = cfg.step;
  const double half = 0.5 * dt * dt;
  std::vector<std::vector<double>> layer{s};
  for (const auto& a : cfg.actors) {
    std::vector<std::vector<double>> next;
    for (const auto& partial : layer) {
      for (double ax : a.ax) {
        for (double ay : a.ay) {
          for (double lane : a.lane) {
            auto v = partial;
            v[a.x] = s[a.x] + s[a.vx] * dt + ax * half;
            v[a.vx] = s[a.vx] + ax * dt;
            v[a.y] = s[a.y] + s[a.vy] * dt + ay * half + lane;
            v[a.vy] = s[a.vy] + ay * dt;
            next.push_back(std::move(v));
          }
        }
      }
    }
    layer = std::move(next);
  }
  return layer;
}

/// All horizon-length paths of a step configuration, duplicates removed.
inline std::vector<Trajectory> all_step_paths(const StepLogicConfig& cfg) {
  std::vector<std::vector<std::vector<double>>> paths;
  for (const auto& s : *cfg.start) paths.push_back({s});
  for (std::size_t len = 1; len < cfg.horizon; ++len) {
    std::vector<std::vector<std::vector<double>>> longer;
    for (const auto& p : paths) {
      for (auto& child : step_children(cfg, p.back())) {
        auto q = p;
        q.push_back(std::move(child));
        longer.push_back(std::move(q));
      }
    }
    paths = std::move(longer);
  }
  std::vector<Trajectory> out;
  for (const auto& p : paths) {
    std::vector<double> flat;
    for (const auto& s : p) flat.insert(flat.end(), s.begin(), s.end());
    out.emplace_back(cfg.schema, TimeGrid(cfg.step, p.size()), std::move(flat));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline std::vector<Trajectory> filter_holding(const std::vector<Trajectory>& universe, const Formula& f) {
  std::vector<Trajectory> out;
  for (const auto& c : universe) {
    if (holds(f, c)) out.push_back(c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace scn::testing
