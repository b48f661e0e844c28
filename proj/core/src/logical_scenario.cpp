#include "scn/logical/logical_scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <thread>

#include <boost/math/distributions/normal.hpp>
#include <fmt/format.h>

#include "scn/error.hpp"
#include "scn/util/random.hpp"

namespace scn {

const std::string& axis_name(const Axis& axis) {
  return std::visit([](const auto& a) -> const std::string& { return a.name; }, axis);
}

ParameterSpace::ParameterSpace(std::vector<Axis> axes) : axes_(std::move(axes)) {
  for (const auto& axis : axes_) {
    if (const auto* c = std::get_if<ContinuousAxis>(&axis)) {
      if (!std::isfinite(c->lo) || !std::isfinite(c->hi) || c->lo > c->hi) {
        throw ValueError(fmt::format("axis '{}' needs finite lo <= hi", c->name));
      }
    } else {
      const auto& d = std::get<DiscreteAxis>(axis);
      if (d.values.empty()) throw ValueError(fmt::format("discrete axis '{}' has no values", d.name));
      auto sorted = d.values;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw ValueError(fmt::format("discrete axis '{}' has duplicate values", d.name));
      }
    }
  }
}

void ParameterSpace::require_contains(std::span<const double> x) const {
  if (x.size() != axes_.size()) {
    throw OutOfSpaceError(fmt::format("parameter vector has {} entries, space has {} axes", x.size(), axes_.size()),
                          "");
  }
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    if (const auto* c = std::get_if<ContinuousAxis>(&axes_[i])) {
      if (!(x[i] >= c->lo && x[i] <= c->hi)) {
        throw OutOfSpaceError(fmt::format("axis '{}': {} outside [{}, {}]", c->name, x[i], c->lo, c->hi), c->name);
      }
    } else {
      const auto& d = std::get<DiscreteAxis>(axes_[i]);
      const bool member = std::any_of(d.values.begin(), d.values.end(),
                                      [&](double v) { return std::abs(v - x[i]) <= kDiscreteMemberTolerance; });
      if (!member) throw OutOfSpaceError(fmt::format("axis '{}': {} is not a member", d.name, x[i]), d.name);
    }
  }
}

bool ParameterSpace::contains(std::span<const double> x) const {
  try {
    require_contains(x);
    return true;
  } catch (const OutOfSpaceError&) {
    return false;
  }
}

bool ParameterSpace::finite() const noexcept {
  return std::all_of(axes_.begin(), axes_.end(), [](const Axis& a) {
    if (const auto* c = std::get_if<ContinuousAxis>(&a)) return c->lo == c->hi;
    return true;
  });
}

std::vector<std::vector<double>> ParameterSpace::points() const {
  if (!finite()) throw ValueError("points() needs a finite parameter space");
  std::vector<std::vector<double>> choices;
  for (const auto& a : axes_) {
    if (const auto* c = std::get_if<ContinuousAxis>(&a)) {
      choices.push_back({c->lo});
    } else {
      choices.push_back(std::get<DiscreteAxis>(a).values);
    }
  }
  std::vector<std::vector<double>> out{{}};
  for (const auto& options : choices) {
    std::vector<std::vector<double>> next;
    next.reserve(out.size() * options.size());
    for (const auto& partial : out) {
      for (double v : options) {
        auto p = partial;
        p.push_back(v);
        next.push_back(std::move(p));
      }
    }
    out = std::move(next);
  }
  return out;
}

namespace {

std::vector<double> reference_point(const ParameterSpace& space) {
  std::vector<double> x;
  for (const auto& a : space.axes()) {
    if (const auto* c = std::get_if<ContinuousAxis>(&a)) {
      x.push_back(c->lo);
    } else {
      x.push_back(std::get<DiscreteAxis>(a).values.front());
    }
  }
  return x;
}

}  // namespace

LogicalScenario::LogicalScenario(std::string name, ParameterSpace space, Binder binder, TimeGrid grid)
    : name_(std::move(name)), space_(std::move(space)), binder_(std::move(binder)), grid_(grid) {
  if (!binder_) throw ValueError("logical scenario without binder");
  schema_ = binder_(reference_point(space_)).start.schema();
}

Binding LogicalScenario::bind(std::span<const double> x) const {
  space_.require_contains(x);
  return binder_(x);
}

Trajectory realize(const LogicalScenario& scenario, std::span<const double> x) {
  auto binding = scenario.bind(x);
  return evaluate(AttributeLevelScenario{std::move(binding.start), std::move(binding.family), scenario.grid()});
}

ParameterDistribution::ParameterDistribution(std::vector<Marginal> marginals) : marginals_(std::move(marginals)) {
  for (const auto& m : marginals_) {
    if (const auto* n = std::get_if<TruncatedNormalMarginal>(&m)) {
      if (!(n->sigma > 0.0)) throw ValueError("truncated-normal sigma must be > 0");
    } else if (const auto* w = std::get_if<DiscreteWeightedMarginal>(&m)) {
      double sum = 0.0;
      for (double v : w->weights) {
        if (!(v >= 0.0)) throw ValueError("distribution weights must be nonnegative");
        sum += v;
      }
      if (std::abs(sum - 1.0) > 1e-12) throw ValueError(fmt::format("distribution weights sum to {}, not 1", sum));
    }
  }
}

void ParameterDistribution::validate(const ParameterSpace& space) const {
  if (marginals_.size() > space.dimension()) throw ValueError("more marginals than parameter axes");
  for (std::size_t i = 0; i < marginals_.size(); ++i) {
    const auto& axis = space[i];
    const bool discrete = std::holds_alternative<DiscreteAxis>(axis);
    if (const auto* w = std::get_if<DiscreteWeightedMarginal>(&marginals_[i])) {
      if (!discrete) throw ValueError(fmt::format("axis '{}': weighted marginal needs a discrete axis", axis_name(axis)));
      if (w->weights.size() != std::get<DiscreteAxis>(axis).values.size()) {
        throw ValueError(fmt::format("axis '{}': weight count differs from value count", axis_name(axis)));
      }
    } else if (std::holds_alternative<TruncatedNormalMarginal>(marginals_[i]) && discrete) {
      throw ValueError(fmt::format("axis '{}': truncated-normal needs a continuous axis", axis_name(axis)));
    }
  }
}

std::vector<double> ParameterDistribution::draw(const ParameterSpace& space,
                                                const std::function<double()>& next_uniform) const {
  std::vector<double> x;
  x.reserve(space.dimension());
  for (std::size_t i = 0; i < space.dimension(); ++i) {
    const Marginal marginal = i < marginals_.size() ? marginals_[i] : Marginal{UniformMarginal{}};
    const double u = next_uniform();
    if (const auto* c = std::get_if<ContinuousAxis>(&space[i])) {
      if (const auto* n = std::get_if<TruncatedNormalMarginal>(&marginal)) {
        const boost::math::normal_distribution<double> normal(n->mu, n->sigma);
        const double p_lo = boost::math::cdf(normal, c->lo);
        const double p_hi = boost::math::cdf(normal, c->hi);
        double v = c->lo;
        if (p_hi > p_lo) {
          const double p = std::clamp(p_lo + u * (p_hi - p_lo), std::numeric_limits<double>::min(),
                                      1.0 - std::numeric_limits<double>::epsilon());
          v = boost::math::quantile(normal, p);
        } else {
          v = std::clamp(n->mu, c->lo, c->hi);
        }
        x.push_back(std::clamp(v, c->lo, c->hi));
      } else {
        x.push_back(c->lo == c->hi ? c->lo : std::min(c->hi, c->lo + u * (c->hi - c->lo)));
      }
    } else {
      const auto& values = std::get<DiscreteAxis>(space[i]).values;
      std::size_t index = 0;
      if (const auto* w = std::get_if<DiscreteWeightedMarginal>(&marginal)) {
        double cumulative = 0.0;
        index = values.size() - 1;
        for (std::size_t j = 0; j < w->weights.size(); ++j) {
          cumulative += w->weights[j];
          if (u < cumulative) {
            index = j;
            break;
          }
        }
      } else {
        index = std::min(values.size() - 1, static_cast<std::size_t>(u * static_cast<double>(values.size())));
      }
      x.push_back(values[index]);
    }
  }
  return x;
}

std::vector<std::vector<double>> sample_parameters(const ParameterSpace& space, const ParameterDistribution& dist,
                                                   std::size_t count, std::uint64_t seed) {
  dist.validate(space);
  std::vector<std::vector<double>> xs;
  xs.reserve(count);
  for (std::size_t j = 0; j < count; ++j) {
    Rng rng(derive_seed(seed, j));
    xs.push_back(dist.draw(space, [&] { return rng.uniform(); }));
  }
  return xs;
}

std::vector<LogicalSample> sample(const LogicalScenario& scenario, const ParameterDistribution& dist,
                                  std::size_t count, std::uint64_t seed, std::size_t workers) {
  if (count == 0) throw ValueError("sample count must be >= 1");
  const auto xs = sample_parameters(scenario.space(), dist, count, seed);
  std::vector<std::optional<Trajectory>> realized(count);
  workers = std::clamp<std::size_t>(workers, 1, count);
  auto run = [&](std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) realized[j] = realize(scenario, xs[j]);
  };
  if (workers == 1) {
    run(0, count);
  } else {
    std::vector<std::jthread> pool;
    std::vector<std::exception_ptr> failures(workers);
    const std::size_t chunk = (count + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          run(w * chunk, std::min(count, (w + 1) * chunk));
        } catch (...) {
          failures[w] = std::current_exception();
        }
      });
    }
    pool.clear();
    for (auto& f : failures) {
      if (f) std::rethrow_exception(f);
    }
  }
  std::vector<LogicalSample> out;
  out.reserve(count);
  for (std::size_t j = 0; j < count; ++j) out.push_back({xs[j], std::move(*realized[j])});
  return out;
}

namespace {

double residual_at(const LogicalScenario& scenario, const Trajectory& observed, std::span<const double> x,
                   std::size_t& evaluations) {
  ++evaluations;
  try {
    return trajectory_distance(realize(scenario, x), observed);
  } catch (const Error&) {
    return std::numeric_limits<double>::infinity();
  }
}

}  // namespace

InversionResult invert(const LogicalScenario& scenario, const Trajectory& observed, double tol,
                       const InvertOptions& options) {
  if (!(tol > 0.0)) throw ValueError("inversion tolerance must be > 0");
  require_same_schema(scenario.schema(), observed.schema());
  if (observed.count() != scenario.grid().count() || !same_step(observed.step(), scenario.grid().step())) {
    throw GridAlignmentError("observed trace grid differs from the logical scenario grid");
  }
  const auto& space = scenario.space();
  if (space.dimension() > kMaxInvertAxes && !options.force) {
    throw ComplexityError(fmt::format("inversion over {} axes exceeds the limit of {}", space.dimension(), kMaxInvertAxes));
  }
  const std::size_t points = std::max<std::size_t>(options.grid_points, 2);

  std::vector<std::vector<double>> candidates;
  std::vector<double> steps(space.dimension(), 0.0);
  for (std::size_t i = 0; i < space.dimension(); ++i) {
    if (const auto* c = std::get_if<ContinuousAxis>(&space[i])) {
      std::vector<double> axis_points;
      if (c->lo == c->hi) {
        axis_points.push_back(c->lo);
      } else {
        for (std::size_t p = 0; p < points; ++p) {
          const double f = static_cast<double>(p) / static_cast<double>(points - 1);
          axis_points.push_back(p + 1 == points ? c->hi : c->lo + f * (c->hi - c->lo));
        }
        steps[i] = (c->hi - c->lo) / static_cast<double>(points - 1);
      }
      candidates.push_back(std::move(axis_points));
    } else {
      candidates.push_back(std::get<DiscreteAxis>(space[i]).values);
    }
  }

  InversionResult result;
  result.residual = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> index(space.dimension(), 0);
  std::vector<double> x(space.dimension());
  while (true) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = candidates[i][index[i]];
    const double r = residual_at(scenario, observed, x, result.evaluations);
    if (r < result.residual) {
      result.residual = r;
      result.x = x;
    }
    std::size_t axis = 0;
    while (axis < index.size() && ++index[axis] == candidates[axis].size()) index[axis++] = 0;
    if (axis == index.size()) break;
  }
  if (result.x.empty() && space.dimension() > 0) throw ValueError("no parameter point could be realized");

  // Coordinate pattern search on the continuous axes.
  const double stop = tol / 10.0;
  constexpr std::size_t kMaxEvaluations = 200000;
  while (result.residual > 0.0 && result.evaluations < kMaxEvaluations) {
    if (*std::max_element(steps.begin(), steps.end(), [](double a, double b) { return a < b; }) < stop) break;
    bool improved = false;
    for (std::size_t i = 0; i < steps.size(); ++i) {
      if (steps[i] < stop) continue;
      const auto* c = std::get_if<ContinuousAxis>(&space[i]);
      for (double direction : {1.0, -1.0}) {
        auto trial = result.x;
        trial[i] = std::clamp(trial[i] + direction * steps[i], c->lo, c->hi);
        if (trial[i] == result.x[i]) continue;
        const double r = residual_at(scenario, observed, trial, result.evaluations);
        if (r < result.residual) {
          result.residual = r;
          result.x = std::move(trial);
          improved = true;
          break;
        }
      }
    }
    if (!improved) {
      for (auto& s : steps) s *= options.shrink;
    }
  }
  result.found = result.residual <= tol;
  return result;
}

RegistryInversion invert_any(std::span<const LogicalScenario> registry, const Trajectory& observed, double tol,
                             const InvertOptions& options) {
  RegistryInversion best;
  best.result.residual = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < registry.size(); ++i) {
    if (!same_schema(registry[i].schema(), observed.schema())) continue;
    if (registry[i].grid().count() != observed.count()) continue;
    auto r = invert(registry[i], observed, tol, options);
    if (r.found) return {i, std::move(r)};
    if (r.residual < best.result.residual) best.result = std::move(r);
  }
  return best;
}

}  // namespace scn
