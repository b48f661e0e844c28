// Runs every acceptance criterion once and prints one PASS/FAIL line each.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>

#include <fmt/format.h>

#include "fixtures.hpp"
#include "generators.hpp"
#include "oracle.hpp"
#include "scn/dsl/compile.hpp"
#include "scn/error.hpp"
#include "scn/monitor/monitor.hpp"
#include "scn/rural/rural.hpp"

using namespace scn;
using namespace scn::testing;

namespace {

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail = what;
    ok = ok && cond;
  }
};

struct Criterion {
  int id;
  std::string name;
  double limit;  // seconds, 0 means untimed
  std::function<Check()> run;
};

Formula bit_is(double v) { return Formula::atom(ScenePredicate::interval(bit_schema(), "bit", v, v)); }

std::vector<Trajectory> realized_image(const LogicalScenario& l) {
  std::vector<Trajectory> out;
  for (const auto& x : l.space().points()) out.push_back(realize(l, x));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Formula> bit_formulas(Rng& rng, std::size_t n, std::size_t extra) {
  std::vector<Formula> out{Formula::truth(), Formula::falsity(),
                           Formula::always(Formula::disj(bit_is(0.0), Formula::next(bit_is(0.0)))),
                           Formula::conj(bit_is(1.0), Formula::eventually(bit_is(0.0), 2))};
  for (std::size_t i = 0; i < extra; ++i)
    out.push_back(random_formula(rng, bit_schema(), 4, {.lo = 0, .hi = 1, .max_bound = n}));
  return out;
}

std::vector<Formula> planar_formulas(Rng& rng, std::size_t count, const std::vector<std::vector<double>>& scenes) {
  std::vector<Formula> out{Formula::truth()};
  const FormulaShape shape{.lo = -3, .hi = 3, .max_bound = 3, .scene_rate = 0.2, .scenes = scenes};
  while (out.size() < count) out.push_back(random_formula(rng, planar_schema(), 3, shape));
  return out;
}

Verdict3 oracle_prefix(const Trajectory& p, const std::vector<Trajectory>& universe, const Formula& f) {
  bool any = false;
  bool all = true;
  for (const auto& w : universe) {
    if (!is_prefix(p, w)) continue;
    const bool hit = holds(f, w);
    any = any || hit;
    all = all && hit;
  }
  if (!any) return Verdict3::False3;
  return all ? Verdict3::True3 : Verdict3::Unknown3;
}

template <class Cdf>
double ks_statistic(std::vector<double> xs, Cdf cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

Check closed_form_drive() {
  Check c;
  const auto spec = dsl::compile_file(scenario_path("example2.scn"));
  const Trajectory spec_traj = realize(spec.logical("example2"), std::vector<double>{});
  c.require(spec_traj.count() == 201, fmt::format("{} samples", spec_traj.count()));
  double worst = 0.0;
  for (std::size_t i = 0; i < spec_traj.count() && c.ok; ++i) {
    const double t = static_cast<double>(i) / 10.0;
    const double expect[4] = {-50.0 + 10.0 * t, 100.0 - 5.0 * t, 10.0, -5.0};
    const auto v = spec_traj.values(i);
    const bool representable = i % 5 == 0;
    for (std::size_t d = 0; d < 4; ++d) {
      const double err = std::abs(v[d] - expect[d]);
      worst = std::max(worst, err);
      c.require(representable ? err == 0.0 : err <= 1e-12,
                fmt::format("sample {} dim {}: {} vs {}", i, d, v[d], expect[d]));
    }
  }
  c.require(spec_traj.last() == Scene(planar_schema(), {150.0, 0.0, 10.0, -5.0}), "endpoint differs");
  if (c.ok) c.detail = fmt::format("201 samples, max error {:.1e}, endpoint (150, 0, 10, -5)", worst);
  return c;
}

Check example_membership() {
  Check c;
  const auto a = example3();
  c.require(monitor_word(example2_closed_form(), a).accepted(), "straight drive rejected");
  c.require(monitor_word(stop_at_origin_variant(), a).accepted(), "stop at origin rejected");
  const auto wrong = monitor_word(wrong_start_variant(), a);
  c.require(!wrong.accepted(), "wrong start accepted");
  if (c.ok) c.detail = "drive Accepted, stop-at-origin Accepted, wrong start Rejected";
  return c;
}

Check binary_counts() {
  Check c;
  for (std::size_t n = 1; n <= 16 && c.ok; ++n) {
    const auto leaves = enumerate(*make_binary_instance(n), Formula::truth());
    c.require(leaves.size() == (std::size_t{1} << n), fmt::format("n={}: {} leaves", n, leaves.size()));
    if (n == 16) {
      std::vector<Trajectory> words = all_bit_words(16);
      std::sort(words.begin(), words.end());
      c.require(leaves == words, "n=16 leaves differ from all bit words");
    }
  }
  if (c.ok) c.detail = "2^n leaves for n = 1..16, 65536 at n = 16";
  return c;
}

Check encoding_equality() {
  Check c;
  for (std::size_t k : {1u, 5u, 20u}) {
    const auto l = speed_scenario(k);
    const auto leaves = enumerate(*make_encoding_instance(l), Formula::truth());
    c.require(leaves == realized_image(l), fmt::format("|X|={}: {} leaves", k, leaves.size()));
  }
  if (c.ok) c.detail = "bit-exact set equality for |X| = 1, 5, 20";
  return c;
}

Check rural_counts() {
  Check c;
  c.require(count_lower_bound(3, 2) == 360, "closed form is not 360");
  c.require(enumerate_choices(3, 2).size() == 360, "enumeration is not 360");
  for (int n = 0; n <= 4; ++n) {
    for (int m = 0; m <= 3; ++m) {
      const auto all = enumerate_choices(n, m);
      std::vector<ManeuverChoice> unique(all.begin(), all.end());
      std::sort(unique.begin(), unique.end());
      unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
      // n!^2 * C(n+m, n) recomputed by hand
      double expect = std::tgamma(n + 1.0) * std::tgamma(n + 1.0) * std::tgamma(n + m + 1.0) /
                      (std::tgamma(n + 1.0) * std::tgamma(m + 1.0));
      c.require(unique.size() == all.size() && std::abs(static_cast<double>(all.size()) - expect) < 0.5 &&
                    BigInt(all.size()) == count_lower_bound(n, m),
                fmt::format("n={}, m={}: {} choices", n, m, all.size()));
    }
  }
  if (c.ok) c.detail = "360 = 360, closed form matches enumeration for n <= 4, m <= 3";
  return c;
}

Check inversion() {
  Check c;
  const auto l = slope_scenario();
  const auto hit = invert(l, line_trace(2.0, l), 1e-6);
  c.require(hit.found, "slope-two trace not found");
  c.require(!hit.x.empty() && std::abs(hit.x[0] - 2.0) <= 1e-6, "recovered x off");
  c.require(hit.residual <= 1e-6, fmt::format("residual {}", hit.residual));
  const auto zero = Trajectory(l.schema(), l.grid(), std::vector<double>(l.grid().count(), 0.0));
  c.require(!invert(l, zero, 1e-6).found, "zero trace found");
  if (c.ok) c.detail = fmt::format("x = {:.9f}, residual {:.1e}, zero trace NotInImage", hit.x[0], hit.residual);
  return c;
}

Check axioms() {
  Check c;
  Rng rng(9);
  const auto step_cfg = random_step_config(rng, 1);
  const auto ex_scenes = std::vector<std::vector<double>>{
      {-50.0, 100.0, 10.0, -5.0}, {0.0, 0.0, 0.0, 0.0}, {150.0, 0.0, 10.0, -5.0}};
  auto ex_fs = planar_formulas(rng, 11, ex_scenes);
  ex_fs.push_back(lambda_ex());
  const std::vector<std::pair<InstancePtr, std::vector<Formula>>> cases{
      {make_binary_instance(6), bit_formulas(rng, 6, 8)},
      {make_encoding_instance(speed_scenario(5)), planar_formulas(rng, 12, {{0.0, 1.0, 0.5, 0.25}, {0.0, 1.0, 1.0, 0.5}})},
      {make_example_instance(), ex_fs},
      {make_step_instance(step_cfg), planar_formulas(rng, 12, *step_cfg.start)}};
  std::vector<std::string> parts;
  for (const auto& [inst, fs] : cases) {
    const auto report = check_axioms(*inst, fs, 500, {.seed = 21});
    c.require(report.probes == 500 && report.passes(),
              fmt::format("{}: {} counterexamples", inst->id(), report.failures()));
    parts.push_back(fmt::format("{} 0/500", inst->id()));
  }
  const auto mutant = check_axioms(*make_prefix_mutant(make_binary_instance(6)), bit_formulas(rng, 6, 2), 500);
  c.require(!mutant.passes(), "mutant instance passes");
  if (c.ok) c.detail = fmt::format("{}; mutant caught with {} counterexamples", fmt::join(parts, ", "), mutant.failures());
  return c;
}

Check soundness() {
  Check c;
  Rng rng(50);
  std::size_t checks = 0;
  for (std::size_t n = 1; n <= 8 && c.ok; ++n) {
    const auto inst = make_binary_instance(n);
    const auto words = all_bit_words(n);
    for (const auto& f : bit_formulas(rng, n, 4)) {
      const AbstractScenario a(f, {}, inst);
      const auto members = enumerate(a);
      for (const auto& w : words) {
        const bool member = std::binary_search(members.begin(), members.end(), w);
        c.require(monitor_word(w, a).accepted() == member && member == holds(f, w),
                  fmt::format("word disagreement n={} on {}", n, to_string(f)));
        ++checks;
      }
      if (n > 6) continue;
      for (std::size_t len = 0; len <= n; ++len) {
        for (std::uint64_t code = 0; code < (std::uint64_t{1} << len); ++code) {
          const auto p = len == 0 ? inst->root() : bit_word(code, len);
          c.require(monitor_prefix(p, a) == oracle_prefix(p, words, f),
                    fmt::format("prefix disagreement n={} on {}", n, to_string(f)));
          ++checks;
        }
      }
    }
  }
  c.require(checks >= 510, fmt::format("only {} checks", checks));

  Rng srng(51);
  for (std::size_t i = 0; i < 200 && c.ok; ++i) {
    const auto cfg = random_step_config(srng, i);
    const FormulaShape shape{.lo = -3, .hi = 3, .max_bound = 3, .scene_rate = 0.2, .scenes = *cfg.start};
    const AbstractScenario a(random_formula(srng, cfg.schema, 3, shape), {random_formula(srng, cfg.schema, 1, shape)},
                             make_step_instance(cfg));
    const auto paths = all_step_paths(cfg);
    const auto members = enumerate(a);
    c.require(members == filter_holding(paths, Formula::conj(a.formula(), a.world().front())),
              fmt::format("step fixture {} enumeration differs", cfg.id));
    for (const auto& w : paths) {
      c.require(monitor_word(w, a).accepted() == std::binary_search(members.begin(), members.end(), w),
                fmt::format("step fixture {} word disagreement", cfg.id));
    }
  }

  Rng irng(52);
  std::size_t extensions = 0;
  std::size_t violations = 0;
  while (extensions < 10'000) {
    InstancePtr inst;
    Formula f = Formula::truth();
    if (irng.below(2) == 0) {
      inst = make_binary_instance(2 + irng.below(6));
      const auto fs = bit_formulas(irng, inst->horizon(), 4);
      f = fs[irng.below(fs.size())];
    } else {
      const auto cfg = random_step_config(irng, extensions);
      inst = make_step_instance(cfg);
      f = random_formula(irng, cfg.schema, 3,
                         {.lo = -3, .hi = 3, .max_bound = 3, .scene_rate = 0.2, .scenes = *cfg.start});
    }
    const AbstractScenario a(f, {}, inst);
    Trajectory p = inst->root();
    Verdict3 v = monitor_prefix(p, a);
    while (p.count() < inst->horizon()) {
      const auto children = inst->branch(p);
      p = children[irng.below(children.size())];
      const Verdict3 w = monitor_prefix(p, a);
      ++extensions;
      if (v != Verdict3::Unknown3 && w != v) ++violations;
      v = w;
    }
  }
  c.require(violations == 0, fmt::format("{} irrevocability violations", violations));
  if (c.ok)
    c.detail = fmt::format("{} binary checks, 200 step fixtures, {} extensions with 0 violations", checks, extensions);
  return c;
}

Check sampling() {
  Check c;
  const AbstractScenario bits(Formula::truth(), {}, make_binary_instance(3));
  const auto draws = sample_abstract(bits, 8000, SampleStrategy::UniformLeaf, 77);
  std::map<Trajectory, int> counts;
  for (const auto& s : draws.samples) ++counts[s];
  c.require(counts.size() == 8, fmt::format("{} distinct leaves", counts.size()));
  int lo = 8000, hi = 0;
  for (const auto& [leaf, n] : counts) {
    lo = std::min(lo, n);
    hi = std::max(hi, n);
  }
  c.require(lo >= 900 && hi <= 1100, fmt::format("leaf counts in [{}, {}]", lo, hi));
  for (const auto& s : draws.samples) c.require(monitor_word(s, bits).accepted(), "sample rejected by monitor");

  const AbstractScenario sparse(Formula::always(Formula::disj(bit_is(0.0), Formula::next(bit_is(0.0))), 4), {},
                                make_binary_instance(6));
  for (auto strategy : {SampleStrategy::UniformLeaf, SampleStrategy::UniformBranch, SampleStrategy::Rejection}) {
    for (const auto& s : sample_abstract(sparse, 500, strategy, 5).samples) {
      c.require(monitor_word(s, sparse).accepted(), fmt::format("{} sample rejected", to_string(strategy)));
    }
  }

  const auto l = slope_scenario();
  std::vector<double> finals;
  for (const auto& d : sample(l, {}, 10'000, 2024, 4)) finals.push_back(d.trajectory.last()[0]);
  const double ks = ks_statistic(finals, [](double v) { return std::clamp((v / 10.0 - 1.0) / 2.0, 0.0, 1.0); });
  c.require(ks < 0.03, fmt::format("KS {:.4f}", ks));
  if (c.ok) c.detail = fmt::format("leaf counts in [{}, {}], KS {:.4f}, all abstract samples accepted", lo, hi, ks);
  return c;
}

Check rural_synthesis() {
  Check c;
  RuralConfig cfg;
  cfg.n = 3;
  cfg.m = 2;
  const auto grid = rural_grid(cfg);
  const auto a = rural_formula(cfg);
  std::size_t accepted = 0;
  for (const auto& choice : enumerate_choices(3, 2)) {
    const Trajectory traj = synthesize(choice, cfg, grid);
    const bool ok = monitor_word(traj, a).accepted();
    accepted += ok ? 1 : 0;
    c.require(ok, fmt::format("{} rejected", to_string(choice)));
    for (std::size_t i = 0; i < traj.count(); ++i) {
      const auto v = traj.values(i);
      for (std::size_t k = 0; k < v.size(); k += 4) {
        const double cap = k == 0 ? cfg.v_tractor_max : cfg.v_car_max;
        c.require(std::hypot(v[k + 2], v[k + 3]) <= cap + 1e-12, fmt::format("speed cap broken at sample {}", i));
      }
    }
  }
  if (c.ok) c.detail = fmt::format("{}/360 accepted over {} samples each, caps respected", accepted, grid.count());
  return c;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "closed-form drive reproduction", 0.1, closed_form_drive},
      {2, "example membership", 1.0, example_membership},
      {3, "binary logic leaf counts", 5.0, binary_counts},
      {4, "encoding set equality", 2.0, encoding_equality},
      {5, "rural maneuver counts", 1.0, rural_counts},
      {6, "parameter inversion", 2.0, inversion},
      {7, "logic axiom suite", 0.0, axioms},
      {8, "monitor soundness", 0.0, soundness},
      {9, "sampling statistics", 10.0, sampling},
      {10, "rural synthesis", 30.0, rural_synthesis},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Check result;
    try {
      result = cr.run();
    } catch (const std::exception& e) {
      result = {false, fmt::format("threw {}", e.what())};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (result.ok && cr.limit > 0.0 && secs >= cr.limit) {
      result.ok = false;
      result.detail = fmt::format("took {:.3f} s, limit {} s", secs, cr.limit);
    }
    const std::string limit = cr.limit > 0.0 ? fmt::format(" < {} s", cr.limit) : "";
    fmt::print("{} {:>2} {} [{:.3f} s{}] {}\n", result.ok ? "PASS" : "FAIL", cr.id, cr.name, secs, limit,
               result.detail);
    std::fflush(stdout);
    failed += result.ok ? 0 : 1;
  }
  fmt::print("{}/{} criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
  return failed == 0 ? 0 : 1;
}
