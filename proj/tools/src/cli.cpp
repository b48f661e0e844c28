#include "scn/cli/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <limits>
#include <optional>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "scn/core/trace_io.hpp"
#include "scn/dsl/compile.hpp"
#include "scn/logic/abstract.hpp"
#include "scn/logic/instance.hpp"
#include "scn/logical/logical_scenario.hpp"
#include "scn/monitor/monitor.hpp"
#include "scn/rural/rural.hpp"

namespace scn::cli {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

struct Options {
  std::string spec;
  std::string scenario;
  std::string trace;
  std::string out_dir;
  std::string strategy = "uniform-leaf";
  std::size_t count = 1;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  std::size_t max_attempts = 10'000;
  double max_leaves = 1e7;
  double tol = 1e-6;
  bool force = false;
  int n = 0;
  int m = 0;
};

struct Outcome {
  Json summary;
  int code = 0;
};

Json diagnostics_json(const std::vector<dsl::Diagnostic>& ds) {
  Json arr = Json::array();
  for (const auto& d : ds) {
    arr.push_back(Json{{"code", d.code},
                       {"message", d.message},
                       {"line", d.line},
                       {"col", d.col},
                       {"token", d.token},
                       {"expected", d.expected}});
  }
  return arr;
}

Json point_json(const ParameterSpace& space, std::span<const double> x) {
  Json out = Json::object();
  for (std::size_t i = 0; i < space.dimension() && i < x.size(); ++i) out[axis_name(space[i])] = x[i];
  return out;
}

Json big_json(const BigInt& v) {
  if (v <= BigInt(std::numeric_limits<std::uint64_t>::max())) return Json(v.convert_to<std::uint64_t>());
  return Json(v.str());
}

void prepare_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError(fmt::format("cannot create directory '{}'", dir.string()));
}

std::string trace_name(std::string_view stem, std::size_t i) { return fmt::format("{}_{:05d}.csv", stem, i); }

void write_json(const fs::path& path, const Json& j) { write_text_file(path, j.dump(2) + "\n"); }

Outcome validate(const Options& o) {
  const dsl::ParseResult r = dsl::parse(read_text_file(o.spec));
  if (!r.ok()) return {Json{{"valid", false}, {"diagnostics", diagnostics_json(r.diagnostics)}}, kExitData};
  Json decls{{"schemas", Json::array()},
             {"models", Json::array()},
             {"logical", Json::array()},
             {"abstract", Json::array()},
             {"fixtures", Json::array()}};
  for (const auto& d : r.document->declarations) {
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, dsl::SchemaDecl>) decls["schemas"].push_back(v.name);
          if constexpr (std::is_same_v<T, dsl::ModelDecl>) decls["models"].push_back(v.name);
          if constexpr (std::is_same_v<T, dsl::LogicalDecl>) decls["logical"].push_back(v.name);
          if constexpr (std::is_same_v<T, dsl::AbstractDecl>) decls["abstract"].push_back(v.name);
          if constexpr (std::is_same_v<T, dsl::FixtureDecl>) decls["fixtures"].push_back(v.name);
        },
        d);
  }
  // Building every scenario surfaces runtime errors such as ownership clashes.
  const dsl::CompiledSpec spec(*r.document);
  for (const auto& name : spec.abstract_names()) (void)spec.abstract_scenario(name);
  return {Json{{"valid", true}, {"declarations", decls}}, 0};
}

Outcome sample_logical(const Options& o) {
  const auto spec = dsl::compile_file(o.spec);
  const LogicalScenario& l = spec.logical(o.scenario);
  const fs::path dir(o.out_dir);
  prepare_dir(dir);
  const auto samples = sample(l, spec.distribution(o.scenario), o.count, o.seed, std::max<std::size_t>(1, o.workers));
  Json list = Json::array();
  for (std::size_t j = 0; j < samples.size(); ++j) {
    const std::string name = trace_name("sample", j);
    write_trace_csv(dir / name, samples[j].trajectory);
    list.push_back(Json{{"x", point_json(l.space(), samples[j].x)}, {"trace", name}});
  }
  write_schema_json(dir / "schema.json", *l.schema());
  write_json(dir / "manifest.json", Json{{"seed", o.seed}, {"scenario", o.scenario}, {"samples", list}});
  return {Json{{"command", "sample-logical"},
               {"scenario", o.scenario},
               {"seed", o.seed},
               {"count", samples.size()},
               {"manifest", "manifest.json"}},
          0};
}

Outcome sample_abstract_cmd(const Options& o) {
  const auto strategy = parse_strategy(o.strategy);
  if (!strategy) throw ValueError(fmt::format("unknown strategy '{}'", o.strategy));
  const auto spec = dsl::compile_file(o.spec);
  const AbstractScenario a = spec.abstract_scenario(o.scenario);
  const fs::path dir(o.out_dir);
  prepare_dir(dir);
  AbstractSampleOptions options;
  options.max_attempts = o.max_attempts;
  const auto result = sample_abstract(a, o.count, *strategy, o.seed, options);
  Json list = Json::array();
  for (std::size_t j = 0; j < result.samples.size(); ++j) {
    const std::string name = trace_name("sample", j);
    write_trace_csv(dir / name, result.samples[j]);
    list.push_back(Json{{"trace", name}});
  }
  write_schema_json(dir / "schema.json", *a.instance()->schema());
  write_json(dir / "manifest.json",
             Json{{"seed", o.seed}, {"scenario", o.scenario}, {"strategy", o.strategy}, {"samples", list}});
  return {Json{{"command", "sample-abstract"},
               {"scenario", o.scenario},
               {"strategy", o.strategy},
               {"seed", o.seed},
               {"count", result.samples.size()},
               {"attempts", result.attempts},
               {"acceptance_rate", result.acceptance_rate},
               {"manifest", "manifest.json"}},
          0};
}

Outcome enumerate_cmd(const Options& o) {
  const auto spec = dsl::compile_file(o.spec);
  const AbstractScenario a = spec.abstract_scenario(o.scenario);
  EnumerateOptions options;
  options.max_leaves = o.max_leaves;
  options.force = o.force;
  const auto leaves = enumerate(a, options);
  const fs::path dir(o.out_dir);
  prepare_dir(dir);
  Json list = Json::array();
  for (std::size_t j = 0; j < leaves.size(); ++j) {
    const std::string name = trace_name("leaf", j);
    write_trace_csv(dir / name, leaves[j]);
    list.push_back(name);
  }
  write_schema_json(dir / "schema.json", *a.instance()->schema());
  write_json(dir / "index.json", Json{{"scenario", o.scenario}, {"count", leaves.size()}, {"traces", list}});
  return {Json{{"command", "enumerate"}, {"scenario", o.scenario}, {"count", leaves.size()}, {"index", "index.json"}},
          0};
}

Outcome monitor_cmd(const Options& o) {
  const auto spec = dsl::compile_file(o.spec);
  const AbstractScenario a = spec.abstract_scenario(o.scenario);
  const Trajectory c = read_trace_csv(o.trace, a.instance()->schema(), a.instance()->step());
  a.instance()->require_compatible(c);
  Json summary{{"command", "monitor"}, {"scenario", o.scenario}, {"samples", c.count()}};
  if (c.count() == a.instance()->horizon()) {
    const WordResult r = monitor_word(c, a);
    summary["mode"] = "word";
    summary["verdict"] = std::string(to_string(r.verdict));
    summary["violation_index"] = r.violation_index ? Json(*r.violation_index) : Json(nullptr);
    summary["violation_time"] = r.violation_time ? Json(*r.violation_time) : Json(nullptr);
    summary["reason"] = r.reason;
    return {summary, r.accepted() ? 0 : 1};
  }
  const Verdict3 v = monitor_prefix(c, a);
  summary["mode"] = "prefix";
  summary["verdict"] = std::string(to_string(v));
  return {summary, v == Verdict3::True3 ? 0 : v == Verdict3::False3 ? 1 : 2};
}

Outcome invert_cmd(const Options& o) {
  const auto spec = dsl::compile_file(o.spec);
  const LogicalScenario& l = spec.logical(o.scenario);
  const Trajectory c = read_trace_csv(o.trace, l.schema(), l.grid().step());
  InvertOptions options;
  options.force = o.force;
  const InversionResult r = invert(l, c, o.tol, options);
  return {Json{{"command", "invert"},
               {"scenario", o.scenario},
               {"verdict", r.found ? "Found" : "NotInImage"},
               {"x", point_json(l.space(), r.x)},
               {"residual", r.residual},
               {"evaluations", r.evaluations},
               {"tol", o.tol}},
          r.found ? 0 : 1};
}

Outcome encode_logical(const Options& o) {
  const auto spec = dsl::compile_file(o.spec);
  const LogicalScenario& l = spec.logical(o.scenario);
  const InstancePtr enc = make_encoding_instance(l);
  auto leaves = enumerate(*enc, Formula::truth());
  std::vector<Trajectory> image;
  for (const auto& x : l.space().points()) image.push_back(realize(l, x));
  std::sort(image.begin(), image.end());
  image.erase(std::unique(image.begin(), image.end()), image.end());
  const bool equal = leaves == image;
  if (!o.out_dir.empty()) {
    const fs::path dir(o.out_dir);
    prepare_dir(dir);
    Json list = Json::array();
    for (std::size_t j = 0; j < leaves.size(); ++j) {
      const std::string name = trace_name("leaf", j);
      write_trace_csv(dir / name, leaves[j]);
      list.push_back(name);
    }
    write_schema_json(dir / "schema.json", *l.schema());
    write_json(dir / "index.json", Json{{"scenario", o.scenario}, {"count", leaves.size()}, {"traces", list}});
  }
  return {Json{{"command", "encode-logical"},
               {"scenario", o.scenario},
               {"instance", enc->id()},
               {"points", l.space().points().size()},
               {"image", image.size()},
               {"enumerated", leaves.size()},
               {"equal", equal}},
          equal ? 0 : 1};
}

Outcome spec_complexity(const Options& o) {
  if (o.n < 1) throw ValueError("--n must be >= 1");
  const InstancePtr bin = make_binary_instance(static_cast<std::size_t>(o.n));
  EnumerateOptions options;
  options.force = o.force;
  const auto leaves = enumerate(*bin, Formula::truth(), options);
  return {Json{{"n", o.n}, {"leaves", leaves.size()}, {"closed_form", big_json(BigInt(1) << o.n)}}, 0};
}

Outcome count_rural(const Options& o) {
  const BigInt closed = count_lower_bound(o.n, o.m);
  Json summary{{"n", o.n}, {"m", o.m}, {"closed_form", big_json(closed)}};
  if (closed <= BigInt(kMaxChoices)) {
    summary["enumerated"] = enumerate_choices(o.n, o.m).size();
  } else {
    summary["enumerated"] = nullptr;
    summary["guard"] = "ComplexityError";
  }
  return {summary, 0};
}

Outcome synth_rural(const Options& o) {
  RuralConfig cfg;
  cfg.n = o.n;
  cfg.m = o.m;
  cfg.validate();
  const auto choices = enumerate_choices(o.n, o.m);
  const TimeGrid grid = rural_grid(cfg);
  const AbstractScenario a = rural_formula(cfg);
  const fs::path dir(o.out_dir);
  prepare_dir(dir);
  Json list = Json::array();
  std::size_t accepted = 0;
  for (std::size_t j = 0; j < choices.size(); ++j) {
    const Trajectory c = synthesize(choices[j], cfg, grid);
    const bool ok = monitor_word(c, a).accepted();
    accepted += ok ? 1 : 0;
    const std::string name = trace_name("choice", j);
    write_trace_csv(dir / name, c);
    list.push_back(Json{{"overtake_order", choices[j].overtake_order},
                        {"blue_passes", choices[j].blue_passes},
                        {"final_order", choices[j].final_order},
                        {"accepted", ok},
                        {"trace", name}});
  }
  write_schema_json(dir / "schema.json", *rural_schema(o.n, o.m));
  write_json(dir / "manifest.json", Json{{"n", o.n}, {"m", o.m}, {"step", cfg.step}, {"choices", list}});
  return {Json{{"command", "synth-rural"},
               {"n", o.n},
               {"m", o.m},
               {"count", choices.size()},
               {"accepted", accepted},
               {"samples", grid.count()},
               {"manifest", "manifest.json"}},
          accepted == choices.size() ? 0 : 1};
}

Json error_json(const Error& e) {
  Json j{{"error", e.name()}, {"message", e.what()}};
  if (const auto* r = dynamic_cast<const RejectionBudgetError*>(&e)) j["acceptance_rate"] = r->acceptance_rate();
  if (const auto* d = dynamic_cast<const DomainExceededError*>(&e)) j["t_sup"] = d->t_sup();
  if (const auto* s = dynamic_cast<const OutOfSpaceError*>(&e)) j["axis"] = s->axis();
  return j;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Scenario specification toolkit"};
  app.require_subcommand(1);
  Options o;

  auto spec_arg = [&](CLI::App* sub) { sub->add_option("spec", o.spec, "Scenario file")->required(); };
  auto scenario_arg = [&](CLI::App* sub) { sub->add_option("--scenario", o.scenario, "Scenario name")->required(); };
  auto seed_arg = [&](CLI::App* sub) { sub->add_option("--seed", o.seed, "Random seed")->required(); };
  auto out_arg = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("--out-dir", o.out_dir, "Output directory");
    if (required) opt->required();
  };

  auto* validate_cmd = app.add_subcommand("validate", "Parse and check a scenario file");
  spec_arg(validate_cmd);

  auto* sl = app.add_subcommand("sample-logical", "Sample a logical scenario");
  spec_arg(sl);
  scenario_arg(sl);
  sl->add_option("--count", o.count, "Number of samples")->required();
  seed_arg(sl);
  out_arg(sl, true);
  sl->add_option("--workers", o.workers, "Worker threads");

  auto* sa = app.add_subcommand("sample-abstract", "Sample an abstract scenario");
  spec_arg(sa);
  scenario_arg(sa);
  sa->add_option("--count", o.count, "Number of samples")->required();
  sa->add_option("--strategy", o.strategy, "uniform-leaf, uniform-branch or rejection");
  seed_arg(sa);
  out_arg(sa, true);
  sa->add_option("--max-attempts", o.max_attempts, "Random walks per draw");

  auto* en = app.add_subcommand("enumerate", "Enumerate an abstract scenario");
  spec_arg(en);
  scenario_arg(en);
  out_arg(en, true);
  en->add_option("--max-leaves", o.max_leaves, "Leaf estimate guard");
  en->add_flag("--force", o.force, "Ignore the leaf guard");

  auto* mo = app.add_subcommand("monitor", "Check a trace against an abstract scenario");
  spec_arg(mo);
  scenario_arg(mo);
  mo->add_option("--trace", o.trace, "Trace CSV")->required();

  auto* in = app.add_subcommand("invert", "Search parameters reproducing a trace");
  spec_arg(in);
  scenario_arg(in);
  in->add_option("--trace", o.trace, "Trace CSV")->required();
  in->add_option("--tol", o.tol, "Residual tolerance");
  in->add_flag("--force", o.force, "Permit more than six axes");

  auto* el = app.add_subcommand("encode-logical", "Encode a finite logical scenario as an abstract one");
  spec_arg(el);
  scenario_arg(el);
  out_arg(el, false);

  auto* dc = app.add_subcommand("demo-spec-complexity", "Enumerate the binary branching logic");
  dc->add_option("--n", o.n, "Horizon")->required();
  dc->add_flag("--force", o.force, "Ignore the leaf guard");

  auto* cr = app.add_subcommand("count-rural", "Count overtaking maneuver classes");
  cr->add_option("--n", o.n, "Red cars")->required();
  cr->add_option("--m", o.m, "Blue cars")->required();

  auto* sr = app.add_subcommand("synth-rural", "Synthesize one trajectory per maneuver class");
  sr->add_option("--n", o.n, "Red cars")->required();
  sr->add_option("--m", o.m, "Blue cars")->required();
  out_arg(sr, true);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  Outcome result;
  try {
    if (validate_cmd->parsed()) result = validate(o);
    else if (sl->parsed()) result = sample_logical(o);
    else if (sa->parsed()) result = sample_abstract_cmd(o);
    else if (en->parsed()) result = enumerate_cmd(o);
    else if (mo->parsed()) result = monitor_cmd(o);
    else if (in->parsed()) result = invert_cmd(o);
    else if (el->parsed()) result = encode_logical(o);
    else if (dc->parsed()) result = spec_complexity(o);
    else if (cr->parsed()) result = count_rural(o);
    else if (sr->parsed()) result = synth_rural(o);
  } catch (const dsl::ParseError& e) {
    result = {Json{{"error", e.name()}, {"diagnostics", diagnostics_json(e.diagnostics())}}, kExitData};
  } catch (const IoError& e) {
    result = {error_json(e), kExitIo};
  } catch (const Error& e) {
    result = {error_json(e), kExitDomainError};
  } catch (const fs::filesystem_error& e) {
    result = {Json{{"error", "IoError"}, {"message", e.what()}}, kExitIo};
  }
  out << result.summary.dump() << "\n";
  return result.code;
}

}  // namespace scn::cli
