#include "scn/dsl/compile.hpp"

#include <fmt/format.h>

#include "scn/core/trace_io.hpp"
#include "scn/dynamics/family.hpp"
#include "scn/logic/instance.hpp"

namespace scn::dsl {

namespace {

std::string summarize(const std::vector<Diagnostic>& diagnostics) {
  if (diagnostics.empty()) return "invalid document";
  std::string out = format_diagnostic(diagnostics.front());
  if (diagnostics.size() > 1) out += fmt::format(" (and {} more)", diagnostics.size() - 1);
  return out;
}

using Env = std::map<std::string, double, std::less<>>;

double eval(const Expr& e, const Env& env) {
  switch (e.kind) {
    case Expr::Kind::Number: return e.number.value;
    case Expr::Kind::Ref: {
      const auto it = env.find(e.name);
      if (it == env.end()) throw ValueError(fmt::format("unknown parameter '{}'", e.name));
      return it->second;
    }
    case Expr::Kind::Neg: return -eval(e.args[0], env);
    case Expr::Kind::Add: return eval(e.args[0], env) + eval(e.args[1], env);
    case Expr::Kind::Sub: return eval(e.args[0], env) - eval(e.args[1], env);
    case Expr::Kind::Mul: return eval(e.args[0], env) * eval(e.args[1], env);
    case Expr::Kind::Div: return eval(e.args[0], env) / eval(e.args[1], env);
  }
  return 0.0;
}

const BindArg* find_arg(const BindDecl& b, std::string_view name) {
  for (const auto& a : b.args) {
    if (a.name == name) return &a;
  }
  return nullptr;
}

double scalar_arg(const BindDecl& b, std::string_view name, const Env& env, double fallback) {
  const BindArg* a = find_arg(b, name);
  if (!a) return fallback;
  return eval(std::get<Expr>(a->value), env);
}

PlanarBinding planar_binding(const BindDecl& b) {
  PlanarBinding p;
  if (const BindArg* on = find_arg(b, "on")) {
    const auto& dims = std::get<std::vector<std::string>>(on->value);
    std::optional<std::string>* slots[] = {nullptr, &p.y, &p.vx, &p.vy};
    for (std::size_t i = 0; i < dims.size() && i < 4; ++i) {
      if (dims[i] == "_") continue;
      if (i == 0) {
        p.x = dims[i];
      } else {
        *slots[i] = dims[i];
      }
    }
  }
  if (const BindArg* clock = find_arg(b, "clock")) {
    p.clock = std::get<std::vector<std::string>>(clock->value).front();
  }
  if (p.x.empty()) throw SchemaError(fmt::format("model '{}' needs an x dimension in 'on'", b.model));
  return p;
}

DeterministicModel build_model(const BindDecl& b, const SchemaPtr& schema, const Env& env) {
  if (b.model == "identity") return identity_model(schema);
  const PlanarBinding binding = planar_binding(b);
  if (b.model == "constant_velocity") {
    return constant_velocity(schema, binding, scalar_arg(b, "vx", env, 0.0), scalar_arg(b, "vy", env, 0.0));
  }
  if (b.model == "constant_acceleration") {
    return constant_acceleration(schema, binding, scalar_arg(b, "ax", env, 0.0), scalar_arg(b, "ay", env, 0.0));
  }
  if (b.model == "stop_at") return stop_at(schema, binding, scalar_arg(b, "t_stop", env, 0.0));
  if (b.model == "waypoint_follower") {
    std::vector<Waypoint> wps;
    for (const auto& w : std::get<std::vector<WaypointSyntax>>(find_arg(b, "waypoints")->value)) {
      wps.push_back(Waypoint{w.txy[0].value, w.txy[1].value, w.txy[2].value});
    }
    return waypoint_follower(schema, binding, std::move(wps));
  }
  throw ValueError(fmt::format("unknown model '{}'", b.model));
}

SchemaPtr build_schema(const SchemaDecl& s) {
  std::vector<Dimension> dims;
  for (const auto& d : s.dimensions) dims.push_back(Dimension{d.name, *parse_unit(d.unit)});
  return make_schema(std::move(dims));
}

std::vector<double> values_of(const std::vector<Quantity>& qs) {
  std::vector<double> out;
  for (const auto& q : qs) out.push_back(q.value);
  return out;
}

Scene scene_of(const FormulaSyntax& f, const SchemaPtr& schema) {
  std::vector<double> values(schema->size(), 0.0);
  for (const auto& a : f.scene) values[schema->index_of(a.name)] = a.value.value;
  return Scene(schema, std::move(values));
}

}  // namespace

ParseError::ParseError(std::vector<Diagnostic> diagnostics)
    : Error("ParseError", summarize(diagnostics)), diagnostics_(std::move(diagnostics)) {}

CompiledSpec::CompiledSpec(SpecDocument document) : document_(std::move(document)) {
  for (const auto& decl : document_.declarations) {
    if (const auto* s = std::get_if<SchemaDecl>(&decl)) schemas_.emplace(s->name, build_schema(*s));
  }
  for (const auto& decl : document_.declarations) {
    const auto* l = std::get_if<LogicalDecl>(&decl);
    if (!l) continue;
    std::vector<Axis> axes;
    std::vector<Marginal> marginals;
    for (const auto& p : l->params) {
      if (p.is_set) {
        axes.emplace_back(DiscreteAxis{p.name, values_of(p.values)});
      } else {
        axes.emplace_back(ContinuousAxis{p.name, p.values[0].value, p.values[1].value});
      }
      if (!p.distribution || p.distribution->kind == DistributionSyntax::Kind::Uniform) {
        marginals.emplace_back(UniformMarginal{});
      } else if (p.distribution->kind == DistributionSyntax::Kind::Normal) {
        marginals.emplace_back(TruncatedNormalMarginal{p.distribution->args[0].value, p.distribution->args[1].value});
      } else {
        marginals.emplace_back(DiscreteWeightedMarginal{values_of(p.distribution->args)});
      }
    }
    const SchemaPtr schema = this->schema(l->start.front().schema);
    std::vector<BindDecl> binds;
    for (const auto& b : l->binds) binds.push_back(b.reference ? document_.find_model(b.model)->bind : b);
    std::vector<std::size_t> shared;
    for (const auto& s : l->shared) shared.push_back(schema->index_of(s));
    std::vector<std::string> names;
    for (const auto& p : l->params) names.push_back(p.name);
    const double step = l->step.value;

    Binder binder = [schema, binds, shared, names, step, start = l->start](std::span<const double> x) {
      Env env;
      for (std::size_t i = 0; i < names.size() && i < x.size(); ++i) env[names[i]] = x[i];
      std::vector<double> values(schema->size(), 0.0);
      for (const auto& a : start) values[schema->index_of(a.dimension)] = eval(a.value, env);
      std::vector<DeterministicModel> models;
      for (const auto& b : binds) models.push_back(build_model(b, schema, env));
      return Binding{Scene(schema, std::move(values)), combine(std::move(models), step, shared)};
    };
    ParameterSpace space(std::move(axes));
    ParameterDistribution dist(std::move(marginals));
    dist.validate(space);
    auto scenario = std::make_shared<const LogicalScenario>(l->name, std::move(space), std::move(binder),
                                                            TimeGrid::over(l->horizon.value, step));
    logicals_.emplace(l->name, Logical{std::move(scenario), std::move(dist)});
  }
}

SchemaPtr CompiledSpec::schema(std::string_view name) const {
  const auto it = schemas_.find(name);
  if (it == schemas_.end()) throw ValueError(fmt::format("unknown schema '{}'", name));
  return it->second;
}

const LogicalScenario& CompiledSpec::logical(std::string_view name) const {
  const auto it = logicals_.find(name);
  if (it == logicals_.end()) throw ValueError(fmt::format("unknown logical scenario '{}'", name));
  return *it->second.scenario;
}

const ParameterDistribution& CompiledSpec::distribution(std::string_view name) const {
  const auto it = logicals_.find(name);
  if (it == logicals_.end()) throw ValueError(fmt::format("unknown logical scenario '{}'", name));
  return it->second.distribution;
}

Formula CompiledSpec::fixture(std::string_view name, const SchemaPtr& schema) const {
  const FixtureDecl* f = document_.find_fixture(name);
  if (!f) throw ValueError(fmt::format("unknown fixture '{}'", name));
  return formula(f->formula, schema);
}

Formula CompiledSpec::formula(const FormulaSyntax& f, const SchemaPtr& schema) const {
  using K = FormulaSyntax::Kind;
  switch (f.kind) {
    case K::True: return Formula::truth();
    case K::False: return Formula::falsity();
    case K::Ref: return fixture(f.ref, schema);
    case K::Scene: return Formula::scene(scene_of(f, schema));
    case K::Pred: {
      std::vector<LinearConstraint> constraints;
      for (const auto& c : f.pred) {
        LinearConstraint lc;
        for (const auto& t : c.terms) lc.terms.push_back(LinearTerm{schema->index_of(t.name), t.coef});
        lc.lo = c.lo.value;
        lc.hi = c.hi.value;
        constraints.push_back(std::move(lc));
      }
      return Formula::atom(ScenePredicate(schema, std::move(constraints)));
    }
    case K::And: return Formula::conj(formula(f.args[0], schema), formula(f.args[1], schema));
    case K::Or: return Formula::disj(formula(f.args[0], schema), formula(f.args[1], schema));
    case K::Next: return Formula::next(formula(f.args[0], schema));
    case K::Eventually: return Formula::eventually(formula(f.args[0], schema), f.within);
    case K::Always: return Formula::always(formula(f.args[0], schema), f.within);
  }
  return Formula::truth();
}

AbstractScenario CompiledSpec::abstract_scenario(std::string_view name) const {
  const AbstractDecl* a = document_.find_abstract(name);
  if (!a) throw ValueError(fmt::format("unknown abstract scenario '{}'", name));
  const LogicClause& c = a->logic;
  InstancePtr instance;
  switch (c.kind) {
    case LogicClause::Kind::Example: instance = make_example_instance(); break;
    case LogicClause::Kind::Binary: instance = make_binary_instance(c.n); break;
    case LogicClause::Kind::Encoding: instance = make_encoding_instance(logical(c.target)); break;
    case LogicClause::Kind::Step: {
      StepLogicConfig config;
      config.id = a->name;
      config.schema = schema(c.target);
      config.step = c.step.value;
      config.horizon = TimeGrid::over(c.horizon.value, c.step.value).count();
      for (const auto& actor : c.actors) {
        const auto& s = *config.schema;
        config.actors.push_back(StepActor{actor.name, s.index_of(actor.dims[0]), s.index_of(actor.dims[1]),
                                          s.index_of(actor.dims[2]), s.index_of(actor.dims[3]), values_of(actor.ax),
                                          values_of(actor.ay), values_of(actor.lane)});
      }
      if (!c.start.empty()) {
        std::vector<std::vector<double>> start;
        for (const auto& s : c.start) {
          const Scene scene = scene_of(s, config.schema);
          start.emplace_back(scene.values().begin(), scene.values().end());
        }
        config.start = std::move(start);
      }
      instance = make_step_instance(std::move(config));
      break;
    }
  }
  std::vector<Formula> world;
  for (const auto& w : a->world) world.push_back(formula(w, instance->schema()));
  return AbstractScenario(formula(a->constraint, instance->schema()), std::move(world), instance);
}

std::vector<std::string> CompiledSpec::logical_names() const {
  std::vector<std::string> out;
  for (const auto& decl : document_.declarations) {
    if (const auto* l = std::get_if<LogicalDecl>(&decl)) out.push_back(l->name);
  }
  return out;
}

std::vector<std::string> CompiledSpec::abstract_names() const {
  std::vector<std::string> out;
  for (const auto& decl : document_.declarations) {
    if (const auto* a = std::get_if<AbstractDecl>(&decl)) out.push_back(a->name);
  }
  return out;
}

CompiledSpec compile(std::string_view text) {
  ParseResult r = parse(text);
  if (!r.ok()) throw ParseError(std::move(r.diagnostics));
  return CompiledSpec(std::move(*r.document));
}

CompiledSpec compile_file(const std::filesystem::path& path) { return compile(read_text_file(path)); }

}  // namespace scn::dsl
