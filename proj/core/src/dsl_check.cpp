#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "scn/dsl/document.hpp"
#include "scn/logic/instance.hpp"

namespace scn::dsl {

namespace {

UnitDim unit_dim(std::string_view unit) {
  if (unit == "m") return kMeter;
  if (unit == "m/s") return kMeterPerSecond;
  if (unit == "m/s^2") return kMeterPerSecondSq;
  if (unit == "s") return kSecond;
  return kDimensionless;
}

struct Type {
  bool wild = true;
  UnitDim unit;
};

struct Dims {
  std::string schema;
  std::map<std::string, UnitDim, std::less<>> units;
  std::vector<std::string> order;
};

Dims dims_of(const SchemaDecl& s) {
  Dims d;
  d.schema = s.name;
  for (const auto& dim : s.dimensions) {
    d.units.emplace(dim.name, unit_dim(dim.unit));
    d.order.push_back(dim.name);
  }
  return d;
}

Dims dims_of(const SceneSchema& s, std::string name) {
  Dims d;
  d.schema = std::move(name);
  for (const auto& dim : s.dimensions()) {
    d.units.emplace(dim.name, unit_dim(to_string(dim.unit)));
    d.order.push_back(dim.name);
  }
  return d;
}

struct ModelSpec {
  std::vector<std::string_view> required;
  std::vector<std::string_view> optional;
  std::map<std::string_view, UnitDim> units;
};

const std::map<std::string_view, ModelSpec>& builtin_models() {
  static const std::map<std::string_view, ModelSpec> table{
      {"identity", {{}, {}, {}}},
      {"constant_velocity", {{"on", "vx"}, {"vy"}, {{"vx", kMeterPerSecond}, {"vy", kMeterPerSecond}}}},
      {"constant_acceleration", {{"on", "ax"}, {"ay"}, {{"ax", kMeterPerSecondSq}, {"ay", kMeterPerSecondSq}}}},
      {"stop_at", {{"on", "clock", "t_stop"}, {}, {{"t_stop", kSecond}}}},
      {"waypoint_follower", {{"on", "clock", "waypoints"}, {}, {}}},
  };
  return table;
}

class Checker {
 public:
  explicit Checker(const SpecDocument& doc) : doc_(doc) {}

  std::vector<Diagnostic> run() {
    std::set<std::string, std::less<>> names;
    for (const auto& decl : doc_.declarations) {
      std::visit(
          [&](const auto& d) {
            if (!names.insert(d.name).second) {
              error("E201", fmt::format("duplicate declaration '{}'", d.name), d.pos, d.name);
            }
          },
          decl);
    }
    for (const auto& decl : doc_.declarations) std::visit([&](const auto& d) { check(d); }, decl);
    return std::move(out_);
  }

 private:
  void error(std::string code, std::string message, SourcePos pos, std::string token = {}) {
    out_.push_back(Diagnostic{std::move(code), std::move(message), pos.line, pos.col, std::move(token), {}});
  }

  void unit_check(const Quantity& q, const UnitDim& want, SourcePos pos, std::string_view what) {
    if (q.unit && *q.unit != want) {
      error("E301", fmt::format("{} has unit {}, expected {}", what, unit_text(*q.unit), unit_text(want)), pos);
    }
  }

  void check(const SchemaDecl& s) {
    std::set<std::string, std::less<>> seen;
    for (const auto& d : s.dimensions) {
      if (!seen.insert(d.name).second) {
        error("E214", fmt::format("duplicate dimension '{}' in schema '{}'", d.name, s.name), d.pos, d.name);
      }
    }
  }

  void check(const ModelDecl& m) { check_bind(m.bind, nullptr, nullptr); }

  void check(const FixtureDecl& f) {
    std::vector<std::string> stack{f.name};
    check_refs(f.formula, stack);
  }

  void check_refs(const FormulaSyntax& f, std::vector<std::string>& stack) {
    if (f.kind == FormulaSyntax::Kind::Ref) {
      const FixtureDecl* target = doc_.find_fixture(f.ref);
      if (!target) {
        error("E205", fmt::format("unknown fixture '{}'", f.ref), f.pos, f.ref);
        return;
      }
      if (std::find(stack.begin(), stack.end(), f.ref) != stack.end()) {
        error("E210", fmt::format("fixture '{}' refers to itself", f.ref), f.pos, f.ref);
        return;
      }
      stack.push_back(f.ref);
      check_refs(target->formula, stack);
      stack.pop_back();
      return;
    }
    for (const auto& a : f.args) check_refs(a, stack);
  }

  using Params = std::map<std::string, Type, std::less<>>;

  Type type_of(const Expr& e, const Params* params) {
    switch (e.kind) {
      case Expr::Kind::Number:
        return e.number.unit ? Type{false, *e.number.unit} : Type{};
      case Expr::Kind::Ref: {
        if (params) {
          if (auto it = params->find(e.name); it != params->end()) return it->second;
        }
        error("E204", fmt::format("unknown parameter '{}'", e.name), e.pos, e.name);
        return Type{};
      }
      case Expr::Kind::Neg: return type_of(e.args[0], params);
      case Expr::Kind::Add:
      case Expr::Kind::Sub: {
        const Type a = type_of(e.args[0], params);
        const Type b = type_of(e.args[1], params);
        if (!a.wild && !b.wild && a.unit != b.unit) {
          error("E301", fmt::format("cannot add {} and {}", unit_text(a.unit), unit_text(b.unit)), e.pos);
        }
        return a.wild ? b : a;
      }
      case Expr::Kind::Mul:
      case Expr::Kind::Div: {
        const Type a = type_of(e.args[0], params);
        const Type b = type_of(e.args[1], params);
        if (a.wild && b.wild) return Type{};
        const int sign = e.kind == Expr::Kind::Mul ? 1 : -1;
        return Type{false, UnitDim{a.unit.m + sign * b.unit.m, a.unit.s + sign * b.unit.s}};
      }
    }
    return Type{};
  }

  void expect_type(const Expr& e, const Params* params, const UnitDim& want, std::string_view what) {
    const Type t = type_of(e, params);
    if (!t.wild && t.unit != want) {
      error("E301", fmt::format("{} has unit {}, expected {}", what, unit_text(t.unit), unit_text(want)), e.pos);
    }
  }

  void check_bind(const BindDecl& b, const Dims* dims, const Params* params) {
    if (b.reference) {
      const ModelDecl* m = doc_.find_model(b.model);
      if (!m) {
        error("E209", fmt::format("unknown model '{}'", b.model), b.pos, b.model);
        return;
      }
      check_bind(m->bind, dims, nullptr);
      return;
    }
    const auto& table = builtin_models();
    const auto it = table.find(b.model);
    if (it == table.end()) {
      error("E209", fmt::format("unknown model '{}'", b.model), b.pos, b.model);
      return;
    }
    const ModelSpec& spec = it->second;
    std::set<std::string, std::less<>> seen;
    for (const auto& a : b.args) {
      const bool known = std::find(spec.required.begin(), spec.required.end(), a.name) != spec.required.end() ||
                         std::find(spec.optional.begin(), spec.optional.end(), a.name) != spec.optional.end();
      if (!known) {
        error("E213", fmt::format("model '{}' has no argument '{}'", b.model, a.name), a.pos, a.name);
        continue;
      }
      if (!seen.insert(a.name).second) {
        error("E213", fmt::format("duplicate argument '{}'", a.name), a.pos, a.name);
        continue;
      }
      if (const auto* e = std::get_if<Expr>(&a.value)) {
        const auto u = spec.units.find(a.name);
        if (u != spec.units.end()) expect_type(*e, params, u->second, fmt::format("argument '{}'", a.name));
      } else if (const auto* names = std::get_if<std::vector<std::string>>(&a.value)) {
        if (a.name == "on" && names->size() > 4) {
          error("E213", "'on' takes at most four dimensions (x, y, vx, vy)", a.pos);
        }
        if (dims) {
          for (const auto& n : *names) {
            if (n != "_" && !dims->units.contains(n)) {
              error("E203", fmt::format("unknown dimension '{}' in schema '{}'", n, dims->schema), a.pos, n);
            }
          }
        }
      } else {
        for (const auto& w : std::get<std::vector<WaypointSyntax>>(a.value)) {
          unit_check(w.txy[0], kSecond, a.pos, "waypoint time");
          unit_check(w.txy[1], kMeter, a.pos, "waypoint position");
          unit_check(w.txy[2], kMeter, a.pos, "waypoint position");
        }
      }
    }
    for (const auto& r : spec.required) {
      if (!seen.contains(r)) error("E213", fmt::format("model '{}' needs argument '{}'", b.model, r), b.pos);
    }
  }

  void check(const LogicalDecl& l) {
    Params params;
    for (const auto& p : l.params) {
      if (params.contains(p.name)) {
        error("E207", fmt::format("duplicate parameter '{}'", p.name), p.pos, p.name);
        continue;
      }
      Type t;
      for (const auto& v : p.values) {
        if (!v.unit) continue;
        if (t.wild) {
          t = Type{false, *v.unit};
        } else if (t.unit != *v.unit) {
          error("E301", fmt::format("parameter '{}' mixes units", p.name), p.pos, p.name);
        }
      }
      params.emplace(p.name, t);
      if (!p.is_set) {
        if (!std::isfinite(p.values[0].value) || !std::isfinite(p.values[1].value) ||
            p.values[0].value > p.values[1].value) {
          error("E303", fmt::format("parameter '{}' needs a finite range with lo <= hi", p.name), p.pos, p.name);
        }
      } else {
        std::set<double> distinct;
        for (const auto& v : p.values) {
          if (!std::isfinite(v.value)) error("E303", fmt::format("parameter '{}' has a non-finite value", p.name), p.pos);
          distinct.insert(v.value);
        }
        if (distinct.size() != p.values.size()) {
          error("E303", fmt::format("parameter '{}' repeats a value", p.name), p.pos, p.name);
        }
      }
      if (p.distribution) check_distribution(p);
    }

    const SchemaDecl* schema = nullptr;
    std::set<std::string, std::less<>> assigned;
    for (const auto& a : l.start) {
      const SchemaDecl* s = doc_.find_schema(a.schema);
      if (!s) {
        error("E202", fmt::format("unknown schema '{}'", a.schema), a.pos, a.schema);
        continue;
      }
      if (schema && schema != s) {
        error("E212", fmt::format("logical scenario '{}' mixes schemas '{}' and '{}'", l.name, schema->name, s->name),
              a.pos, a.schema);
        continue;
      }
      schema = s;
      const auto it = std::find_if(s->dimensions.begin(), s->dimensions.end(),
                                   [&](const DimensionDecl& d) { return d.name == a.dimension; });
      if (it == s->dimensions.end()) {
        error("E203", fmt::format("unknown dimension '{}' in schema '{}'", a.dimension, s->name), a.pos, a.dimension);
        continue;
      }
      if (!assigned.insert(a.dimension).second) {
        error("E208", fmt::format("dimension '{}' assigned twice", a.dimension), a.pos, a.dimension);
      }
      expect_type(a.value, &params, unit_dim(it->unit), fmt::format("start value of '{}'", a.dimension));
    }
    if (!schema) return;
    for (const auto& d : schema->dimensions) {
      if (!assigned.contains(d.name)) {
        error("E208", fmt::format("start block does not assign '{}'", d.name), l.pos, d.name);
      }
    }
    const Dims dims = dims_of(*schema);
    for (const auto& b : l.binds) check_bind(b, &dims, &params);
    for (const auto& s : l.shared) {
      if (!dims.units.contains(s)) error("E203", fmt::format("unknown shared dimension '{}'", s), l.pos, s);
    }
    unit_check(l.horizon, kSecond, l.pos, "horizon");
    unit_check(l.step, kSecond, l.pos, "step");
    if (!(l.step.value > 0.0) || !std::isfinite(l.step.value)) error("E303", "step must be positive", l.pos);
    if (!(l.horizon.value >= 0.0) || !std::isfinite(l.horizon.value)) error("E303", "horizon must be >= 0", l.pos);
  }

  void check_distribution(const ParamDecl& p) {
    const auto& d = *p.distribution;
    switch (d.kind) {
      case DistributionSyntax::Kind::Uniform: return;
      case DistributionSyntax::Kind::Normal:
        if (p.is_set) error("E303", fmt::format("normal distribution on discrete parameter '{}'", p.name), p.pos);
        if (!(d.args[1].value > 0.0) || !std::isfinite(d.args[0].value) || !std::isfinite(d.args[1].value)) {
          error("E303", fmt::format("parameter '{}' needs finite mu and sigma > 0", p.name), p.pos);
        }
        return;
      case DistributionSyntax::Kind::Weighted: {
        if (!p.is_set) error("E303", fmt::format("weighted distribution on range parameter '{}'", p.name), p.pos);
        if (d.args.size() != p.values.size()) {
          error("E303", fmt::format("parameter '{}' needs one weight per value", p.name), p.pos);
          return;
        }
        double sum = 0.0;
        for (const auto& w : d.args) {
          if (!(w.value >= 0.0)) error("E303", "weights must be nonnegative", p.pos);
          sum += w.value;
        }
        if (std::abs(sum - 1.0) > 1e-12) error("E303", fmt::format("weights of '{}' sum to {}", p.name, sum), p.pos);
        return;
      }
    }
  }

  void check_scene(const FormulaSyntax& f, const Dims& dims) {
    std::set<std::string, std::less<>> seen;
    for (const auto& a : f.scene) {
      const auto it = dims.units.find(a.name);
      if (it == dims.units.end()) {
        error("E203", fmt::format("unknown dimension '{}' in schema '{}'", a.name, dims.schema), a.pos, a.name);
        continue;
      }
      if (!seen.insert(a.name).second) error("E208", fmt::format("dimension '{}' assigned twice", a.name), a.pos);
      unit_check(a.value, it->second, a.pos, fmt::format("value of '{}'", a.name));
      if (!std::isfinite(a.value.value)) error("E303", fmt::format("value of '{}' is not finite", a.name), a.pos);
    }
    for (const auto& n : dims.order) {
      if (!seen.contains(n)) error("E208", fmt::format("scene does not assign '{}'", n), f.pos, n);
    }
  }

  void check_formula(const FormulaSyntax& f, const Dims& dims, std::vector<std::string>& stack) {
    using K = FormulaSyntax::Kind;
    switch (f.kind) {
      case K::Scene: check_scene(f, dims); return;
      case K::Pred:
        for (const auto& c : f.pred) {
          std::optional<UnitDim> unit;
          bool mixed = false;
          for (const auto& t : c.terms) {
            const auto it = dims.units.find(t.name);
            if (it == dims.units.end()) {
              error("E203", fmt::format("unknown dimension '{}' in schema '{}'", t.name, dims.schema), c.pos, t.name);
              continue;
            }
            if (!std::isfinite(t.coef)) error("E303", "coefficient is not finite", c.pos);
            if (unit && *unit != it->second) mixed = true;
            unit = it->second;
          }
          if (mixed) {
            error("E301", "linear expression mixes units", c.pos);
          } else if (unit) {
            unit_check(c.lo, *unit, c.pos, "lower bound");
            unit_check(c.hi, *unit, c.pos, "upper bound");
          }
          if (!(c.lo.value <= c.hi.value)) error("E303", "bounds need lo <= hi", c.pos);
        }
        return;
      case K::Ref: {
        const FixtureDecl* target = doc_.find_fixture(f.ref);
        if (!target) {
          error("E205", fmt::format("unknown fixture '{}'", f.ref), f.pos, f.ref);
          return;
        }
        if (std::find(stack.begin(), stack.end(), f.ref) != stack.end()) return;  // reported on the fixture
        if (!checked_.insert({f.ref, dims.schema}).second) return;
        stack.push_back(f.ref);
        check_formula(target->formula, dims, stack);
        stack.pop_back();
        return;
      }
      default:
        for (const auto& a : f.args) check_formula(a, dims, stack);
    }
  }

  void check(const AbstractDecl& a) {
    std::optional<Dims> dims;
    const LogicClause& c = a.logic;
    switch (c.kind) {
      case LogicClause::Kind::Example: dims = dims_of(*planar_schema(), "planar (logic ex)"); break;
      case LogicClause::Kind::Binary: dims = dims_of(*make_schema({{"bit", Unit::EnumCode}}), "bit (logic bin)"); break;
      case LogicClause::Kind::Encoding: {
        const LogicalDecl* l = doc_.find_logical(c.target);
        if (!l) {
          error("E206", fmt::format("unknown logical scenario '{}'", c.target), c.pos, c.target);
          break;
        }
        if (!l->start.empty()) {
          if (const SchemaDecl* s = doc_.find_schema(l->start.front().schema)) dims = dims_of(*s);
        }
        if (l->params.empty()) {
          break;
        }
        for (const auto& p : l->params) {
          if (!p.is_set) {
            error("E303", fmt::format("encoding logic needs finite parameters, '{}' is a range", p.name), c.pos);
          }
        }
        break;
      }
      case LogicClause::Kind::Step: {
        const SchemaDecl* s = doc_.find_schema(c.target);
        if (!s) {
          error("E202", fmt::format("unknown schema '{}'", c.target), c.pos, c.target);
          break;
        }
        dims = dims_of(*s);
        unit_check(c.horizon, kSecond, c.pos, "horizon");
        unit_check(c.step, kSecond, c.pos, "step");
        if (!(c.step.value > 0.0) || !std::isfinite(c.step.value)) error("E303", "step must be positive", c.pos);
        if (!(c.horizon.value >= 0.0) || !std::isfinite(c.horizon.value)) {
          error("E303", "horizon must be >= 0", c.pos);
        }
        std::set<std::string, std::less<>> owned;
        for (const auto& actor : c.actors) {
          for (const auto& d : actor.dims) {
            if (!dims->units.contains(d)) {
              error("E203", fmt::format("unknown dimension '{}' in schema '{}'", d, s->name), actor.pos, d);
            } else if (!owned.insert(d).second) {
              error("E203", fmt::format("dimension '{}' is owned by two actors", d), actor.pos, d);
            }
          }
          for (const auto& q : actor.ax) unit_check(q, kMeterPerSecondSq, actor.pos, "ax");
          for (const auto& q : actor.ay) unit_check(q, kMeterPerSecondSq, actor.pos, "ay");
          for (const auto& q : actor.lane) unit_check(q, kMeter, actor.pos, "lane offset");
        }
        for (const auto& st : c.start) check_scene(st, *dims);
        break;
      }
    }
    std::vector<std::string> stack;
    if (!dims) {
      for (const auto& w : a.world) check_refs(w, stack);
      check_refs(a.constraint, stack);
      return;
    }
    for (const auto& w : a.world) check_formula(w, *dims, stack);
    check_formula(a.constraint, *dims, stack);
  }

  const SpecDocument& doc_;
  std::vector<Diagnostic> out_;
  std::set<std::pair<std::string, std::string>> checked_;
};

}  // namespace

std::vector<Diagnostic> check(const SpecDocument& document) { return Checker(document).run(); }

}  // namespace scn::dsl
