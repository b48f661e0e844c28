#include <cmath>
#include <string>

#include <fmt/format.h>

#include "scn/core/trace_io.hpp"
#include "scn/dsl/document.hpp"

namespace scn::dsl {

namespace {

std::string number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return format_real(v);
}

std::string quantity(const Quantity& q) {
  std::string out = number(q.value);
  if (q.unit) out += " " + unit_text(*q.unit);
  return out;
}

std::string quantities(const std::vector<Quantity>& qs) {
  std::string out;
  for (std::size_t i = 0; i < qs.size(); ++i) {
    if (i > 0) out += ", ";
    out += quantity(qs[i]);
  }
  return out;
}

std::string expr(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Number: return quantity(e.number);
    case Expr::Kind::Ref: return e.name;
    case Expr::Kind::Neg: return "-" + expr(e.args[0]);
    case Expr::Kind::Add: return "(" + expr(e.args[0]) + " + " + expr(e.args[1]) + ")";
    case Expr::Kind::Sub: return "(" + expr(e.args[0]) + " - " + expr(e.args[1]) + ")";
    case Expr::Kind::Mul: return "(" + expr(e.args[0]) + " * " + expr(e.args[1]) + ")";
    case Expr::Kind::Div: return "(" + expr(e.args[0]) + " / " + expr(e.args[1]) + ")";
  }
  return {};
}

std::string term(const LinearTermSyntax& t, bool first) {
  const double c = t.coef;
  if (first) {
    if (c == 1.0) return t.name;
    if (c == -1.0) return "-" + t.name;
    return number(c) + "*" + t.name;
  }
  const bool neg = std::signbit(c);
  const double a = std::abs(c);
  std::string out = neg ? " - " : " + ";
  out += a == 1.0 ? t.name : number(a) + "*" + t.name;
  return out;
}

std::string constraint(const ConstraintSyntax& c) {
  std::string out;
  for (std::size_t i = 0; i < c.terms.size(); ++i) out += term(c.terms[i], i == 0);
  return out + " in [" + quantity(c.lo) + ", " + quantity(c.hi) + "]";
}

std::string bound(const FormulaSyntax& f) { return f.within ? fmt::format("[<={}]", *f.within) : std::string{}; }

std::string formula(const FormulaSyntax& f) {
  using K = FormulaSyntax::Kind;
  switch (f.kind) {
    case K::True: return "true";
    case K::False: return "false";
    case K::Ref: return f.ref;
    case K::Scene: {
      std::string out = "scene(";
      for (std::size_t i = 0; i < f.scene.size(); ++i) {
        if (i > 0) out += ", ";
        out += f.scene[i].name + "=" + quantity(f.scene[i].value);
      }
      return out + ")";
    }
    case K::Pred: {
      std::string out = "pred(";
      for (std::size_t i = 0; i < f.pred.size(); ++i) {
        if (i > 0) out += ", ";
        out += constraint(f.pred[i]);
      }
      return out + ")";
    }
    case K::And: return "(" + formula(f.args[0]) + " and " + formula(f.args[1]) + ")";
    case K::Or: return "(" + formula(f.args[0]) + " or " + formula(f.args[1]) + ")";
    case K::Next: return "next " + formula(f.args[0]);
    case K::Eventually: return "eventually" + bound(f) + " " + formula(f.args[0]);
    case K::Always: return "always" + bound(f) + " " + formula(f.args[0]);
  }
  return {};
}

std::string bind(const BindDecl& b) {
  if (b.reference) return b.model;
  std::string out = b.model + "(";
  for (std::size_t i = 0; i < b.args.size(); ++i) {
    const BindArg& a = b.args[i];
    if (i > 0) out += ", ";
    out += a.name + "=";
    if (const auto* e = std::get_if<Expr>(&a.value)) {
      out += expr(*e);
    } else if (const auto* dims = std::get_if<std::vector<std::string>>(&a.value)) {
      if (a.name == "clock") {
        out += dims->empty() ? std::string{} : dims->front();
      } else {
        out += "(" + fmt::format("{}", fmt::join(*dims, ", ")) + ")";
      }
    } else {
      const auto& wps = std::get<std::vector<WaypointSyntax>>(a.value);
      out += "[";
      for (std::size_t k = 0; k < wps.size(); ++k) {
        if (k > 0) out += ", ";
        out += "(" + quantity(wps[k].txy[0]) + ", " + quantity(wps[k].txy[1]) + ", " + quantity(wps[k].txy[2]) + ")";
      }
      out += "]";
    }
  }
  return out + ")";
}

void print_decl(std::string& out, const SchemaDecl& d) {
  out += "schema " + d.name + " {\n";
  for (const auto& dim : d.dimensions) out += "  " + dim.name + ": " + dim.unit + ",\n";
  out += "}\n";
}

void print_decl(std::string& out, const ModelDecl& d) { out += "model " + d.name + " = " + bind(d.bind) + "\n"; }

void print_decl(std::string& out, const LogicalDecl& d) {
  out += "logical " + d.name + " {\n";
  for (const auto& p : d.params) {
    out += "  param " + p.name + ": ";
    out += p.is_set ? "set{" + quantities(p.values) + "}" : "range(" + quantities(p.values) + ")";
    if (p.distribution) {
      switch (p.distribution->kind) {
        case DistributionSyntax::Kind::Uniform: out += " ~ uniform"; break;
        case DistributionSyntax::Kind::Normal: out += " ~ normal(" + quantities(p.distribution->args) + ")"; break;
        case DistributionSyntax::Kind::Weighted: out += " ~ weighted(" + quantities(p.distribution->args) + ")"; break;
      }
    }
    out += "\n";
  }
  out += "  start {\n";
  for (const auto& a : d.start) out += "    " + a.schema + "." + a.dimension + " = " + expr(a.value) + ",\n";
  out += "  }\n";
  for (const auto& b : d.binds) out += "  bind " + bind(b) + "\n";
  if (!d.shared.empty()) out += fmt::format("  shared {}\n", fmt::join(d.shared, ", "));
  out += "  horizon " + quantity(d.horizon) + " step " + quantity(d.step) + "\n";
  out += "}\n";
}

void print_logic(std::string& out, const LogicClause& c) {
  switch (c.kind) {
    case LogicClause::Kind::Example: out += "  logic ex\n"; return;
    case LogicClause::Kind::Binary: out += fmt::format("  logic bin(n={})\n", c.n); return;
    case LogicClause::Kind::Encoding: out += "  logic enc(" + c.target + ")\n"; return;
    case LogicClause::Kind::Step: break;
  }
  out += "  logic step " + c.target + " horizon " + quantity(c.horizon) + " step " + quantity(c.step) + " {\n";
  for (const auto& a : c.actors) {
    out += "    actor " + a.name + "(" + a.dims[0] + ", " + a.dims[1] + ", " + a.dims[2] + ", " + a.dims[3] + ")";
    out += " ax {" + quantities(a.ax) + "} ay {" + quantities(a.ay) + "} lane {" + quantities(a.lane) + "}\n";
  }
  for (const auto& s : c.start) out += "    start " + formula(s) + "\n";
  out += "  }\n";
}

void print_decl(std::string& out, const AbstractDecl& d) {
  out += "abstract " + d.name + " {\n";
  print_logic(out, d.logic);
  for (const auto& w : d.world) out += "  world " + formula(w) + "\n";
  out += "  constraint " + formula(d.constraint) + "\n";
  out += "}\n";
}

void print_decl(std::string& out, const FixtureDecl& d) { out += "fixture " + d.name + " = " + formula(d.formula) + "\n"; }

}  // namespace

std::string print(const SpecDocument& document) {
  std::string out;
  for (std::size_t i = 0; i < document.declarations.size(); ++i) {
    if (i > 0) out += "\n";
    std::visit([&](const auto& d) { print_decl(out, d); }, document.declarations[i]);
  }
  return out;
}

}  // namespace scn::dsl
