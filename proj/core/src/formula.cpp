#include "scn/logic/formula.hpp"

#include <bit>
#include <cmath>
#include <functional>

#include <fmt/format.h>

#include "scn/core/trace_io.hpp"
#include "scn/error.hpp"

namespace scn {

double LinearConstraint::evaluate(std::span<const double> values) const {
  double sum = 0.0;
  for (const auto& t : terms) sum += t.coef * values[t.dim];
  return sum;
}

ScenePredicate::ScenePredicate(SchemaPtr schema, std::vector<LinearConstraint> constraints)
    : schema_(std::move(schema)), constraints_(std::move(constraints)) {
  if (!schema_) throw SchemaError("predicate without schema");
  for (const auto& c : constraints_) {
    if (std::isnan(c.lo) || std::isnan(c.hi) || c.lo > c.hi) throw ValueError("predicate bounds need lo <= hi");
    if (c.terms.empty()) throw ValueError("predicate constraint without terms");
    for (const auto& t : c.terms) {
      if (t.dim >= schema_->size()) throw SchemaError("predicate dimension outside schema");
      if (!std::isfinite(t.coef)) throw ValueError("predicate coefficients must be finite");
    }
  }
}

ScenePredicate ScenePredicate::interval(SchemaPtr schema, std::string_view dimension, double lo, double hi) {
  const auto d = schema->index_of(dimension);
  return ScenePredicate(std::move(schema), {LinearConstraint{{{d, 1.0}}, lo, hi}});
}

bool ScenePredicate::holds(std::span<const double> values) const {
  for (const auto& c : constraints_) {
    const double v = c.evaluate(values);
    if (!(v >= c.lo && v <= c.hi)) return false;
  }
  return true;
}

bool operator==(const ScenePredicate& a, const ScenePredicate& b) {
  return a.constraints_ == b.constraints_ && same_schema(a.schema_, b.schema_);
}

std::string_view to_string(Verdict3 v) {
  switch (v) {
    case Verdict3::True3: return "True3";
    case Verdict3::False3: return "False3";
    case Verdict3::Unknown3: return "Unknown3";
  }
  return "?";
}

struct FormulaNode {
  Op op = Op::True;
  std::optional<std::size_t> within;
  std::optional<ScenePredicate> predicate;
  std::vector<double> target;
  SchemaPtr schema;
  std::optional<Formula> a;
  std::optional<Formula> b;
  std::size_t hash = 0;
  std::size_t depth = 1;
};

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t hash_double(double v) { return std::hash<std::uint64_t>{}(std::bit_cast<std::uint64_t>(v == 0.0 ? 0.0 : v)); }

std::shared_ptr<FormulaNode> node(Op op) {
  auto n = std::make_shared<FormulaNode>();
  n->op = op;
  return n;
}

}  // namespace

Formula Formula::truth() {
  static const Formula t = [] {
    auto n = node(Op::True);
    n->hash = mix(0, static_cast<std::size_t>(Op::True));
    return Formula(n);
  }();
  return t;
}

Formula Formula::falsity() {
  static const Formula f = [] {
    auto n = node(Op::False);
    n->hash = mix(0, static_cast<std::size_t>(Op::False));
    return Formula(n);
  }();
  return f;
}

Formula Formula::atom(ScenePredicate predicate) {
  auto n = node(Op::Atom);
  std::size_t h = mix(0, static_cast<std::size_t>(Op::Atom));
  for (const auto& c : predicate.constraints()) {
    for (const auto& t : c.terms) h = mix(mix(h, t.dim), hash_double(t.coef));
    h = mix(mix(h, hash_double(c.lo)), hash_double(c.hi));
  }
  n->schema = predicate.schema();
  n->predicate = std::move(predicate);
  n->hash = h;
  return Formula(n);
}

Formula Formula::scene(const Scene& target) {
  auto n = node(Op::SceneConst);
  n->target.assign(target.values().begin(), target.values().end());
  n->schema = target.schema();
  std::size_t h = mix(0, static_cast<std::size_t>(Op::SceneConst));
  for (double v : n->target) h = mix(h, hash_double(v));
  n->hash = h;
  return Formula(n);
}

namespace {

void binary(Op op, Formula a, Formula b, FormulaNode& n) {
  n.hash = mix(mix(mix(0, static_cast<std::size_t>(op)), a.hash()), b.hash());
  n.depth = 1 + std::max(a.depth(), b.depth());
  n.a = std::move(a);
  n.b = std::move(b);
}

}  // namespace

Formula Formula::conj(Formula a, Formula b) {
  auto n = node(Op::And);
  binary(Op::And, std::move(a), std::move(b), *n);
  return Formula(n);
}

Formula Formula::disj(Formula a, Formula b) {
  auto n = node(Op::Or);
  binary(Op::Or, std::move(a), std::move(b), *n);
  return Formula(n);
}

namespace {

void unary(Op op, Formula a, std::optional<std::size_t> within, FormulaNode& n) {
  n.hash = mix(mix(mix(0, static_cast<std::size_t>(op)), a.hash()), within ? *within + 1 : 0);
  n.depth = 1 + a.depth();
  n.within = within;
  n.a = std::move(a);
}

}  // namespace

Formula Formula::next(Formula a) {
  auto n = node(Op::Next);
  unary(Op::Next, std::move(a), std::nullopt, *n);
  return Formula(n);
}

Formula Formula::eventually(Formula a, std::optional<std::size_t> within) {
  auto n = node(Op::Eventually);
  unary(Op::Eventually, std::move(a), within, *n);
  return Formula(n);
}

Formula Formula::always(Formula a, std::optional<std::size_t> within) {
  auto n = node(Op::Always);
  unary(Op::Always, std::move(a), within, *n);
  return Formula(n);
}

Formula Formula::conj_all(std::span<const Formula> parts) {
  if (parts.empty()) return truth();
  Formula out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out = conj(out, parts[i]);
  return out;
}

Op Formula::op() const noexcept { return node_->op; }

const Formula& Formula::left() const {
  if (!node_->a) throw ValueError("formula node has no operand");
  return *node_->a;
}

const Formula& Formula::right() const {
  if (!node_->b) throw ValueError("formula node has no right operand");
  return *node_->b;
}

std::optional<std::size_t> Formula::within() const { return node_->within; }

const ScenePredicate& Formula::predicate() const {
  if (!node_->predicate) throw ValueError("formula node is not an atom");
  return *node_->predicate;
}

std::span<const double> Formula::target() const { return node_->target; }
const SchemaPtr& Formula::node_schema() const { return node_->schema; }
std::size_t Formula::hash() const noexcept { return node_->hash; }
std::size_t Formula::depth() const noexcept { return node_->depth; }

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.op != y.op || x.hash != y.hash || x.within != y.within) return false;
  switch (x.op) {
    case Op::True:
    case Op::False: return true;
    case Op::Atom: return *x.predicate == *y.predicate;
    case Op::SceneConst: {
      if (x.target.size() != y.target.size()) return false;
      for (std::size_t i = 0; i < x.target.size(); ++i) {
        if (std::bit_cast<std::uint64_t>(x.target[i]) != std::bit_cast<std::uint64_t>(y.target[i])) return false;
      }
      return same_schema(x.schema, y.schema);
    }
    case Op::And:
    case Op::Or: return *x.a == *y.a && *x.b == *y.b;
    case Op::Next:
    case Op::Eventually:
    case Op::Always: return *x.a == *y.a;
  }
  return false;
}

Formula make_and(const Formula& a, const Formula& b) {
  if (a.is_false() || b.is_false()) return Formula::falsity();
  if (a.is_true()) return b;
  if (b.is_true()) return a;
  if (a == b) return a;
  return Formula::conj(a, b);
}

Formula make_or(const Formula& a, const Formula& b) {
  if (a.is_true() || b.is_true()) return Formula::truth();
  if (a.is_false()) return b;
  if (b.is_false()) return a;
  if (a == b) return a;
  return Formula::disj(a, b);
}

Formula progress(const Formula& f, std::span<const double> scene) {
  switch (f.op()) {
    case Op::True:
    case Op::False: return f;
    case Op::Atom: return f.predicate().holds(scene) ? Formula::truth() : Formula::falsity();
    case Op::SceneConst:
      return scenes_match(scene, f.target(), kSceneConstTolerance) ? Formula::truth() : Formula::falsity();
    case Op::And: {
      const Formula l = progress(f.left(), scene);
      if (l.is_false()) return l;
      return make_and(l, progress(f.right(), scene));
    }
    case Op::Or: {
      const Formula l = progress(f.left(), scene);
      if (l.is_true()) return l;
      return make_or(l, progress(f.right(), scene));
    }
    case Op::Next:
      // strong next: the operand needs a position of its own
      return f.sub().is_false() ? f.sub() : Formula::eventually(f.sub(), 0);
    case Op::Eventually: {
      const Formula now = progress(f.sub(), scene);
      const auto k = f.within();
      if (!k) return make_or(now, f);
      if (*k == 0) return now;
      return make_or(now, Formula::eventually(f.sub(), *k - 1));
    }
    case Op::Always: {
      const Formula now = progress(f.sub(), scene);
      const auto k = f.within();
      if (!k) return make_and(now, f);
      if (*k == 0) return now;
      return make_and(now, Formula::always(f.sub(), *k - 1));
    }
  }
  return Formula::falsity();
}

bool finalize(const Formula& f) {
  switch (f.op()) {
    case Op::True:
    case Op::Always: return true;
    case Op::False:
    case Op::Atom:
    case Op::SceneConst:
    case Op::Next:
    case Op::Eventually: return false;
    case Op::And: return finalize(f.left()) && finalize(f.right());
    case Op::Or: return finalize(f.left()) || finalize(f.right());
  }
  return false;
}

Verdict3 residual_verdict(const Formula& residual, std::size_t length, std::size_t horizon) {
  if (residual.is_true()) return Verdict3::True3;
  if (residual.is_false()) return Verdict3::False3;
  if (length >= horizon) return finalize(residual) ? Verdict3::True3 : Verdict3::False3;
  return Verdict3::Unknown3;
}

void require_formula_schema(const Formula& f, const SchemaPtr& schema) {
  switch (f.op()) {
    case Op::Atom:
    case Op::SceneConst:
      if (!same_schema(f.node_schema(), schema)) throw SchemaError("formula refers to a different scene schema");
      return;
    case Op::And:
    case Op::Or:
      require_formula_schema(f.left(), schema);
      require_formula_schema(f.right(), schema);
      return;
    case Op::Next:
    case Op::Eventually:
    case Op::Always: require_formula_schema(f.sub(), schema); return;
    default: return;
  }
}

std::string to_string(const ScenePredicate& p) {
  std::string out = "pred(";
  const auto& schema = *p.schema();
  for (std::size_t i = 0; i < p.constraints().size(); ++i) {
    const auto& c = p.constraints()[i];
    if (i > 0) out += ", ";
    for (std::size_t j = 0; j < c.terms.size(); ++j) {
      const auto& t = c.terms[j];
      const auto& name = schema[t.dim].name;
      if (j == 0) {
        if (t.coef == 1.0) {
          out += name;
        } else if (t.coef == -1.0) {
          out += "-" + name;
        } else {
          out += fmt::format("{}*{}", format_real(t.coef), name);
        }
      } else if (t.coef == 1.0) {
        out += " + " + name;
      } else if (t.coef == -1.0) {
        out += " - " + name;
      } else if (t.coef < 0.0) {
        out += fmt::format(" - {}*{}", format_real(-t.coef), name);
      } else {
        out += fmt::format(" + {}*{}", format_real(t.coef), name);
      }
    }
    out += fmt::format(" in [{}, {}]", format_real(c.lo), format_real(c.hi));
  }
  return out + ")";
}

std::string to_string(const Formula& f) {
  switch (f.op()) {
    case Op::True: return "true";
    case Op::False: return "false";
    case Op::Atom: return to_string(f.predicate());
    case Op::SceneConst: {
      std::string out = "scene(";
      const auto& schema = *f.node_schema();
      for (std::size_t i = 0; i < schema.size(); ++i) {
        if (i > 0) out += ", ";
        out += schema[i].name + "=" + format_real(f.target()[i]);
      }
      return out + ")";
    }
    case Op::And: return "(" + to_string(f.left()) + " and " + to_string(f.right()) + ")";
    case Op::Or: return "(" + to_string(f.left()) + " or " + to_string(f.right()) + ")";
    case Op::Next: return "next " + to_string(f.sub());
    case Op::Eventually:
      return f.within() ? fmt::format("eventually[<={}] {}", *f.within(), to_string(f.sub()))
                        : "eventually " + to_string(f.sub());
    case Op::Always:
      return f.within() ? fmt::format("always[<={}] {}", *f.within(), to_string(f.sub()))
                        : "always " + to_string(f.sub());
  }
  return "?";
}

}  // namespace scn
