#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scn/core/scene.hpp"

namespace scn {

struct LinearTerm {
  std::size_t dim = 0;
  double coef = 1.0;

  friend bool operator==(const LinearTerm&, const LinearTerm&) = default;
};

/// lo <= sum(coef * value[dim]) <= hi; either bound may be infinite.
struct LinearConstraint {
  std::vector<LinearTerm> terms;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  double evaluate(std::span<const double> values) const;
  friend bool operator==(const LinearConstraint&, const LinearConstraint&) = default;
};

/// Conjunction of closed linear constraints over one schema. A single term
/// with coefficient 1 is a per-dimension interval.
class ScenePredicate {
 public:
  ScenePredicate(SchemaPtr schema, std::vector<LinearConstraint> constraints);

  static ScenePredicate interval(SchemaPtr schema, std::string_view dimension, double lo, double hi);

  const SchemaPtr& schema() const noexcept { return schema_; }
  const std::vector<LinearConstraint>& constraints() const noexcept { return constraints_; }
  bool holds(std::span<const double> values) const;

  friend bool operator==(const ScenePredicate& a, const ScenePredicate& b);

 private:
  SchemaPtr schema_;
  std::vector<LinearConstraint> constraints_;
};

enum class Op { True, False, Atom, SceneConst, And, Or, Next, Eventually, Always };

enum class Verdict3 { True3, False3, Unknown3 };
std::string_view to_string(Verdict3 v);

/// Tolerance for matching a scene against a SceneConst target, relative to
/// max(1, |target_i|).
inline constexpr double kSceneConstTolerance = 1e-9;

struct FormulaNode;

/// Immutable scenario-logic formula. Copies share structure.
class Formula {
 public:
  static Formula truth();
  static Formula falsity();
  static Formula atom(ScenePredicate predicate);
  static Formula scene(const Scene& target);
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);
  static Formula next(Formula a);
  /// `within`: number of further steps allowed; nullopt runs to the horizon.
  static Formula eventually(Formula a, std::optional<std::size_t> within = std::nullopt);
  static Formula always(Formula a, std::optional<std::size_t> within = std::nullopt);

  /// Conjunction of a list; `true` when empty.
  static Formula conj_all(std::span<const Formula> parts);

  Op op() const noexcept;
  const Formula& left() const;
  const Formula& right() const;
  /// Operand of Next / Eventually / Always.
  const Formula& sub() const { return left(); }
  std::optional<std::size_t> within() const;
  const ScenePredicate& predicate() const;
  std::span<const double> target() const;
  /// Schema of the target of a SceneConst or the predicate of an Atom.
  const SchemaPtr& node_schema() const;

  std::size_t hash() const noexcept;
  std::size_t depth() const noexcept;
  bool is_true() const noexcept { return op() == Op::True; }
  bool is_false() const noexcept { return op() == Op::False; }

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  explicit Formula(std::shared_ptr<const FormulaNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const FormulaNode> node_;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const noexcept { return f.hash(); }
};

/// Simplifying constructors used by progression: fold constants and equal
/// operands, otherwise build the plain node.
Formula make_and(const Formula& a, const Formula& b);
Formula make_or(const Formula& a, const Formula& b);

/// Residual obligation for the remaining trace after consuming `scene`.
Formula progress(const Formula& f, std::span<const double> scene);
/// Truth value of a residual when the trace ends.
bool finalize(const Formula& f);
/// Three-valued reading of a residual at a trace of `length` samples out of
/// `horizon`.
Verdict3 residual_verdict(const Formula& residual, std::size_t length, std::size_t horizon);

/// Throws SchemaError when an atom or scene constant uses another schema.
void require_formula_schema(const Formula& f, const SchemaPtr& schema);

/// Surface syntax, parseable by the DSL.
std::string to_string(const Formula& f);
std::string to_string(const ScenePredicate& p);

}  // namespace scn
