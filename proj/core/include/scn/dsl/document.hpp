#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace scn::dsl {

/// Exponents of meter and second.
struct UnitDim {
  int m = 0;
  int s = 0;

  friend bool operator==(const UnitDim&, const UnitDim&) = default;
};

inline constexpr UnitDim kMeter{1, 0};
inline constexpr UnitDim kMeterPerSecond{1, -1};
inline constexpr UnitDim kMeterPerSecondSq{1, -2};
inline constexpr UnitDim kSecond{0, 1};
inline constexpr UnitDim kDimensionless{0, 0};

std::string unit_text(const UnitDim& u);

/// A number in SI units; `unit` is empty for a bare number, which fits any
/// unit.
struct Quantity {
  double value = 0.0;
  std::optional<UnitDim> unit;

  friend bool operator==(const Quantity& a, const Quantity& b);
};

struct SourcePos {
  int line = 0;
  int col = 0;
};

struct Expr {
  enum class Kind { Number, Ref, Neg, Add, Sub, Mul, Div };
  Kind kind = Kind::Number;
  Quantity number;
  std::string name;
  std::vector<Expr> args;
  SourcePos pos;

  friend bool operator==(const Expr& a, const Expr& b) {
    return a.kind == b.kind && a.number == b.number && a.name == b.name && a.args == b.args;
  }
};

struct LinearTermSyntax {
  double coef = 1.0;
  std::string name;

  friend bool operator==(const LinearTermSyntax&, const LinearTermSyntax&) = default;
};

struct ConstraintSyntax {
  std::vector<LinearTermSyntax> terms;
  Quantity lo;
  Quantity hi;
  SourcePos pos;

  friend bool operator==(const ConstraintSyntax& a, const ConstraintSyntax& b) {
    return a.terms == b.terms && a.lo == b.lo && a.hi == b.hi;
  }
};

struct Assignment {
  std::string name;
  Quantity value;
  SourcePos pos;

  friend bool operator==(const Assignment& a, const Assignment& b) { return a.name == b.name && a.value == b.value; }
};

struct FormulaSyntax {
  enum class Kind { True, False, Scene, Pred, And, Or, Next, Eventually, Always, Ref };
  Kind kind = Kind::True;
  std::optional<std::size_t> within;
  std::vector<Assignment> scene;
  std::vector<ConstraintSyntax> pred;
  std::string ref;
  std::vector<FormulaSyntax> args;
  SourcePos pos;

  friend bool operator==(const FormulaSyntax& a, const FormulaSyntax& b) {
    return a.kind == b.kind && a.within == b.within && a.scene == b.scene && a.pred == b.pred && a.ref == b.ref &&
           a.args == b.args;
  }
};

struct DimensionDecl {
  std::string name;
  std::string unit;  ///< canonical spelling, see scn::to_string(Unit)
  SourcePos pos;

  friend bool operator==(const DimensionDecl& a, const DimensionDecl& b) { return a.name == b.name && a.unit == b.unit; }
};

struct SchemaDecl {
  std::string name;
  std::vector<DimensionDecl> dimensions;
  SourcePos pos;

  friend bool operator==(const SchemaDecl& a, const SchemaDecl& b) {
    return a.name == b.name && a.dimensions == b.dimensions;
  }
};

struct DistributionSyntax {
  enum class Kind { Uniform, Normal, Weighted };
  Kind kind = Kind::Uniform;
  std::vector<Quantity> args;

  friend bool operator==(const DistributionSyntax&, const DistributionSyntax&) = default;
};

struct ParamDecl {
  std::string name;
  bool is_set = false;
  /// range: {lo, hi}; set: the values.
  std::vector<Quantity> values;
  std::optional<DistributionSyntax> distribution;
  SourcePos pos;

  friend bool operator==(const ParamDecl& a, const ParamDecl& b) {
    return a.name == b.name && a.is_set == b.is_set && a.values == b.values && a.distribution == b.distribution;
  }
};

struct StartAssignment {
  std::string schema;
  std::string dimension;
  Expr value;
  SourcePos pos;

  friend bool operator==(const StartAssignment& a, const StartAssignment& b) {
    return a.schema == b.schema && a.dimension == b.dimension && a.value == b.value;
  }
};

struct WaypointSyntax {
  std::array<Quantity, 3> txy;

  friend bool operator==(const WaypointSyntax&, const WaypointSyntax&) = default;
};

struct BindArg {
  std::string name;
  /// Expression, dimension tuple (on=..., clock=...) or waypoint list.
  std::variant<Expr, std::vector<std::string>, std::vector<WaypointSyntax>> value;
  SourcePos pos;

  friend bool operator==(const BindArg& a, const BindArg& b) { return a.name == b.name && a.value == b.value; }
};

/// `bind name(args)` instantiates a built-in; `bind name` refers to a model
/// declaration.
struct BindDecl {
  std::string model;
  bool reference = false;
  std::vector<BindArg> args;
  SourcePos pos;

  friend bool operator==(const BindDecl& a, const BindDecl& b) {
    return a.model == b.model && a.reference == b.reference && a.args == b.args;
  }
};

struct ModelDecl {
  std::string name;
  BindDecl bind;
  SourcePos pos;

  friend bool operator==(const ModelDecl& a, const ModelDecl& b) { return a.name == b.name && a.bind == b.bind; }
};

struct LogicalDecl {
  std::string name;
  std::vector<ParamDecl> params;
  std::vector<StartAssignment> start;
  std::vector<BindDecl> binds;
  std::vector<std::string> shared;
  Quantity horizon;
  Quantity step;
  SourcePos pos;

  friend bool operator==(const LogicalDecl& a, const LogicalDecl& b) {
    return a.name == b.name && a.params == b.params && a.start == b.start && a.binds == b.binds &&
           a.shared == b.shared && a.horizon == b.horizon && a.step == b.step;
  }
};

struct ActorDecl {
  std::string name;
  std::array<std::string, 4> dims;  ///< x, y, vx, vy
  std::vector<Quantity> ax{Quantity{}};
  std::vector<Quantity> ay{Quantity{}};
  std::vector<Quantity> lane{Quantity{}};
  SourcePos pos;

  friend bool operator==(const ActorDecl& a, const ActorDecl& b) {
    return a.name == b.name && a.dims == b.dims && a.ax == b.ax && a.ay == b.ay && a.lane == b.lane;
  }
};

struct LogicClause {
  enum class Kind { Example, Binary, Encoding, Step };
  Kind kind = Kind::Example;
  std::size_t n = 0;       ///< Binary
  std::string target;      ///< Encoding: logical scenario; Step: schema
  Quantity horizon;        ///< Step
  Quantity step;           ///< Step
  std::vector<ActorDecl> actors;
  std::vector<FormulaSyntax> start;  ///< Step: start scenes
  SourcePos pos;

  friend bool operator==(const LogicClause& a, const LogicClause& b) {
    return a.kind == b.kind && a.n == b.n && a.target == b.target && a.horizon == b.horizon && a.step == b.step &&
           a.actors == b.actors && a.start == b.start;
  }
};

struct AbstractDecl {
  std::string name;
  LogicClause logic;
  std::vector<FormulaSyntax> world;
  FormulaSyntax constraint;
  SourcePos pos;

  friend bool operator==(const AbstractDecl& a, const AbstractDecl& b) {
    return a.name == b.name && a.logic == b.logic && a.world == b.world && a.constraint == b.constraint;
  }
};

struct FixtureDecl {
  std::string name;
  FormulaSyntax formula;
  SourcePos pos;

  friend bool operator==(const FixtureDecl& a, const FixtureDecl& b) {
    return a.name == b.name && a.formula == b.formula;
  }
};

using Declaration = std::variant<SchemaDecl, ModelDecl, LogicalDecl, AbstractDecl, FixtureDecl>;

struct SpecDocument {
  std::vector<Declaration> declarations;

  const SchemaDecl* find_schema(std::string_view name) const;
  const ModelDecl* find_model(std::string_view name) const;
  const LogicalDecl* find_logical(std::string_view name) const;
  const AbstractDecl* find_abstract(std::string_view name) const;
  const FixtureDecl* find_fixture(std::string_view name) const;

  friend bool operator==(const SpecDocument&, const SpecDocument&) = default;
};

/// Stable codes: E0xx lexical, E1xx syntax, E2xx resolution, E3xx type.
struct Diagnostic {
  std::string code;
  std::string message;
  int line = 0;
  int col = 0;
  std::string token;
  std::vector<std::string> expected;
};

std::string format_diagnostic(const Diagnostic& d);

struct ParseResult {
  std::optional<SpecDocument> document;
  std::vector<Diagnostic> diagnostics;

  bool ok() const noexcept { return document.has_value(); }
};

inline constexpr std::size_t kMaxNesting = 256;

/// Lexes, parses and checks a document. On any error no document is
/// returned.
ParseResult parse(std::string_view text);

/// Canonical source text; parse(print(d)) yields a document equal to d.
std::string print(const SpecDocument& document);

/// Resolution and unit checks on a syntactically valid document.
std::vector<Diagnostic> check(const SpecDocument& document);

}  // namespace scn::dsl
