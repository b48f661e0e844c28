#include <algorithm>
#include <bit>
#include <cstdint>
#include <charconv>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "scn/core/scene.hpp"
#include "scn/dsl/document.hpp"

namespace scn::dsl {

namespace {

enum class Tok { Ident, Number, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  double value = 0.0;
  int line = 1;
  int col = 1;
};

struct Failure {
  Diagnostic diagnostic;
};

Diagnostic make_diag(std::string code, std::string message, int line, int col, std::string token = {},
                     std::vector<std::string> expected = {}) {
  return Diagnostic{std::move(code), std::move(message), line, col, std::move(token), std::move(expected)};
}

std::string printable(unsigned char c) {
  if (c >= 0x20 && c < 0x7f) return std::string(1, static_cast<char>(c));
  return fmt::format("\\x{:02x}", c);
}

bool ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }
bool digit(char c) { return c >= '0' && c <= '9'; }

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  int line = 1;
  int col = 1;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < text.size()) {
    const char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '#' || (c == '/' && i + 1 < text.size() && text[i + 1] == '/')) {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      t.kind = Tok::Ident;
      t.text = std::string(text.substr(i, j - i));
      advance(j - i);
      out.push_back(std::move(t));
      continue;
    }
    if (digit(c) || (c == '.' && i + 1 < text.size() && digit(text[i + 1]))) {
      std::size_t j = i;
      while (j < text.size() && digit(text[j])) ++j;
      if (j < text.size() && text[j] == '.') {
        ++j;
        while (j < text.size() && digit(text[j])) ++j;
      }
      if (j < text.size() && (text[j] == 'e' || text[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < text.size() && (text[k] == '+' || text[k] == '-')) ++k;
        if (k >= text.size() || !digit(text[k])) {
          throw Failure{make_diag("E002", "malformed number", line, col, std::string(text.substr(i, k - i)))};
        }
        while (k < text.size() && digit(text[k])) ++k;
        j = k;
      }
      if (j < text.size() && text[j] == '.') {
        throw Failure{make_diag("E002", "malformed number", line, col, std::string(text.substr(i, j + 1 - i)))};
      }
      t.kind = Tok::Number;
      t.text = std::string(text.substr(i, j - i));
      const auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.value);
      if (ec != std::errc{} || ptr != t.text.data() + t.text.size() || !std::isfinite(t.value)) {
        throw Failure{make_diag("E002", "number out of range", line, col, t.text)};
      }
      advance(j - i);
      out.push_back(std::move(t));
      continue;
    }
    if (c == '<' && i + 1 < text.size() && text[i + 1] == '=') {
      t.kind = Tok::Punct;
      t.text = "<=";
      advance(2);
      out.push_back(std::move(t));
      continue;
    }
    static constexpr std::string_view kSingles = "{}()[],:.=~+-*/^;";
    if (kSingles.find(c) != std::string_view::npos) {
      t.kind = Tok::Punct;
      t.text = std::string(1, c);
      advance(1);
      out.push_back(std::move(t));
      continue;
    }
    throw Failure{make_diag("E001", "unexpected character", line, col, printable(static_cast<unsigned char>(c)))};
  }
  Token end;
  end.kind = Tok::End;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

std::string quote(std::string_view s) { return fmt::format("'{}'", s); }

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  SpecDocument document() {
    SpecDocument doc;
    if (peek().kind == Tok::End) fail("E100", "expected declaration", declaration_keywords());
    while (peek().kind != Tok::End) doc.declarations.push_back(declaration());
    return doc;
  }

 private:
  static std::vector<std::string> declaration_keywords() {
    return {"'schema'", "'model'", "'logical'", "'abstract'", "'fixture'"};
  }

  const Token& peek(std::size_t ahead = 0) const { return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)]; }
  Token take() {
    Token t = peek();
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }
  SourcePos here() const { return {peek().line, peek().col}; }

  [[noreturn]] void fail(std::string code, std::string message, std::vector<std::string> expected = {}) const {
    const Token& t = peek();
    const std::string shown = t.kind == Tok::End ? "end of input" : t.text;
    throw Failure{make_diag(std::move(code), std::move(message), t.line, t.col, shown, std::move(expected))};
  }
  [[noreturn]] void unexpected(std::vector<std::string> expected) const {
    const Token& t = peek();
    std::string message =
        t.kind == Tok::End ? std::string("unexpected end of input") : fmt::format("unexpected token '{}'", t.text);
    message += fmt::format(", expected {}", fmt::join(expected, " or "));
    fail("E101", std::move(message), std::move(expected));
  }

  bool at_punct(std::string_view p, std::size_t ahead = 0) const {
    return peek(ahead).kind == Tok::Punct && peek(ahead).text == p;
  }
  bool at_word(std::string_view w, std::size_t ahead = 0) const {
    return peek(ahead).kind == Tok::Ident && peek(ahead).text == w;
  }
  bool accept_punct(std::string_view p) {
    if (!at_punct(p)) return false;
    take();
    return true;
  }
  bool accept_word(std::string_view w) {
    if (!at_word(w)) return false;
    take();
    return true;
  }
  void expect_punct(std::string_view p) {
    if (!accept_punct(p)) unexpected({quote(p)});
  }
  void expect_word(std::string_view w) {
    if (!accept_word(w)) unexpected({quote(w)});
  }
  std::string identifier() {
    if (peek().kind != Tok::Ident) unexpected({"identifier"});
    return take().text;
  }

  struct DepthGuard {
    Parser& p;
    explicit DepthGuard(Parser& parser) : p(parser) {
      if (++p.depth_ > kMaxNesting) p.fail("E103", fmt::format("nesting deeper than {}", kMaxNesting));
    }
    ~DepthGuard() { --p.depth_; }
  };

  Declaration declaration() {
    if (at_word("schema")) return schema();
    if (at_word("model")) return model();
    if (at_word("logical")) return logical();
    if (at_word("abstract")) return abstract_decl();
    if (at_word("fixture")) return fixture();
    fail("E100", "expected declaration", declaration_keywords());
  }

  std::string schema_unit() {
    if (peek().kind != Tok::Ident) unexpected({"unit"});
    const Token t = peek();
    std::string text = take().text;
    if (text == "m" && accept_punct("/")) {
      expect_word("s");
      text = "m/s";
      if (accept_punct("^")) {
        if (peek().kind != Tok::Number || peek().text != "2") unexpected({"'2'"});
        take();
        text = "m/s^2";
      }
    } else if (text == "enum" && accept_punct("-")) {
      expect_word("code");
      text = "enum-code";
    } else if (text == "enum_code") {
      text = "enum-code";
    }
    if (!parse_unit(text)) {
      throw Failure{make_diag("E302", fmt::format("unknown unit '{}'", text), t.line, t.col, text,
                              {"'m'", "'m/s'", "'m/s^2'", "'s'", "'dimensionless'", "'enum-code'"})};
    }
    return std::string(to_string(*parse_unit(text)));
  }

  SchemaDecl schema() {
    SchemaDecl d;
    d.pos = here();
    expect_word("schema");
    d.name = identifier();
    expect_punct("{");
    do {
      DimensionDecl dim;
      dim.pos = here();
      dim.name = identifier();
      expect_punct(":");
      dim.unit = schema_unit();
      d.dimensions.push_back(std::move(dim));
      accept_punct(",");
    } while (!at_punct("}"));
    expect_punct("}");
    return d;
  }

  /// Optional unit suffix after a number.
  std::optional<UnitDim> unit_suffix(double& value) {
    if (at_word("m")) {
      take();
      if (at_punct("/") && at_word("s", 1)) {
        take();
        take();
        if (accept_punct("^")) {
          if (peek().kind != Tok::Number || peek().text != "2") unexpected({"'2'"});
          take();
          return kMeterPerSecondSq;
        }
        return kMeterPerSecond;
      }
      return kMeter;
    }
    if (at_word("km") && at_punct("/", 1) && at_word("h", 2)) {
      take();
      take();
      take();
      value /= 3.6;
      return kMeterPerSecond;
    }
    if (at_word("s")) {
      take();
      return kSecond;
    }
    return std::nullopt;
  }

  Quantity quantity() {
    bool negative = false;
    while (at_punct("-") || at_punct("+")) negative = (take().text == "-") != negative;
    Quantity q;
    if (accept_word("inf")) {
      q.value = std::numeric_limits<double>::infinity();
    } else if (peek().kind == Tok::Number) {
      q.value = take().value;
    } else {
      unexpected({"number", "'inf'"});
    }
    q.unit = unit_suffix(q.value);
    if (negative) q.value = -q.value;
    return q;
  }

  Expr expr() {
    DepthGuard guard(*this);
    Expr left = term();
    while (at_punct("+") || at_punct("-")) {
      Expr e;
      e.pos = here();
      e.kind = take().text == "+" ? Expr::Kind::Add : Expr::Kind::Sub;
      e.args.push_back(std::move(left));
      e.args.push_back(term());
      left = std::move(e);
    }
    return left;
  }

  Expr term() {
    Expr left = factor();
    while (at_punct("*") || at_punct("/")) {
      Expr e;
      e.pos = here();
      e.kind = take().text == "*" ? Expr::Kind::Mul : Expr::Kind::Div;
      e.args.push_back(std::move(left));
      e.args.push_back(factor());
      left = std::move(e);
    }
    return left;
  }

  Expr factor() {
    DepthGuard guard(*this);
    Expr e;
    e.pos = here();
    if (accept_punct("-")) {
      e.kind = Expr::Kind::Neg;
      e.args.push_back(factor());
      return e;
    }
    if (accept_punct("(")) {
      Expr inner = expr();
      expect_punct(")");
      return inner;
    }
    if (peek().kind == Tok::Number) {
      e.kind = Expr::Kind::Number;
      e.number.value = take().value;
      e.number.unit = unit_suffix(e.number.value);
      return e;
    }
    if (peek().kind == Tok::Ident) {
      e.kind = Expr::Kind::Ref;
      e.name = take().text;
      return e;
    }
    unexpected({"number", "identifier", "'('", "'-'"});
  }

  std::vector<Quantity> quantity_set() {
    std::vector<Quantity> out;
    expect_punct("{");
    out.push_back(quantity());
    while (accept_punct(",")) out.push_back(quantity());
    expect_punct("}");
    return out;
  }

  BindDecl bind_body() {
    BindDecl b;
    b.pos = here();
    b.model = identifier();
    if (!accept_punct("(")) {
      b.reference = true;
      return b;
    }
    if (!at_punct(")")) {
      do {
        BindArg a;
        a.pos = here();
        a.name = identifier();
        expect_punct("=");
        if (a.name == "on") {
          std::vector<std::string> dims;
          expect_punct("(");
          dims.push_back(identifier());
          while (accept_punct(",")) dims.push_back(identifier());
          expect_punct(")");
          a.value = std::move(dims);
        } else if (a.name == "clock") {
          a.value = std::vector<std::string>{identifier()};
        } else if (a.name == "waypoints") {
          std::vector<WaypointSyntax> wps;
          expect_punct("[");
          do {
            WaypointSyntax w;
            expect_punct("(");
            w.txy[0] = quantity();
            expect_punct(",");
            w.txy[1] = quantity();
            expect_punct(",");
            w.txy[2] = quantity();
            expect_punct(")");
            wps.push_back(w);
          } while (accept_punct(","));
          expect_punct("]");
          a.value = std::move(wps);
        } else {
          a.value = expr();
        }
        b.args.push_back(std::move(a));
      } while (accept_punct(","));
    }
    expect_punct(")");
    return b;
  }

  ModelDecl model() {
    ModelDecl d;
    d.pos = here();
    expect_word("model");
    d.name = identifier();
    expect_punct("=");
    d.bind = bind_body();
    if (d.bind.reference) unexpected({"'('"});
    return d;
  }

  ParamDecl param() {
    ParamDecl p;
    p.pos = here();
    expect_word("param");
    p.name = identifier();
    expect_punct(":");
    if (accept_word("range")) {
      expect_punct("(");
      p.values.push_back(quantity());
      expect_punct(",");
      p.values.push_back(quantity());
      expect_punct(")");
    } else if (accept_word("set")) {
      p.is_set = true;
      p.values = quantity_set();
    } else {
      unexpected({"'range'", "'set'"});
    }
    if (accept_punct("~")) {
      DistributionSyntax dist;
      if (accept_word("uniform")) {
        dist.kind = DistributionSyntax::Kind::Uniform;
      } else if (accept_word("normal")) {
        dist.kind = DistributionSyntax::Kind::Normal;
        expect_punct("(");
        dist.args.push_back(quantity());
        expect_punct(",");
        dist.args.push_back(quantity());
        expect_punct(")");
      } else if (accept_word("weighted")) {
        dist.kind = DistributionSyntax::Kind::Weighted;
        expect_punct("(");
        dist.args.push_back(quantity());
        while (accept_punct(",")) dist.args.push_back(quantity());
        expect_punct(")");
      } else {
        unexpected({"'uniform'", "'normal'", "'weighted'"});
      }
      p.distribution = std::move(dist);
    }
    return p;
  }

  LogicalDecl logical() {
    LogicalDecl d;
    d.pos = here();
    expect_word("logical");
    d.name = identifier();
    expect_punct("{");
    bool has_start = false;
    bool has_horizon = false;
    while (!at_punct("}")) {
      if (at_word("param")) {
        d.params.push_back(param());
      } else if (at_word("start")) {
        if (has_start) fail("E211", "duplicate start block");
        has_start = true;
        take();
        expect_punct("{");
        do {
          StartAssignment a;
          a.pos = here();
          a.schema = identifier();
          expect_punct(".");
          a.dimension = identifier();
          expect_punct("=");
          a.value = expr();
          d.start.push_back(std::move(a));
          accept_punct(",");
        } while (!at_punct("}"));
        expect_punct("}");
      } else if (accept_word("bind")) {
        d.binds.push_back(bind_body());
      } else if (accept_word("shared")) {
        d.shared.push_back(identifier());
        while (accept_punct(",")) d.shared.push_back(identifier());
      } else if (at_word("horizon")) {
        if (has_horizon) fail("E211", "duplicate horizon clause");
        has_horizon = true;
        take();
        d.horizon = quantity();
        expect_word("step");
        d.step = quantity();
      } else {
        unexpected({"'param'", "'start'", "'bind'", "'shared'", "'horizon'", "'}'"});
      }
    }
    if (!has_start) fail("E211", fmt::format("logical scenario '{}' has no start block", d.name));
    if (d.binds.empty()) fail("E211", fmt::format("logical scenario '{}' has no bind clause", d.name));
    if (!has_horizon) fail("E211", fmt::format("logical scenario '{}' has no horizon clause", d.name));
    expect_punct("}");
    return d;
  }

  LogicClause logic_clause() {
    LogicClause c;
    c.pos = here();
    if (accept_word("ex")) {
      c.kind = LogicClause::Kind::Example;
    } else if (accept_word("bin")) {
      c.kind = LogicClause::Kind::Binary;
      expect_punct("(");
      if (at_word("n")) {
        take();
        expect_punct("=");
      }
      if (peek().kind != Tok::Number) unexpected({"integer"});
      const double v = peek().value;
      if (!(v >= 1.0 && v <= 1e9 && std::floor(v) == v)) fail("E104", "binary logic needs an integer n >= 1");
      take();
      c.n = static_cast<std::size_t>(v);
      expect_punct(")");
    } else if (accept_word("enc")) {
      c.kind = LogicClause::Kind::Encoding;
      expect_punct("(");
      c.target = identifier();
      expect_punct(")");
    } else if (accept_word("step")) {
      c.kind = LogicClause::Kind::Step;
      c.target = identifier();
      expect_word("horizon");
      c.horizon = quantity();
      expect_word("step");
      c.step = quantity();
      expect_punct("{");
      while (!accept_punct("}")) {
        if (at_word("actor")) {
          ActorDecl a;
          a.pos = here();
          take();
          a.name = identifier();
          expect_punct("(");
          for (std::size_t i = 0; i < 4; ++i) {
            if (i > 0) expect_punct(",");
            a.dims[i] = identifier();
          }
          expect_punct(")");
          while (true) {
            if (accept_word("ax")) {
              a.ax = quantity_set();
            } else if (accept_word("ay")) {
              a.ay = quantity_set();
            } else if (accept_word("lane")) {
              a.lane = quantity_set();
            } else {
              break;
            }
          }
          c.actors.push_back(std::move(a));
        } else if (accept_word("start")) {
          if (!at_word("scene")) unexpected({"'scene'"});
          c.start.push_back(primary());
        } else {
          unexpected({"'actor'", "'start'", "'}'"});
        }
      }
    } else {
      unexpected({"'ex'", "'bin'", "'enc'", "'step'"});
    }
    return c;
  }

  AbstractDecl abstract_decl() {
    AbstractDecl d;
    d.pos = here();
    expect_word("abstract");
    d.name = identifier();
    expect_punct("{");
    bool has_logic = false;
    bool has_constraint = false;
    while (!at_punct("}")) {
      if (at_word("logic")) {
        if (has_logic) fail("E211", "duplicate logic clause");
        has_logic = true;
        take();
        d.logic = logic_clause();
      } else if (accept_word("world")) {
        d.world.push_back(formula());
      } else if (at_word("constraint")) {
        if (has_constraint) fail("E211", "duplicate constraint clause");
        has_constraint = true;
        take();
        d.constraint = formula();
      } else {
        unexpected({"'logic'", "'world'", "'constraint'", "'}'"});
      }
    }
    if (!has_constraint) fail("E211", fmt::format("abstract scenario '{}' has no constraint", d.name));
    expect_punct("}");
    return d;
  }

  FixtureDecl fixture() {
    FixtureDecl d;
    d.pos = here();
    expect_word("fixture");
    d.name = identifier();
    expect_punct("=");
    d.formula = formula();
    return d;
  }

  FormulaSyntax formula() {
    DepthGuard guard(*this);
    FormulaSyntax left = conjunction();
    while (at_word("or")) {
      FormulaSyntax f;
      f.pos = here();
      take();
      f.kind = FormulaSyntax::Kind::Or;
      f.args.push_back(std::move(left));
      f.args.push_back(conjunction());
      left = std::move(f);
    }
    return left;
  }

  FormulaSyntax conjunction() {
    FormulaSyntax left = unary();
    while (at_word("and")) {
      FormulaSyntax f;
      f.pos = here();
      take();
      f.kind = FormulaSyntax::Kind::And;
      f.args.push_back(std::move(left));
      f.args.push_back(unary());
      left = std::move(f);
    }
    return left;
  }

  FormulaSyntax unary() {
    DepthGuard guard(*this);
    FormulaSyntax f;
    f.pos = here();
    if (accept_word("next")) {
      f.kind = FormulaSyntax::Kind::Next;
    } else if (accept_word("eventually")) {
      f.kind = FormulaSyntax::Kind::Eventually;
    } else if (accept_word("always")) {
      f.kind = FormulaSyntax::Kind::Always;
    } else {
      return primary();
    }
    if (f.kind != FormulaSyntax::Kind::Next && accept_punct("[")) {
      expect_punct("<=");
      if (peek().kind != Tok::Number) unexpected({"integer"});
      const double v = peek().value;
      if (!(v >= 0.0 && v <= 1e15 && std::floor(v) == v)) fail("E104", "time bound must be a nonnegative integer");
      take();
      f.within = static_cast<std::size_t>(v);
      expect_punct("]");
    }
    f.args.push_back(unary());
    return f;
  }

  ConstraintSyntax constraint() {
    ConstraintSyntax c;
    c.pos = here();
    bool first = true;
    while (true) {
      double sign = 1.0;
      if (accept_punct("-")) {
        sign = -1.0;
      } else if (!first) {
        if (!accept_punct("+")) break;
        if (accept_punct("-")) sign = -1.0;
      } else {
        accept_punct("+");
      }
      LinearTermSyntax t;
      if (peek().kind == Tok::Number) {
        t.coef = take().value;
        expect_punct("*");
      }
      t.coef *= sign;
      t.name = identifier();
      c.terms.push_back(std::move(t));
      first = false;
      if (!at_punct("+") && !at_punct("-")) break;
    }
    expect_word("in");
    expect_punct("[");
    c.lo = quantity();
    expect_punct(",");
    c.hi = quantity();
    expect_punct("]");
    return c;
  }

  FormulaSyntax primary() {
    FormulaSyntax f;
    f.pos = here();
    if (accept_punct("(")) {
      f = formula();
      expect_punct(")");
      return f;
    }
    if (accept_word("true")) {
      f.kind = FormulaSyntax::Kind::True;
      return f;
    }
    if (accept_word("false")) {
      f.kind = FormulaSyntax::Kind::False;
      return f;
    }
    if (accept_word("scene")) {
      f.kind = FormulaSyntax::Kind::Scene;
      expect_punct("(");
      do {
        Assignment a;
        a.pos = here();
        a.name = identifier();
        expect_punct("=");
        a.value = quantity();
        f.scene.push_back(std::move(a));
      } while (accept_punct(","));
      expect_punct(")");
      return f;
    }
    if (accept_word("pred")) {
      f.kind = FormulaSyntax::Kind::Pred;
      expect_punct("(");
      f.pred.push_back(constraint());
      while (accept_punct(",")) f.pred.push_back(constraint());
      expect_punct(")");
      return f;
    }
    static constexpr std::string_view kReserved[] = {"and", "or", "in", "inf", "next", "eventually", "always"};
    if (peek().kind == Tok::Ident &&
        std::find(std::begin(kReserved), std::end(kReserved), peek().text) == std::end(kReserved)) {
      f.kind = FormulaSyntax::Kind::Ref;
      f.ref = take().text;
      return f;
    }
    unexpected({"formula"});
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::size_t depth_ = 0;
};

}  // namespace

std::string unit_text(const UnitDim& u) {
  if (u == kMeter) return "m";
  if (u == kMeterPerSecond) return "m/s";
  if (u == kMeterPerSecondSq) return "m/s^2";
  if (u == kSecond) return "s";
  if (u == kDimensionless) return "1";
  return fmt::format("m^{} s^{}", u.m, u.s);
}

bool operator==(const Quantity& a, const Quantity& b) {
  return std::bit_cast<std::uint64_t>(a.value) == std::bit_cast<std::uint64_t>(b.value) && a.unit == b.unit;
}

std::string format_diagnostic(const Diagnostic& d) {
  return fmt::format("{}:{}: {} {}", d.line, d.col, d.code, d.message);
}

template <typename T>
static const T* find_decl(const SpecDocument& doc, std::string_view name) {
  for (const auto& d : doc.declarations) {
    if (const auto* p = std::get_if<T>(&d); p && p->name == name) return p;
  }
  return nullptr;
}

const SchemaDecl* SpecDocument::find_schema(std::string_view name) const { return find_decl<SchemaDecl>(*this, name); }
const ModelDecl* SpecDocument::find_model(std::string_view name) const { return find_decl<ModelDecl>(*this, name); }
const LogicalDecl* SpecDocument::find_logical(std::string_view name) const {
  return find_decl<LogicalDecl>(*this, name);
}
const AbstractDecl* SpecDocument::find_abstract(std::string_view name) const {
  return find_decl<AbstractDecl>(*this, name);
}
const FixtureDecl* SpecDocument::find_fixture(std::string_view name) const {
  return find_decl<FixtureDecl>(*this, name);
}

ParseResult parse(std::string_view text) {
  ParseResult result;
  SpecDocument doc;
  try {
    Parser parser(lex(text));
    doc = parser.document();
  } catch (const Failure& f) {
    result.diagnostics.push_back(f.diagnostic);
    return result;
  }
  result.diagnostics = check(doc);
  if (result.diagnostics.empty()) result.document = std::move(doc);
  return result;
}

}  // namespace scn::dsl
