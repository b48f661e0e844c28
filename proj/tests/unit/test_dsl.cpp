#include <string>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "generators.hpp"
#include "scn/core/trace_io.hpp"
#include "scn/dsl/compile.hpp"
#include "scn/monitor/monitor.hpp"

using namespace scn;
using namespace scn::testing;

namespace {

const char* const kFixtures[] = {"example2.scn", "inversion.scn", "binary.scn", "walk.scn", "encoding.scn"};

const char* const kPlanar = "schema planar { x: m, y: m, vx: m/s, vy: m/s }\n";

const char* const kSpeeds = R"(
schema planar { x: m, y: m, vx: m/s, vy: m/s }
logical speeds {
  param v: set{1 m/s, 2 m/s}
  start { planar.x = 0 m, planar.y = 0 m, planar.vx = v, planar.vy = 0 m/s }
  bind constant_velocity(on=(x, y), vx=v)
  horizon 1 s step 0.5 s
}
)";

std::vector<std::string> codes(std::string_view text) {
  std::vector<std::string> out;
  for (const auto& d : dsl::parse(text).diagnostics) out.push_back(d.code);
  return out;
}

std::string first_code(std::string_view text) {
  const auto r = dsl::parse(text);
  EXPECT_FALSE(r.ok()) << text;
  EXPECT_FALSE(r.document.has_value());
  return r.diagnostics.empty() ? std::string("none") : r.diagnostics.front().code;
}

std::string with_speeds(const std::string& replace_from, const std::string& replace_to) {
  std::string s = kSpeeds;
  const auto at = s.find(replace_from);
  EXPECT_NE(at, std::string::npos) << replace_from;
  s.replace(at, replace_from.size(), replace_to);
  return s;
}

}  // namespace

TEST(Parse, ShippedFixturesParse) {
  for (const char* file : kFixtures) {
    const auto r = dsl::parse(read_text_file(scenario_path(file)));
    ASSERT_TRUE(r.ok()) << file << ": " << (r.diagnostics.empty() ? "" : dsl::format_diagnostic(r.diagnostics[0]));
    EXPECT_TRUE(r.diagnostics.empty());
  }
}

TEST(Parse, PrintRoundTripsEveryFixture) {
  for (const char* file : kFixtures) {
    const auto doc = *dsl::parse(read_text_file(scenario_path(file))).document;
    const std::string text = dsl::print(doc);
    const auto again = dsl::parse(text);
    ASSERT_TRUE(again.ok()) << file << "\n" << text;
    EXPECT_EQ(*again.document, doc) << file;
    EXPECT_EQ(dsl::print(*again.document), text) << file;
  }
}

TEST(Parse, EmptyInputExpectsDeclaration) {
  for (const char* text : {"", "   \n\t", "# only a comment\n"}) {
    const auto r = dsl::parse(text);
    EXPECT_FALSE(r.ok());
    ASSERT_EQ(r.diagnostics.size(), 1u);
    EXPECT_EQ(r.diagnostics[0].code, "E100");
    EXPECT_NE(r.diagnostics[0].message.find("expected declaration"), std::string::npos);
    EXPECT_FALSE(r.diagnostics[0].expected.empty());
  }
}

TEST(Parse, DiagnosticsCarryPositionTokenAndExpectations) {
  const auto r = dsl::parse("schema planar {\n  x: m,\n  y m\n}\n");
  ASSERT_EQ(r.diagnostics.size(), 1u);
  const auto& d = r.diagnostics[0];
  EXPECT_EQ(d.code, "E101");
  EXPECT_EQ(d.line, 3);
  EXPECT_EQ(d.col, 5);
  EXPECT_EQ(d.token, "m");
  EXPECT_EQ(d.expected, std::vector<std::string>{"':'"});
  EXPECT_EQ(dsl::format_diagnostic(d).rfind("3:5: E101", 0), 0u);
}

TEST(Parse, LexicalAndSyntaxCodes) {
  EXPECT_EQ(first_code("schema s { x: m } @"), "E001");
  EXPECT_EQ(first_code("schema s { x: m } fixture f = pred(x in [1e999, 2])"), "E002");
  EXPECT_EQ(first_code("schema s { x: m } fixture f = pred(x in [1.5.2, 2])"), "E002");
  EXPECT_EQ(first_code("schema s { x: m } banana"), "E100");
  EXPECT_EQ(first_code("schema { x: m }"), "E101");
  EXPECT_EQ(first_code("fixture f = " + std::string(300, '(') + "true" + std::string(300, ')')), "E103");
  EXPECT_EQ(first_code("fixture f = " + [] {
              std::string s;
              for (int i = 0; i < 300; ++i) s += "next ";
              return s + "true";
            }()),
            "E103");
  EXPECT_EQ(first_code("fixture f = eventually[<=1.5] true"), "E104");
  EXPECT_EQ(first_code("abstract a { logic bin(n=0) constraint true }"), "E104");
  EXPECT_EQ(first_code("schema s { x: furlong }"), "E302");
  EXPECT_EQ(first_code(with_speeds("  horizon 1 s step 0.5 s\n", "")), "E211");
  EXPECT_EQ(first_code("abstract a { logic bin(n=2) }"), "E211");
}

TEST(Parse, ResolutionCodes) {
  EXPECT_EQ(first_code(std::string(kPlanar) + kPlanar), "E201");
  EXPECT_EQ(first_code(with_speeds("planar.x = 0 m", "road.x = 0 m")), "E202");
  EXPECT_EQ(first_code(with_speeds("planar.x = 0 m", "planar.z = 0 m")), "E203");
  EXPECT_EQ(first_code(with_speeds("planar.vx = v", "planar.vx = w")), "E204");
  EXPECT_EQ(first_code(std::string(kPlanar) + "fixture f = g"), "E205");
  EXPECT_EQ(first_code(std::string(kPlanar) + "abstract a { logic enc(nope) constraint true }"), "E206");
  EXPECT_EQ(first_code(with_speeds("param v: set{1 m/s, 2 m/s}", "param v: set{1 m/s} param v: set{2 m/s}")), "E207");
  EXPECT_EQ(first_code(with_speeds("planar.y = 0 m, ", "")), "E208");
  EXPECT_EQ(first_code(with_speeds("planar.y = 0 m, ", "planar.x = 1 m, planar.y = 0 m, ")), "E208");
  EXPECT_EQ(first_code(with_speeds("bind constant_velocity", "bind teleport")), "E209");
  EXPECT_EQ(first_code(std::string(kPlanar) + "fixture f = g\nfixture g = true and f"), "E210");
  EXPECT_EQ(first_code(with_speeds("planar.y = 0 m", "other.y = 0 m") + "schema other { y: m }"), "E212");
  EXPECT_EQ(first_code(with_speeds("vx=v)", "vx=v, spin=1)")), "E213");
  EXPECT_EQ(first_code(with_speeds("(on=(x, y), vx=v)", "(on=(x, y))")), "E213");
  EXPECT_EQ(first_code("schema s { x: m, x: s }"), "E214");
}

TEST(Parse, TypeCodes) {
  EXPECT_EQ(first_code(with_speeds("planar.x = 0 m", "planar.x = 0 s")), "E301");
  EXPECT_EQ(first_code(with_speeds("planar.x = 0 m", "planar.x = 1 m + 2 s")), "E301");
  EXPECT_EQ(first_code(with_speeds("vx=v)", "vx=3 m)")), "E301");
  EXPECT_EQ(first_code(std::string(kPlanar) + "abstract a { constraint pred(x in [0 s, 1 s]) }"), "E301");
  EXPECT_EQ(first_code(with_speeds("set{1 m/s, 2 m/s}", "range(3 m/s, 2 m/s)")), "E303");
  EXPECT_EQ(first_code(with_speeds("set{1 m/s, 2 m/s}", "set{1 m/s, 2 m/s} ~ weighted(0.5, 0.6)")), "E303");
  EXPECT_EQ(first_code(with_speeds("step 0.5 s", "step 0 s")), "E303");
  EXPECT_EQ(first_code(with_speeds("set{1 m/s, 2 m/s}", "range(1 m/s, 2 m/s)") +
                       "abstract a { logic enc(speeds) constraint true }"),
            "E303");
  EXPECT_EQ(first_code(std::string(kPlanar) + "abstract a { constraint pred(x in [2, 1]) }"), "E303");
}

TEST(Parse, ReportsSeveralResolutionErrors) {
  const auto found = codes(with_speeds("planar.vx = v", "planar.vx = w") + "fixture f = g");
  EXPECT_GE(found.size(), 2u);
  EXPECT_NE(std::find(found.begin(), found.end(), "E204"), found.end());
  EXPECT_NE(std::find(found.begin(), found.end(), "E205"), found.end());
}

TEST(Parse, UnitsConvertToSi) {
  const auto doc = *dsl::parse(read_text_file(scenario_path("walk.scn"))).document;
  const auto* model = doc.find_model("cruise");
  ASSERT_NE(model, nullptr);
  bool saw = false;
  for (const auto& a : model->bind.args) {
    if (a.name != "vx") continue;
    const auto& e = std::get<dsl::Expr>(a.value);
    EXPECT_EQ(e.number.value, 10.0);
    EXPECT_EQ(*e.number.unit, dsl::kMeterPerSecond);
    saw = true;
  }
  EXPECT_TRUE(saw);
}

TEST(Parse, RandomBytesOnlyYieldDiagnostics) {
  Rng rng(60);
  std::size_t failures = 0;
  for (int trial = 0; trial < 100'000; ++trial) {
    std::string text(rng.below(48), ' ');
    for (auto& c : text) c = static_cast<char>(rng.below(256));
    dsl::ParseResult r;
    ASSERT_NO_THROW(r = dsl::parse(text));
    if (!r.ok()) {
      ++failures;
      ASSERT_FALSE(r.diagnostics.empty());
    }
  }
  EXPECT_GT(failures, 99'000u);
}

TEST(Parse, MutatedFixturesOnlyYieldDiagnostics) {
  Rng rng(61);
  std::vector<std::string> sources;
  for (const char* file : kFixtures) sources.push_back(read_text_file(scenario_path(file)));
  const std::string alphabet = "{}()[],:.=~+-*/^;<#abcdefxyz019 \n";
  for (int trial = 0; trial < 20'000; ++trial) {
    std::string text = sources[rng.below(sources.size())];
    for (int edits = 1 + static_cast<int>(rng.below(3)); edits > 0; --edits) {
      const std::size_t at = rng.below(text.size());
      switch (rng.below(3)) {
        case 0: text.erase(at, 1 + rng.below(4)); break;
        case 1: text.insert(at, 1, alphabet[rng.below(alphabet.size())]); break;
        default: text[at] = alphabet[rng.below(alphabet.size())]; break;
      }
    }
    dsl::ParseResult r;
    ASSERT_NO_THROW(r = dsl::parse(text)) << text;
    if (r.ok()) {
      const auto again = dsl::parse(dsl::print(*r.document));
      ASSERT_TRUE(again.ok()) << dsl::print(*r.document);
      ASSERT_EQ(*again.document, *r.document);
    } else {
      ASSERT_FALSE(r.diagnostics.empty());
    }
  }
}

TEST(Parse, FormulaSurfaceSyntaxRoundTrips) {
  Rng rng(62);
  const auto schema = planar_schema();
  const FormulaShape shape{.lo = -4, .hi = 4, .max_bound = 5, .scene_rate = 0.2,
                           .scenes = {{-50.0, 100.0, 10.0, -5.0}, {0.125, -3.5, 1e-3, 7.0}}};
  for (int trial = 0; trial < 500; ++trial) {
    const Formula f = random_formula(rng, schema, 4, shape);
    const auto spec = dsl::compile(std::string(kPlanar) + "fixture f = " + to_string(f));
    EXPECT_EQ(spec.fixture("f", schema), f) << to_string(f);
  }
}

TEST(Compile, ExampleTwoRealizesClosedForm) {
  const auto spec = dsl::compile_file(scenario_path("example2.scn"));
  const auto& l = spec.logical("example2");
  EXPECT_EQ(l.space().dimension(), 0u);
  const Trajectory c = realize(l, std::vector<double>{});
  const Trajectory expected = example2_closed_form();
  ASSERT_EQ(c.count(), expected.count());
  EXPECT_LE(trajectory_distance(c, expected), 1e-12);
  EXPECT_EQ(c.last(), Scene(planar_schema(), {150.0, 0.0, 10.0, -5.0}));
}

TEST(Compile, LambdaFixtureMatchesHandBuiltFormula) {
  const auto spec = dsl::compile_file(scenario_path("example2.scn"));
  EXPECT_EQ(spec.fixture("lambda_ex", planar_schema()), lambda_ex());
  const auto a = spec.abstract_scenario("example3");
  EXPECT_EQ(a.formula(), lambda_ex());
  EXPECT_TRUE(monitor_word(example2_closed_form(), a).accepted());
}

TEST(Compile, InversionFixture) {
  const auto spec = dsl::compile_file(scenario_path("inversion.scn"));
  const auto& l = spec.logical("slope");
  const auto r = invert(l, line_trace(2.0, l), 1e-6);
  EXPECT_TRUE(r.found);
  EXPECT_NEAR(r.x[0], 2.0, 1e-6);
}

TEST(Compile, DistributionsAndBinaryLogic) {
  const auto walk = dsl::compile_file(scenario_path("walk.scn"));
  const auto& dist = walk.distribution("cruise_speed");
  ASSERT_EQ(dist.marginals().size(), 2u);
  EXPECT_TRUE(std::holds_alternative<TruncatedNormalMarginal>(dist.marginals()[0]));
  EXPECT_TRUE(std::holds_alternative<DiscreteWeightedMarginal>(dist.marginals()[1]));
  const auto fixed = realize(walk.logical("fixed_cruise"), std::vector<double>{});
  EXPECT_EQ(fixed.last()[0], 20.0);
  const auto bin = dsl::compile_file(scenario_path("binary.scn"));
  EXPECT_EQ(enumerate(bin.abstract_scenario("bits10")).size(), 1024u);
  // words of length 6 without two consecutive ones: Fibonacci(8)
  EXPECT_EQ(enumerate(bin.abstract_scenario("sparse")).size(), 21u);
}

TEST(Compile, EncodingFixture) {
  const auto spec = dsl::compile_file(scenario_path("encoding.scn"));
  const auto& l = spec.logical("speeds");
  std::vector<Trajectory> image;
  for (const auto& x : l.space().points()) image.push_back(realize(l, x));
  std::sort(image.begin(), image.end());
  EXPECT_EQ(enumerate(spec.abstract_scenario("encoded")), image);
  // reaching x >= 7 within 2 s needs v >= 3.5
  EXPECT_EQ(enumerate(spec.abstract_scenario("fast")).size(), 2u);
}

TEST(Compile, ErrorsCarryDiagnostics) {
  try {
    dsl::compile("schema s { x: furlong }");
    FAIL() << "expected ParseError";
  } catch (const dsl::ParseError& e) {
    EXPECT_EQ(e.name(), "ParseError");
    ASSERT_FALSE(e.diagnostics().empty());
    EXPECT_EQ(e.diagnostics()[0].code, "E302");
  }
  EXPECT_THROW(dsl::compile_file(scenario_path("missing.scn")), IoError);
  const auto spec = dsl::compile_file(scenario_path("example2.scn"));
  EXPECT_THROW(spec.logical("nope"), Error);
  EXPECT_THROW(spec.abstract_scenario("nope"), Error);
}
