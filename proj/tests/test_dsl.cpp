#include <random>
#include <string>

#include <catch2/catch_amalgamated.hpp>

#include "feynkit/dsl.hpp"
#include "feynkit/enumeration.hpp"
#include "feynkit/errors.hpp"
#include "feynkit/json_report.hpp"
#include "support/testkit.hpp"

using namespace feynkit;

namespace {

const Diagnostic* find_diagnostic(const ParseResult& r, int line) {
  for (const Diagnostic& d : r.diagnostics)
    if (d.line == line) return &d;
  return nullptr;
}

}  // namespace

TEST_CASE("figure 1 source parses to the figure 1 diagram") {
  const ParseResult r = parse_diagram(
      "vertex A1\n"
      "vertex A2\n"
      "internal electron A1 A2\n"
      "internal photon A1 A2\n"
      "external electron in A1\n"
      "external electron out A2\n");
  REQUIRE(r.ok());
  REQUIRE(*r.diagram == testkit::figure1());
}

TEST_CASE("comments, blank lines, and CRLF endings are accepted") {
  const ParseResult r = parse_diagram(
      "# a comment\r\n"
      "\r\n"
      "diagram tiny\r\n"
      "vertex A\t \n"
      "   # indented comment\n"
      "\n");
  REQUIRE(r.ok());
  REQUIRE(r.diagram->name() == "tiny");
  REQUIRE(r.diagram->vertex_count() == 1);
}

TEST_CASE("empty input is the empty diagram") {
  const ParseResult r = parse_diagram("");
  REQUIRE(r.ok());
  REQUIRE(r.diagram->empty());
  REQUIRE(serialize(*r.diagram).empty());
}

TEST_CASE("unknown kind is reported at the token") {
  const ParseResult r = parse_diagram("vertex A1\ninternal muon A1 A1\n");
  REQUIRE_FALSE(r.ok());
  const Diagnostic* d = find_diagnostic(r, 2);
  REQUIRE(d != nullptr);
  REQUIRE(d->column == 10);
  REQUIRE_THAT(d->message, Catch::Matchers::ContainsSubstring("muon"));
  REQUIRE_THAT(d->hint, Catch::Matchers::ContainsSubstring("electron"));
}

TEST_CASE("undeclared vertices are reported with a declaration hint") {
  const ParseResult r = parse_diagram("vertex A1\ninternal electron A1 B9\n");
  REQUIRE_FALSE(r.ok());
  REQUIRE(r.diagnostics.size() == 1);
  REQUIRE(r.diagnostics[0].line == 2);
  REQUIRE(r.diagnostics[0].column == 22);
  REQUIRE_THAT(r.diagnostics[0].message, Catch::Matchers::ContainsSubstring("B9"));
  REQUIRE_THAT(r.diagnostics[0].hint, Catch::Matchers::ContainsSubstring("vertex B9"));
}

TEST_CASE("duplicate vertices, bad directions, and bad identifiers") {
  const ParseResult r = parse_diagram(
      "vertex A\n"
      "vertex A\n"
      "external electron up A\n"
      "vertex 9lives\n");
  REQUIRE_FALSE(r.ok());
  REQUIRE(find_diagnostic(r, 2) != nullptr);
  REQUIRE_THAT(find_diagnostic(r, 2)->message, Catch::Matchers::ContainsSubstring("duplicate"));
  REQUIRE(find_diagnostic(r, 3) != nullptr);
  REQUIRE_THAT(find_diagnostic(r, 3)->hint, Catch::Matchers::ContainsSubstring("'in' or 'out'"));
  REQUIRE(find_diagnostic(r, 4) != nullptr);
  REQUIRE_THAT(find_diagnostic(r, 4)->message, Catch::Matchers::ContainsSubstring("9lives"));
}

TEST_CASE("missing tokens are reported at end of line") {
  const ParseResult r = parse_diagram("vertex A\ninternal electron A\n");
  REQUIRE_FALSE(r.ok());
  REQUIRE(r.diagnostics.size() == 1);
  REQUIRE(r.diagnostics[0].line == 2);
  REQUIRE(r.diagnostics[0].column == 20);
  REQUIRE_THAT(r.diagnostics[0].message, Catch::Matchers::ContainsSubstring("missing"));
}

TEST_CASE("trailing tokens are rejected") {
  const ParseResult r = parse_diagram("vertex A extra\n");
  REQUIRE_FALSE(r.ok());
  REQUIRE(r.diagnostics[0].column == 10);
  REQUIRE_THAT(r.diagnostics[0].message, Catch::Matchers::ContainsSubstring("extra"));
}

TEST_CASE("the diagram header must come first") {
  const ParseResult r = parse_diagram("vertex A\ndiagram late\n");
  REQUIRE_FALSE(r.ok());
  REQUIRE(r.diagnostics[0].line == 2);
  REQUIRE_THAT(r.diagnostics[0].message, Catch::Matchers::ContainsSubstring("first"));
  // A comment before the header is fine.
  REQUIRE(parse_diagram("# intro\ndiagram ok\n").ok());
}

TEST_CASE("unknown statements list the alternatives") {
  const ParseResult r = parse_diagram("vertx A\n");
  REQUIRE_FALSE(r.ok());
  REQUIRE(r.diagnostics[0].column == 1);
  REQUIRE_THAT(r.diagnostics[0].hint, Catch::Matchers::ContainsSubstring("'vertex'"));
}

TEST_CASE("all errors in a source are collected") {
  const ParseResult r = parse_diagram(
      "vertex A\n"
      "internal muon A A\n"
      "external photon up A\n"
      "bogus\n");
  REQUIRE(r.diagnostics.size() == 3);
}

TEST_CASE("round trip over enumerated diagrams") {
  EnumerationRequest req;
  for (int n = 0; n <= 3; ++n) {
    req.vertex_count = n;
    for (const Diagram& d : enumerate_diagrams(req)) {
      const std::string text = serialize(d);
      const ParseResult r = parse_diagram(text);
      REQUIRE(r.ok());
      REQUIRE(*r.diagram == d);
      REQUIRE(serialize(*r.diagram) == text);
    }
  }
}

TEST_CASE("serialization is canonical across input orderings") {
  Diagram reordered = Diagram::build(
      {{"A2"}, {"A1"}},
      {{"", "A2", "A1", ParticleKind::photon}, {"", "A2", "A1", ParticleKind::electron}},
      {{"", "A2", ParticleKind::electron, Direction::outgoing},
       {"", "A1", ParticleKind::electron, Direction::incoming}},
      "figure1");
  REQUIRE(serialize(reordered) == serialize(testkit::figure1()));
}

TEST_CASE("identifiers outside the grammar cannot serialize") {
  const Diagram bad_vertex =
      Diagram::build({{"has space"}}, {{"", "has space", "has space", ParticleKind::electron}},
                     {{"", "has space", ParticleKind::photon, Direction::incoming}});
  REQUIRE_THROWS_AS(serialize(bad_vertex), ValidationError);
  const Diagram bad_name = Diagram::build({{"a"}}, {}, {}, "no good");
  REQUIRE_THROWS_AS(serialize(bad_name), ValidationError);
}

TEST_CASE("golden sources parse to the fixtures") {
  const std::string dir = FEYNKIT_GOLDEN_DIR;
  const ParseResult f1 = parse_diagram(testkit::read_file(dir + "/figure1.fd"));
  REQUIRE(f1.ok());
  REQUIRE(*f1.diagram == testkit::figure1());
  const ParseResult f2 = parse_diagram(testkit::read_file(dir + "/figure2.fd"));
  REQUIRE(f2.ok());
  REQUIRE(*f2.diagram == testkit::figure2());
}

TEST_CASE("summary documents are byte-stable against the golden files") {
  const std::string dir = FEYNKIT_GOLDEN_DIR;
  REQUIRE(summary_json_text(testkit::figure1()) == testkit::read_file(dir + "/figure1.json"));
  REQUIRE(summary_json_text(testkit::figure2()) == testkit::read_file(dir + "/figure2.json"));
}

namespace {

// Checks a document against the subset of JSON Schema the published schema
// uses: required keys, closed property set, per-property type, const, and
// integer minimums. Enough to keep the schema file honest.
void check_against_schema(const nlohmann::json& schema, const nlohmann::json& doc) {
  for (const auto& key : schema.at("required")) {
    CAPTURE(key);
    REQUIRE(doc.contains(key.get<std::string>()));
  }
  const nlohmann::json& properties = schema.at("properties");
  for (const auto& [key, value] : doc.items()) {
    CAPTURE(key);
    REQUIRE(properties.contains(key));
    const nlohmann::json& rule = properties.at(key);
    const std::string type = rule.at("type");
    if (type == "integer") {
      REQUIRE(value.is_number_integer());
      if (rule.contains("minimum")) REQUIRE(value.get<long>() >= rule["minimum"].get<long>());
      if (rule.contains("const")) REQUIRE(value == rule["const"]);
    } else if (type == "boolean") {
      REQUIRE(value.is_boolean());
    } else if (type == "array") {
      REQUIRE(value.is_array());
      for (const auto& item : value) REQUIRE(item.is_string());
    }
  }
}

}  // namespace

TEST_CASE("summary documents conform to the published schema") {
  const nlohmann::json schema =
      nlohmann::json::parse(testkit::read_file(FEYNKIT_SCHEMA_PATH));
  check_against_schema(schema, summary_document(testkit::figure1()));
  check_against_schema(schema, summary_document(testkit::figure2()));
  check_against_schema(schema, summary_document(Diagram{}));
  EnumerationRequest req;
  req.vertex_count = 3;
  req.dedupe = true;
  for (const Diagram& d : enumerate_diagrams(req))
    check_against_schema(schema, summary_document(d));
}

TEST_CASE("fuzzed sources never crash the parser") {
  std::mt19937 rng(424242);
  const std::string alphabet =
      "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_ \t\r\n#";
  const std::vector<std::string> words = {"vertex",   "internal", "external", "electron",
                                          "photon",   "in",       "out",      "diagram",
                                          "A1",       "A2",       "B",        "#",
                                          "\n",       " ",        "9bad",     "_x"};
  for (int trial = 0; trial < 500; ++trial) {
    std::string source;
    const int pieces = static_cast<int>(rng() % 40);
    for (int i = 0; i < pieces; ++i) {
      if (rng() % 2 == 0) {
        source += words[rng() % words.size()];
        source += rng() % 3 == 0 ? "\n" : " ";
      } else {
        const int chars = static_cast<int>(rng() % 12);
        for (int c = 0; c < chars; ++c) source += alphabet[rng() % alphabet.size()];
      }
    }
    const ParseResult r = parse_diagram(source);  // must not throw or crash
    if (r.ok()) REQUIRE(r.diagnostics.empty());
    for (const Diagnostic& d : r.diagnostics) {
      REQUIRE(d.line >= 1);
      REQUIRE(d.column >= 1);
      REQUIRE_FALSE(d.message.empty());
    }
  }
}
