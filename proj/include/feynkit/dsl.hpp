#pragma once

// Line-oriented diagram text format.
//
//   diagram IDENT                       (optional, first statement only)
//   vertex IDENT
//   internal (electron|photon) IDENT IDENT
//   external (electron|photon) (in|out) IDENT
//   # comment
//
// IDENT = [A-Za-z][A-Za-z0-9_]*. Vertices must be declared before use.
// The parser is total: it never throws on malformed text, it reports every
// problem it can find with 1-based line/column and a fix hint, and it
// yields a diagram only for a clean source. The serializer emits a
// canonical ordering, so serialize . parse . serialize is stable.

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "feynkit/diagram.hpp"
#include "feynkit/errors.hpp"

namespace feynkit {

struct Diagnostic {
  int line = 0;    // 1-based
  int column = 0;  // 1-based
  std::string message;
  std::string hint;
};

struct ParseResult {
  std::optional<Diagram> diagram;
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return diagram.has_value(); }
};

namespace detail {

inline bool is_ident(std::string_view s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin() + 1, s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

struct Token {
  std::string_view text;
  int column;  // 1-based
};

inline std::vector<Token> split_tokens(std::string_view line) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == ' ' || line[i] == '\t') {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    tokens.push_back({line.substr(i, j - i), static_cast<int>(i) + 1});
    i = j;
  }
  return tokens;
}

}  // namespace detail

inline ParseResult parse_diagram(std::string_view source) {
  ParseResult result;
  std::vector<Vertex> vertices;
  std::vector<InternalLine> lines;
  std::vector<ExternalLeg> legs;
  std::string name;
  std::set<std::string, std::less<>> declared;
  bool saw_statement = false;

  auto report = [&](int line, int column, std::string message, std::string hint) {
    result.diagnostics.push_back({line, column, std::move(message), std::move(hint)});
  };

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= source.size()) {
    const std::size_t eol = source.find('\n', pos);
    std::string_view line = source.substr(
        pos, eol == std::string_view::npos ? source.size() - pos : eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    pos = eol == std::string_view::npos ? source.size() + 1 : eol + 1;

    const std::vector<detail::Token> tokens = detail::split_tokens(line);
    if (tokens.empty() || tokens[0].text.front() == '#') continue;
    const detail::Token& head = tokens[0];
    const int end_column = static_cast<int>(line.size()) + 1;

    auto expect_ident = [&](std::size_t index, std::string_view what) -> std::optional<std::string> {
      if (index >= tokens.size()) {
        report(line_no, end_column, "missing " + std::string(what),
               "identifiers start with a letter and continue with letters, digits, or '_'");
        return std::nullopt;
      }
      if (!detail::is_ident(tokens[index].text)) {
        report(line_no, tokens[index].column,
               "invalid " + std::string(what) + " '" + std::string(tokens[index].text) + "'",
               "identifiers start with a letter and continue with letters, digits, or '_'");
        return std::nullopt;
      }
      return std::string(tokens[index].text);
    };
    auto expect_kind = [&](std::size_t index) -> std::optional<ParticleKind> {
      if (index >= tokens.size()) {
        report(line_no, end_column, "missing particle kind", "expected 'electron' or 'photon'");
        return std::nullopt;
      }
      if (tokens[index].text == "electron") return ParticleKind::electron;
      if (tokens[index].text == "photon") return ParticleKind::photon;
      report(line_no, tokens[index].column,
             "unknown particle kind '" + std::string(tokens[index].text) + "'",
             "expected 'electron' or 'photon'");
      return std::nullopt;
    };
    auto expect_declared = [&](std::size_t index) -> std::optional<std::string> {
      auto id = expect_ident(index, "vertex id");
      if (!id) return std::nullopt;
      if (!declared.count(*id)) {
        report(line_no, tokens[index].column, "undeclared vertex '" + *id + "'",
               "declare it first with 'vertex " + *id + "'");
        return std::nullopt;
      }
      return id;
    };
    auto reject_extra = [&](std::size_t expected) {
      if (tokens.size() > expected)
        report(line_no, tokens[expected].column,
               "unexpected trailing token '" + std::string(tokens[expected].text) + "'",
               "remove everything after the statement");
    };

    if (head.text == "diagram") {
      if (saw_statement) {
        report(line_no, head.column, "'diagram' header must be the first statement",
               "move it above every vertex, internal, and external line");
      } else if (auto id = expect_ident(1, "diagram name")) {
        name = *id;
        reject_extra(2);
      }
      saw_statement = true;
      continue;
    }
    saw_statement = true;

    if (head.text == "vertex") {
      if (auto id = expect_ident(1, "vertex id")) {
        if (declared.count(*id)) {
          report(line_no, tokens[1].column, "duplicate vertex '" + *id + "'",
                 "each vertex id may be declared once");
        } else {
          declared.insert(*id);
          vertices.push_back({*id});
        }
        reject_extra(2);
      }
    } else if (head.text == "internal") {
      auto kind = expect_kind(1);
      auto a = expect_declared(2);
      auto b = expect_declared(3);
      if (kind && a && b) {
        lines.push_back({"", *a, *b, *kind});
        reject_extra(4);
      }
    } else if (head.text == "external") {
      auto kind = expect_kind(1);
      std::optional<Direction> dir;
      if (tokens.size() <= 2) {
        report(line_no, end_column, "missing direction", "expected 'in' or 'out'");
      } else if (tokens[2].text == "in") {
        dir = Direction::incoming;
      } else if (tokens[2].text == "out") {
        dir = Direction::outgoing;
      } else {
        report(line_no, tokens[2].column,
               "unknown direction '" + std::string(tokens[2].text) + "'",
               "expected 'in' or 'out'");
      }
      auto v = expect_declared(3);
      if (kind && dir && v) {
        legs.push_back({"", *v, *kind, *dir});
        reject_extra(4);
      }
    } else {
      report(line_no, head.column, "unknown statement '" + std::string(head.text) + "'",
             "expected 'vertex', 'internal', 'external', 'diagram', or a '#' comment");
    }
  }

  if (result.diagnostics.empty())
    result.diagram = Diagram::build(std::move(vertices), std::move(lines), std::move(legs),
                                    std::move(name));
  return result;
}

/// Canonical text: header (when named), vertices sorted by id, internal
/// lines by (kind, sorted endpoints), external legs by (kind, direction,
/// vertex). Ids that the grammar cannot express raise ValidationError.
inline std::string serialize(const Diagram& d) {
  auto require_ident = [](const std::string& id, std::string_view what) {
    if (!detail::is_ident(id))
      throw ValidationError(std::string(what) + " '" + id + "' is not expressible in the text format");
  };
  std::string out;
  if (!d.name().empty()) {
    require_ident(d.name(), "diagram name");
    out += "diagram " + d.name() + "\n";
  }
  std::vector<std::string> ids = d.sorted_vertex_ids();
  for (const std::string& id : ids) {
    require_ident(id, "vertex id");
    out += "vertex " + id + "\n";
  }
  std::vector<std::tuple<int, std::string, std::string>> line_rows;
  for (const InternalLine& l : d.internal_lines()) {
    auto [a, b] = l.sorted_endpoints();
    line_rows.emplace_back(static_cast<int>(l.kind), a, b);
  }
  std::sort(line_rows.begin(), line_rows.end());
  for (const auto& [kind, a, b] : line_rows)
    out += std::string("internal ") +
           std::string(to_string(static_cast<ParticleKind>(kind))) + " " + a + " " + b + "\n";
  std::vector<std::tuple<int, int, std::string>> leg_rows;
  for (const ExternalLeg& x : d.external_legs())
    leg_rows.emplace_back(static_cast<int>(x.kind), static_cast<int>(x.direction), x.vertex);
  std::sort(leg_rows.begin(), leg_rows.end());
  for (const auto& [kind, dir, v] : leg_rows)
    out += std::string("external ") +
           std::string(to_string(static_cast<ParticleKind>(kind))) + " " +
           (dir == static_cast<int>(Direction::incoming) ? "in" : "out") + " " + v + "\n";
  return out;
}

}  // namespace feynkit
