#pragma once

// Diagram data model for the electron-photon interaction: vertices,
// undirected internal lines (electron or photon), and directed external
// legs attached to a single vertex. Values are immutable once built and
// cheap to copy; multigraph semantics (parallel lines, self-loops) are
// fully supported. A self-loop contributes 2 to its vertex's incidence
// count; every other line contributes 1 per endpoint.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "feynkit/errors.hpp"

namespace feynkit {

enum class ParticleKind { electron, photon };

/// External legs only; internal lines are undirected.
enum class Direction { incoming, outgoing };

constexpr std::string_view to_string(ParticleKind k) {
  return k == ParticleKind::electron ? "electron" : "photon";
}

constexpr std::string_view to_string(Direction d) {
  return d == Direction::incoming ? "in" : "out";
}

struct Vertex {
  std::string id;

  friend bool operator==(const Vertex&, const Vertex&) = default;
};

/// Undirected line between two vertices; a == b is a self-loop.
/// Endpoint order carries no meaning.
struct InternalLine {
  std::string id;
  std::string a;
  std::string b;
  ParticleKind kind = ParticleKind::electron;

  bool is_self_loop() const { return a == b; }

  /// Canonical (sorted) endpoint pair.
  std::pair<std::string, std::string> sorted_endpoints() const {
    return a <= b ? std::pair{a, b} : std::pair{b, a};
  }
};

/// Directed line attached to exactly one vertex.
struct ExternalLeg {
  std::string id;
  std::string vertex;
  ParticleKind kind = ParticleKind::electron;
  Direction direction = Direction::incoming;
};

/// Per-vertex incidence counts. Self-loops count twice.
struct Incidences {
  int electron = 0;
  int photon = 0;
  int internal = 0;
  int external = 0;
  int internal_electron = 0;
  int internal_photon = 0;
  int external_electron = 0;
  int external_photon = 0;

  int total() const { return internal + external; }
};

class Diagram {
 public:
  /// The empty (vacuum) diagram.
  Diagram() = default;

  /// Validates referential integrity and id uniqueness, then assembles
  /// the diagram. Lines and legs with empty ids get generated ones.
  /// Throws ValidationError naming the offending id otherwise.
  static Diagram build(std::vector<Vertex> vertices,
                       std::vector<InternalLine> internal_lines,
                       std::vector<ExternalLeg> external_legs,
                       std::string name = {}) {
    std::set<std::string> vertex_ids;
    for (const auto& v : vertices) {
      if (!vertex_ids.insert(v.id).second)
        throw ValidationError("duplicate vertex id '" + v.id + "'");
    }
    std::set<std::string> line_ids;
    for (const auto& l : internal_lines) {
      if (l.id.empty()) continue;
      if (!line_ids.insert(l.id).second)
        throw ValidationError("duplicate internal line id '" + l.id + "'");
    }
    int next_line = 0;
    for (auto& l : internal_lines) {
      if (l.id.empty()) line_ids.insert(l.id = fresh_id("e", next_line, line_ids));
      for (const std::string* endpoint : {&l.a, &l.b}) {
        if (!vertex_ids.count(*endpoint))
          throw ValidationError("internal line '" + l.id +
                                "' references undeclared vertex '" + *endpoint + "'");
      }
    }
    std::set<std::string> leg_ids;
    for (const auto& x : external_legs) {
      if (x.id.empty()) continue;
      if (!leg_ids.insert(x.id).second)
        throw ValidationError("duplicate external leg id '" + x.id + "'");
    }
    int next_leg = 0;
    for (auto& x : external_legs) {
      if (x.id.empty()) leg_ids.insert(x.id = fresh_id("x", next_leg, leg_ids));
      if (!vertex_ids.count(x.vertex))
        throw ValidationError("external leg '" + x.id +
                              "' references undeclared vertex '" + x.vertex + "'");
    }
    Diagram d;
    d.vertices_ = std::move(vertices);
    d.internal_lines_ = std::move(internal_lines);
    d.external_legs_ = std::move(external_legs);
    d.name_ = std::move(name);
    return d;
  }

  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<InternalLine>& internal_lines() const { return internal_lines_; }
  const std::vector<ExternalLeg>& external_legs() const { return external_legs_; }
  const std::string& name() const { return name_; }

  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  bool empty() const { return vertices_.empty(); }

  bool has_vertex(std::string_view id) const {
    return std::any_of(vertices_.begin(), vertices_.end(),
                       [&](const Vertex& v) { return v.id == id; });
  }

  /// Vertex ids in ascending order.
  std::vector<std::string> sorted_vertex_ids() const {
    std::vector<std::string> ids;
    ids.reserve(vertices_.size());
    for (const auto& v : vertices_) ids.push_back(v.id);
    std::sort(ids.begin(), ids.end());
    return ids;
  }

  /// Structural equality: same vertex id set, same multiset of internal
  /// lines (kind + unordered endpoints), same multiset of external legs
  /// (kind, direction, vertex). Line/leg ids and the name label are not
  /// part of diagram identity.
  friend bool operator==(const Diagram& lhs, const Diagram& rhs) {
    return lhs.structural_key() == rhs.structural_key();
  }

 private:
  static std::string fresh_id(const char* prefix, int& counter,
                              const std::set<std::string>& used) {
    std::string id;
    do {
      id = prefix + std::to_string(counter++);
    } while (used.count(id));
    return id;
  }

  using StructuralKey =
      std::tuple<std::vector<std::string>,
                 std::vector<std::tuple<int, std::string, std::string>>,
                 std::vector<std::tuple<int, int, std::string>>>;

  StructuralKey structural_key() const {
    StructuralKey key;
    std::get<0>(key) = sorted_vertex_ids();
    auto& lines = std::get<1>(key);
    for (const auto& l : internal_lines_) {
      auto [a, b] = l.sorted_endpoints();
      lines.emplace_back(static_cast<int>(l.kind), std::move(a), std::move(b));
    }
    std::sort(lines.begin(), lines.end());
    auto& legs = std::get<2>(key);
    for (const auto& x : external_legs_)
      legs.emplace_back(static_cast<int>(x.kind), static_cast<int>(x.direction), x.vertex);
    std::sort(legs.begin(), legs.end());
    return key;
  }

  std::vector<Vertex> vertices_;
  std::vector<InternalLine> internal_lines_;
  std::vector<ExternalLeg> external_legs_;
  std::string name_;
};

/// Free-function form of Diagram::build.
inline Diagram build_diagram(std::vector<Vertex> vertices,
                             std::vector<InternalLine> internal_lines,
                             std::vector<ExternalLeg> external_legs,
                             std::string name = {}) {
  return Diagram::build(std::move(vertices), std::move(internal_lines),
                        std::move(external_legs), std::move(name));
}

/// Incidence counts per vertex id (every declared vertex gets an entry).
inline std::map<std::string, Incidences> incidences(const Diagram& d) {
  std::map<std::string, Incidences> m;
  for (const auto& v : d.vertices()) m[v.id];
  auto bump = [&](const std::string& vertex, ParticleKind kind, bool internal, int by) {
    Incidences& inc = m.at(vertex);
    (kind == ParticleKind::electron ? inc.electron : inc.photon) += by;
    (internal ? inc.internal : inc.external) += by;
    if (internal)
      (kind == ParticleKind::electron ? inc.internal_electron : inc.internal_photon) += by;
    else
      (kind == ParticleKind::electron ? inc.external_electron : inc.external_photon) += by;
  };
  for (const auto& l : d.internal_lines()) {
    if (l.is_self_loop())
      bump(l.a, l.kind, true, 2);
    else {
      bump(l.a, l.kind, true, 1);
      bump(l.b, l.kind, true, 1);
    }
  }
  for (const auto& x : d.external_legs()) bump(x.vertex, x.kind, false, 1);
  return m;
}

struct LineCounts {
  int external_electron = 0;
  int external_photon = 0;
  int internal_electron = 0;
  int internal_photon = 0;

  int internal_total() const { return internal_electron + internal_photon; }
  int external_total() const { return external_electron + external_photon; }
};

inline LineCounts count_lines(const Diagram& d) {
  LineCounts c;
  for (const auto& l : d.internal_lines())
    (l.kind == ParticleKind::electron ? c.internal_electron : c.internal_photon)++;
  for (const auto& x : d.external_legs())
    (x.kind == ParticleKind::electron ? c.external_electron : c.external_photon)++;
  return c;
}

struct Violation {
  std::string vertex;
  std::string reason;
};

struct CheckOptions {
  /// When set, unequal incoming/outgoing external electron leg counts
  /// produce a warning (never a violation).
  bool strict_directions = false;
};

struct ValidationReport {
  bool well_formed = true;
  bool main_condition = false;
  std::vector<Violation> violations;
  std::vector<std::string> warnings;
};

/// Checks that at every vertex exactly two electron lines and one photon
/// line meet, two of them internal and one external. Vacuously true for
/// the empty diagram. Report-valued; never throws.
inline ValidationReport check_main_condition(const Diagram& d, CheckOptions opts = {}) {
  ValidationReport report;
  for (const auto& [vertex, inc] : incidences(d)) {
    if (inc.electron == 2 && inc.photon == 1 && inc.internal == 2 && inc.external == 1)
      continue;
    std::ostringstream reason;
    reason << "expected 2 electron + 1 photon incidences (2 internal, 1 external); found "
           << inc.electron << " electron, " << inc.photon << " photon; "
           << inc.internal << " internal, " << inc.external << " external";
    report.violations.push_back({vertex, reason.str()});
  }
  report.main_condition = report.violations.empty();
  if (opts.strict_directions) {
    int in = 0, out = 0;
    for (const auto& x : d.external_legs()) {
      if (x.kind != ParticleKind::electron) continue;
      (x.direction == Direction::incoming ? in : out)++;
    }
    if (in != out) {
      std::ostringstream w;
      w << "electron legs unbalanced: " << in << " incoming vs " << out << " outgoing";
      report.warnings.push_back(w.str());
    }
  }
  return report;
}

/// Vertices carrying an external electron leg, in ascending id order.
/// Under the main condition these are exactly the vertices where internal
/// electron and photon lines meet; their count is Q. Throws DomainError
/// when the main condition fails (the result would be ill-defined).
inline std::vector<std::string> contact_points(const Diagram& d) {
  ValidationReport report = check_main_condition(d);
  if (!report.main_condition) {
    const Violation& first = report.violations.front();
    throw DomainError("main condition violated at vertex '" + first.vertex +
                      "': " + first.reason);
  }
  std::set<std::string> contacts;
  for (const auto& x : d.external_legs())
    if (x.kind == ParticleKind::electron) contacts.insert(x.vertex);
  return {contacts.begin(), contacts.end()};
}

}  // namespace feynkit
