#pragma once

// Brute-force generation of every main-condition diagram at small vertex
// counts, and a canonical certificate giving exact isomorphism testing at
// desk scale.
//
// The main condition collapses the search space: each contact vertex
// carries one external electron leg, one internal electron incidence and
// one internal photon incidence; every other vertex carries one external
// photon leg and two internal electron incidences. So for a given contact
// set the internal photon lines form a perfect matching on the contacts
// and the internal electron lines form a multigraph with degree 1 on
// contacts and degree 2 elsewhere (self-loops counting twice).

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "feynkit/counting.hpp"
#include "feynkit/diagram.hpp"
#include "feynkit/errors.hpp"
#include "feynkit/topology.hpp"

namespace feynkit {

struct EnumerationRequest {
  /// Target vertex count; may be omitted when external data is given.
  std::optional<int> vertex_count;
  /// Fixes (N_e, N_p); the vertex and contact counts follow from the
  /// inverse problem.
  std::optional<ExternalData> external;
  bool connected_only = false;
  bool irreducible_only = false;
  /// Keep one representative per canonical class.
  bool dedupe = false;
  /// Enumerate every external-leg direction assignment instead of the
  /// normalized one (electron legs alternate in/out in vertex order,
  /// photon legs incoming). Counting without this flag is direction-blind.
  bool exhaustive_directions = false;
  std::optional<std::size_t> limit;
  /// Combinatorial-explosion guard.
  int max_vertices = 8;
};

namespace detail {

struct IndexedDiagram {
  int n = 0;
  std::vector<std::array<int, 3>> lines;  // kind, min endpoint, max endpoint
  std::vector<std::array<int, 3>> legs;   // kind, direction, vertex
};

inline IndexedDiagram index_diagram(const Diagram& d) {
  const std::vector<std::string> ids = d.sorted_vertex_ids();
  std::map<std::string, int> index;
  for (int i = 0; i < static_cast<int>(ids.size()); ++i) index[ids[i]] = i;
  IndexedDiagram e;
  e.n = static_cast<int>(ids.size());
  for (const auto& l : d.internal_lines()) {
    int a = index.at(l.a), b = index.at(l.b);
    e.lines.push_back({static_cast<int>(l.kind), std::min(a, b), std::max(a, b)});
  }
  for (const auto& x : d.external_legs())
    e.legs.push_back(
        {static_cast<int>(x.kind), static_cast<int>(x.direction), index.at(x.vertex)});
  return e;
}

/// Flat structural code of the diagram under a vertex relabeling.
inline std::vector<int> relabeled_code(const IndexedDiagram& e, const std::vector<int>& perm,
                                       bool include_directions) {
  std::vector<std::array<int, 3>> lines = e.lines;
  for (auto& l : lines) {
    int a = perm[l[1]], b = perm[l[2]];
    l[1] = std::min(a, b);
    l[2] = std::max(a, b);
  }
  std::sort(lines.begin(), lines.end());
  std::vector<std::array<int, 3>> legs = e.legs;
  for (auto& x : legs) {
    if (!include_directions) x[1] = 0;
    x[2] = perm[x[2]];
  }
  std::sort(legs.begin(), legs.end());

  std::vector<int> code;
  code.reserve(2 + 3 * (lines.size() + legs.size()) + 1);
  code.push_back(e.n);
  code.push_back(static_cast<int>(lines.size()));
  for (const auto& l : lines) code.insert(code.end(), l.begin(), l.end());
  code.push_back(static_cast<int>(legs.size()));
  for (const auto& x : legs) code.insert(code.end(), x.begin(), x.end());
  return code;
}

inline std::string render_certificate(const std::vector<int>& code, int n, std::size_t line_count,
                                      std::size_t leg_count, bool include_directions) {
  std::string out = "n" + std::to_string(n);
  std::size_t pos = 2;
  for (std::size_t i = 0; i < line_count; ++i) {
    int kind = code[pos], a = code[pos + 1], b = code[pos + 2];
    pos += 3;
    out += ';';
    out += kind == 0 ? 'e' : 'p';
    out += std::to_string(a) + "-" + std::to_string(b);
  }
  ++pos;  // leg count
  for (std::size_t i = 0; i < leg_count; ++i) {
    int kind = code[pos], dir = code[pos + 1], v = code[pos + 2];
    pos += 3;
    out += ';';
    out += kind == 0 ? 'E' : 'P';
    out += include_directions ? (dir == 0 ? 'i' : 'o') : '.';
    out += std::to_string(v);
  }
  return out;
}

/// Emits every multigraph (as a multiset of index pairs a <= b) realizing
/// the degree target exactly; a self-loop consumes two degree units.
/// Edges are produced in non-decreasing lexicographic order and every new
/// edge starts at the smallest vertex with remaining degree, which yields
/// each multiset exactly once.
template <class Emit>
void degree_multigraphs(std::vector<int>& remaining, int min_partner,
                        std::vector<std::pair<int, int>>& edges, const Emit& emit) {
  const int n = static_cast<int>(remaining.size());
  int v = -1;
  for (int i = 0; i < n; ++i)
    if (remaining[i] > 0) {
      v = i;
      break;
    }
  if (v < 0) {
    emit(edges);
    return;
  }
  for (int w = std::max(v, min_partner); w < n; ++w) {
    if (w == v) {
      if (remaining[v] < 2) continue;
      remaining[v] -= 2;
      edges.emplace_back(v, v);
      degree_multigraphs(remaining, remaining[v] > 0 ? v : 0, edges, emit);
      edges.pop_back();
      remaining[v] += 2;
    } else {
      if (remaining[w] < 1) continue;
      --remaining[v];
      --remaining[w];
      edges.emplace_back(v, w);
      degree_multigraphs(remaining, remaining[v] > 0 ? w : 0, edges, emit);
      edges.pop_back();
      ++remaining[v];
      ++remaining[w];
    }
  }
}

}  // namespace detail

/// Canonical certificate: the lexicographically smallest structural code
/// over all vertex relabelings. Two diagrams have equal certificates iff
/// a relabeling maps one onto the other preserving line kinds and (when
/// included) external-leg directions. Exhaustive minimization over n!
/// permutations; intended for the guard sizes, not large graphs.
inline std::string canonical_form(const Diagram& d, bool include_directions = true) {
  const detail::IndexedDiagram e = detail::index_diagram(d);
  std::vector<int> perm(e.n);
  std::iota(perm.begin(), perm.end(), 0);
  std::optional<std::vector<int>> best;
  do {
    std::vector<int> code = detail::relabeled_code(e, perm, include_directions);
    if (!best || code < *best) best = std::move(code);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return detail::render_certificate(*best, e.n, e.lines.size(), e.legs.size(),
                                    include_directions);
}

/// Renames vertices via the given map (ids missing from the map stay).
/// The result is re-validated, so collisions surface as ValidationError.
inline Diagram relabel_vertices(const Diagram& d,
                                const std::map<std::string, std::string>& rename) {
  auto mapped = [&](const std::string& id) {
    auto it = rename.find(id);
    return it == rename.end() ? id : it->second;
  };
  std::vector<Vertex> vertices;
  for (const auto& v : d.vertices()) vertices.push_back({mapped(v.id)});
  std::vector<InternalLine> lines;
  for (const auto& l : d.internal_lines())
    lines.push_back({l.id, mapped(l.a), mapped(l.b), l.kind});
  std::vector<ExternalLeg> legs;
  for (const auto& x : d.external_legs())
    legs.push_back({x.id, mapped(x.vertex), x.kind, x.direction});
  return Diagram::build(std::move(vertices), std::move(lines), std::move(legs), d.name());
}

/// Enumerates main-condition diagrams per the request, sorted by
/// canonical certificate. Returns every labeled diagram, or one
/// representative per class with dedupe. The sink may return false to
/// stop early.
inline void enumerate_diagrams(const EnumerationRequest& req,
                               const std::function<bool(const Diagram&)>& sink) {
  int n = -1;
  std::optional<int> fixed_contacts;
  if (req.external) {
    const InternalData inv = solve_inverse(*req.external);  // validates parity
    n = inv.vertices;
    fixed_contacts = inv.contacts;
    if (req.vertex_count && *req.vertex_count != n)
      throw DomainError("vertex count " + std::to_string(*req.vertex_count) +
                        " conflicts with external data (needs n=" + std::to_string(n) + ")");
  } else if (req.vertex_count) {
    n = *req.vertex_count;
  } else {
    throw DomainError("enumeration needs a vertex count or external data");
  }
  if (n < 0) throw DomainError("vertex count must be nonnegative");
  if (n > req.max_vertices)
    throw DomainError("enumeration guard exceeded: n=" + std::to_string(n) + " > max " +
                      std::to_string(req.max_vertices));
  if (n > 20) throw DomainError("enumeration guard cannot exceed 20 vertices");

  const std::size_t width = n > 0 ? std::to_string(n - 1).size() : 1;
  auto vertex_name = [&](int i) {
    std::string digits = std::to_string(i);
    return "v" + std::string(width - digits.size(), '0') + digits;
  };

  std::vector<Vertex> vertices;
  for (int i = 0; i < n; ++i) vertices.push_back({vertex_name(i)});

  // (sort key, diagram); key = dedupe certificate + deterministic tiebreak.
  std::vector<std::pair<std::pair<std::string, std::string>, Diagram>> found;

  auto consider = [&](const std::vector<bool>& is_contact,
                      const std::vector<std::pair<int, int>>& photon_edges,
                      const std::vector<std::pair<int, int>>& electron_edges,
                      const std::vector<Direction>& leg_dirs) {
    std::vector<InternalLine> lines;
    for (auto [a, b] : electron_edges)
      lines.push_back({"", vertex_name(a), vertex_name(b), ParticleKind::electron});
    for (auto [a, b] : photon_edges)
      lines.push_back({"", vertex_name(a), vertex_name(b), ParticleKind::photon});
    std::vector<ExternalLeg> legs;
    for (int i = 0; i < n; ++i) {
      ParticleKind kind = is_contact[i] ? ParticleKind::electron : ParticleKind::photon;
      legs.push_back({"", vertex_name(i), kind, leg_dirs[i]});
    }
    Diagram d = Diagram::build(vertices, std::move(lines), std::move(legs));
    if (!check_main_condition(d).main_condition)
      throw std::logic_error("enumeration produced a diagram violating the main condition");
    if (req.connected_only && connected_components(d).count != 1) return;
    if (req.irreducible_only && !is_irreducible(d).irreducible) return;
    std::string dedupe_cert = canonical_form(d, /*include_directions=*/req.exhaustive_directions);
    std::string tiebreak;
    {
      const detail::IndexedDiagram e = detail::index_diagram(d);
      std::vector<int> identity(e.n);
      std::iota(identity.begin(), identity.end(), 0);
      const std::vector<int> code = detail::relabeled_code(e, identity, true);
      tiebreak = detail::render_certificate(code, e.n, e.lines.size(), e.legs.size(), true);
    }
    found.emplace_back(std::pair{std::move(dedupe_cert), std::move(tiebreak)}, std::move(d));
  };

  auto directions_for = [&](const std::vector<bool>& is_contact) {
    // Normalized rule: electron legs alternate in/out in vertex order,
    // photon legs all incoming.
    std::vector<Direction> dirs(n, Direction::incoming);
    int contact_pos = 0;
    for (int i = 0; i < n; ++i)
      if (is_contact[i])
        dirs[i] = (contact_pos++ % 2 == 0) ? Direction::incoming : Direction::outgoing;
    return dirs;
  };

  auto expand_directions = [&](const std::vector<bool>& is_contact,
                               const std::vector<std::pair<int, int>>& photon_edges,
                               const std::vector<std::pair<int, int>>& electron_edges) {
    if (!req.exhaustive_directions) {
      consider(is_contact, photon_edges, electron_edges, directions_for(is_contact));
      return;
    }
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      std::vector<Direction> dirs(n);
      for (int i = 0; i < n; ++i)
        dirs[i] = (mask >> i) & 1u ? Direction::outgoing : Direction::incoming;
      consider(is_contact, photon_edges, electron_edges, dirs);
    }
  };

  if (n == 0) {
    // The vacuum diagram.
    std::vector<bool> no_contacts;
    expand_directions(no_contacts, {}, {});
  } else {
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      const int q = std::popcount(mask);
      if (q % 2 != 0) continue;
      if (fixed_contacts && q != *fixed_contacts) continue;
      std::vector<bool> is_contact(n);
      for (int i = 0; i < n; ++i) is_contact[i] = (mask >> i) & 1u;

      std::vector<int> photon_degree(n), electron_degree(n);
      for (int i = 0; i < n; ++i) {
        photon_degree[i] = is_contact[i] ? 1 : 0;
        electron_degree[i] = is_contact[i] ? 1 : 2;
      }
      std::vector<std::pair<int, int>> photon_edges, electron_edges;
      detail::degree_multigraphs(
          photon_degree, 0, photon_edges, [&](const std::vector<std::pair<int, int>>& pe) {
            detail::degree_multigraphs(
                electron_degree, 0, electron_edges,
                [&](const std::vector<std::pair<int, int>>& ee) {
                  expand_directions(is_contact, pe, ee);
                });
          });
    }
  }

  std::sort(found.begin(), found.end(),
            [](const auto& lhs, const auto& rhs) { return lhs.first < rhs.first; });
  std::size_t emitted = 0;
  const std::string* previous_class = nullptr;
  for (const auto& [key, diagram] : found) {
    if (req.dedupe && previous_class && *previous_class == key.first) continue;
    previous_class = &key.first;
    if (req.limit && emitted >= *req.limit) break;
    ++emitted;
    if (!sink(diagram)) return;
  }
}

inline std::vector<Diagram> enumerate_diagrams(const EnumerationRequest& req) {
  std::vector<Diagram> out;
  enumerate_diagrams(req, [&](const Diagram& d) {
    out.push_back(d);
    return true;
  });
  return out;
}

}  // namespace feynkit
