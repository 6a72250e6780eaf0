#pragma once

// Graph-theoretic analysis of diagrams: connected components over the
// internal lines, bridge detection (irreducibility), the loop count
// m = F - n + C, and the full invariant summary. External legs never
// join components; only internal lines are graph edges.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "feynkit/diagram.hpp"
#include "feynkit/errors.hpp"

namespace feynkit {

struct ComponentPartition {
  int count = 0;
  /// One sorted vertex-id list per component, ordered by smallest member.
  std::vector<std::vector<std::string>> components;
};

inline ComponentPartition connected_components(const Diagram& d) {
  const std::vector<std::string> ids = d.sorted_vertex_ids();
  std::map<std::string, int> index;
  for (int i = 0; i < static_cast<int>(ids.size()); ++i) index[ids[i]] = i;

  // Union-find over vertex indices.
  std::vector<int> parent(ids.size());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& l : d.internal_lines()) {
    int ra = find(index.at(l.a));
    int rb = find(index.at(l.b));
    if (ra != rb) parent[rb] = ra;
  }

  std::map<int, std::vector<std::string>> groups;
  for (std::size_t i = 0; i < ids.size(); ++i) groups[find(static_cast<int>(i))].push_back(ids[i]);
  ComponentPartition partition;
  for (auto& [root, members] : groups) partition.components.push_back(std::move(members));
  std::sort(partition.components.begin(), partition.components.end());
  partition.count = static_cast<int>(partition.components.size());
  return partition;
}

struct IrreducibilityResult {
  bool irreducible = true;
  /// A bridge whose removal disconnects the diagram, when one exists.
  std::optional<InternalLine> witness;
};

/// A diagram is irreducible when no single internal line's removal
/// increases the component count. Self-loops and parallel lines are never
/// bridges. Single DFS low-link pass, iterative to survive deep graphs.
inline IrreducibilityResult is_irreducible(const Diagram& d) {
  const std::vector<std::string> ids = d.sorted_vertex_ids();
  std::map<std::string, int> index;
  for (int i = 0; i < static_cast<int>(ids.size()); ++i) index[ids[i]] = i;
  const int n = static_cast<int>(ids.size());

  struct Arc {
    int to;
    int line;
  };
  std::vector<std::vector<Arc>> adj(n);
  const auto& lines = d.internal_lines();
  for (int e = 0; e < static_cast<int>(lines.size()); ++e) {
    if (lines[e].is_self_loop()) continue;
    int a = index.at(lines[e].a);
    int b = index.at(lines[e].b);
    adj[a].push_back({b, e});
    adj[b].push_back({a, e});
  }

  std::vector<int> disc(n, -1), low(n, 0);
  std::vector<char> is_bridge(lines.size(), 0);
  int timer = 0;

  // Iterative DFS; the entering line index distinguishes parallel edges
  // from a revisit of the tree edge.
  struct Frame {
    int vertex;
    int enter_line;
    std::size_t next_arc = 0;
  };
  std::vector<Frame> stack;
  for (int start = 0; start < n; ++start) {
    if (disc[start] != -1) continue;
    stack.push_back({start, -1});
    disc[start] = low[start] = timer++;
    while (!stack.empty()) {
      Frame& frame = stack.back();
      const int u = frame.vertex;
      if (frame.next_arc < adj[u].size()) {
        const Arc arc = adj[u][frame.next_arc++];
        if (arc.line == frame.enter_line) continue;
        if (disc[arc.to] == -1) {
          disc[arc.to] = low[arc.to] = timer++;
          stack.push_back({arc.to, arc.line});
        } else {
          low[u] = std::min(low[u], disc[arc.to]);
        }
      } else {
        const Frame finished = frame;
        stack.pop_back();
        if (!stack.empty()) {
          const int p = stack.back().vertex;
          low[p] = std::min(low[p], low[u]);
          if (low[u] > disc[p]) is_bridge[finished.enter_line] = 1;
        }
      }
    }
  }

  for (int e = 0; e < static_cast<int>(lines.size()); ++e)
    if (is_bridge[e]) return {false, lines[e]};
  return {true, std::nullopt};
}

/// Loop count (first Betti number) m = F - n + C.
inline int loop_count(const Diagram& d) {
  const int f = static_cast<int>(d.internal_lines().size());
  const int n = d.vertex_count();
  const int c = connected_components(d).count;
  return f - n + c;
}

/// The full invariant tuple of a main-condition diagram.
struct TopologySummary {
  int vertices = 0;            // n
  int components = 0;          // C
  int contacts = 0;            // Q
  int external_electrons = 0;  // N_e
  int external_photons = 0;    // N_p
  int internal_electrons = 0;  // F_e
  int internal_photons = 0;    // F_p
  int internal_total = 0;      // F
  int loops = 0;               // m
  int power_counter = 0;       // K
  bool main_condition = true;
  bool irreducible = true;
  bool physical = true;   // vertex count even (Furry parity)
  bool degenerate = false;  // the empty diagram
  std::vector<std::string> contact_points;
};

/// Computes every invariant and cross-checks the counting identities
/// that the main condition guarantees. Throws DomainError when the main
/// condition fails (partial data stays available through count_lines and
/// the graph queries above). A violated identity is a library bug and
/// raises logic_error.
inline TopologySummary summarize(const Diagram& d) {
  TopologySummary s;
  s.contact_points = contact_points(d);  // throws on main-condition failure
  s.vertices = d.vertex_count();
  s.components = connected_components(d).count;
  s.contacts = static_cast<int>(s.contact_points.size());

  const LineCounts lines = count_lines(d);
  s.external_electrons = lines.external_electron;
  s.external_photons = lines.external_photon;
  s.internal_electrons = lines.internal_electron;
  s.internal_photons = lines.internal_photon;
  s.internal_total = lines.internal_total();
  s.loops = s.internal_total - s.vertices + s.components;
  s.power_counter = 2 * s.internal_total - (s.internal_electrons + 4 * s.loops);
  s.irreducible = is_irreducible(d).irreducible;
  s.physical = s.vertices % 2 == 0;
  s.degenerate = s.vertices == 0;

  // Identities forced by the main condition; any failure is internal.
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::logic_error(std::string("topology invariant violated: ") + what);
  };
  const int n = s.vertices, q = s.contacts;
  require(s.external_electrons == q, "N_e == Q");
  require(2 * s.internal_electrons == 2 * n - q, "F_e == n - Q/2");
  require(2 * s.internal_photons == q, "F_p == Q/2");
  require(s.external_photons == n - q, "N_p == n - Q");
  require(2 * s.internal_electrons + s.external_electrons == 2 * n, "2F_e + N_e == 2n");
  require(2 * s.internal_photons + s.external_photons == n, "2F_p + N_p == n");
  require(s.internal_electrons + s.internal_photons == n, "F_e + F_p == n");
  require(s.external_electrons + s.external_photons == n, "N_e + N_p == n");
  require(s.loops == s.components, "m == C");
  require(s.power_counter ==
              (3 * s.external_electrons) / 2 + s.external_photons - 4 * s.loops,
          "internal and external power-counter forms agree");
  return s;
}

}  // namespace feynkit
