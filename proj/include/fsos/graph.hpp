#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <numeric>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "fsos/errors.hpp"
#include "fsos/group.hpp"

namespace fsos {

/// A graph whose vertices are characters (identified by character index over
/// a fixed group). Adjacency is symmetric, without self-loops.
class CharGraph {
 public:
  CharGraph() = default;
  CharGraph(GroupSpec spec, std::vector<index_t> vertex_chars)
      : spec_(std::move(spec)), vertex_chars_(std::move(vertex_chars)) {
    std::unordered_set<index_t> seen;
    for (std::size_t i = 0; i < vertex_chars_.size(); ++i) {
      if (!seen.insert(vertex_chars_[i]).second)
        throw ArgumentError("CharGraph: duplicate vertex");
      pos_[vertex_chars_[i]] = static_cast<int>(i);
    }
    adj_.assign(vertex_chars_.size(), {});
  }

  const GroupSpec& spec() const { return spec_; }
  int vertex_count() const { return static_cast<int>(vertex_chars_.size()); }
  index_t vertex_char(int v) const { return vertex_chars_.at(static_cast<std::size_t>(v)); }
  Character vertex(int v) const { return Character::from_index(spec_, vertex_char(v)); }
  const std::vector<index_t>& vertex_chars() const { return vertex_chars_; }

  /// Position of a character among the vertices, or -1.
  int position_of(index_t chi) const {
    auto it = pos_.find(chi);
    return it == pos_.end() ? -1 : it->second;
  }

  void add_edge(int u, int v) {
    if (u == v) throw ArgumentError("CharGraph: self-loop");
    if (u < 0 || v < 0 || u >= vertex_count() || v >= vertex_count())
      throw ArgumentError("CharGraph: vertex out of range");
    if (adj_[static_cast<std::size_t>(u)].insert(v).second)
      adj_[static_cast<std::size_t>(v)].insert(u);
  }
  bool has_edge(int u, int v) const {
    return adj_[static_cast<std::size_t>(u)].count(v) > 0;
  }
  const std::set<int>& neighbors(int v) const { return adj_[static_cast<std::size_t>(v)]; }
  int degree(int v) const { return static_cast<int>(adj_[static_cast<std::size_t>(v)].size()); }

  std::size_t edge_count() const {
    std::size_t e = 0;
    for (const auto& a : adj_) e += a.size();
    return e / 2;
  }

  /// Every edge of `other` (same vertex set, matched by character) is present.
  bool covers(const CharGraph& other) const {
    for (int u = 0; u < other.vertex_count(); ++u) {
      int pu = position_of(other.vertex_char(u));
      if (pu < 0) return false;
      for (int w : other.neighbors(u)) {
        int pw = position_of(other.vertex_char(w));
        if (pw < 0 || !has_edge(pu, pw)) return false;
      }
    }
    return true;
  }

  /// Connected components, each sorted by vertex position; components listed
  /// by smallest contained position.
  std::vector<std::vector<int>> components() const {
    std::vector<std::vector<int>> comps;
    std::vector<bool> seen(static_cast<std::size_t>(vertex_count()), false);
    for (int s = 0; s < vertex_count(); ++s) {
      if (seen[static_cast<std::size_t>(s)]) continue;
      std::vector<int> comp;
      std::deque<int> queue{s};
      seen[static_cast<std::size_t>(s)] = true;
      while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        comp.push_back(v);
        for (int w : neighbors(v))
          if (!seen[static_cast<std::size_t>(w)]) {
            seen[static_cast<std::size_t>(w)] = true;
            queue.push_back(w);
          }
      }
      std::sort(comp.begin(), comp.end());
      comps.push_back(std::move(comp));
    }
    return comps;
  }

  /// GraphViz DOT, vertex labels = exponent tuples.
  std::string to_dot() const {
    std::string out = "graph fsos {\n";
    for (int v = 0; v < vertex_count(); ++v)
      out += "  v" + std::to_string(v) + " [label=\"" + vertex(v).to_string() + "\"];\n";
    for (int u = 0; u < vertex_count(); ++u)
      for (int w : neighbors(u))
        if (u < w) out += "  v" + std::to_string(u) + " -- v" + std::to_string(w) + ";\n";
    return out + "}\n";
  }

 private:
  GroupSpec spec_;
  std::vector<index_t> vertex_chars_;
  std::unordered_map<index_t, int> pos_;
  std::vector<std::set<int>> adj_;
};

/// Vertex-index sets; for chordal graphs, exactly the maximal cliques.
struct CliqueList {
  std::vector<std::vector<int>> cliques;
};

/// Cay(dual(spec), s) on the whole dual group, or on `vertex_subset` when
/// given: distinct chi, chi' adjacent iff chi = s * chi' for some s in S.
inline CharGraph cayley_graph(const GroupSpec& spec, const CharacterSet& s,
                              const std::vector<index_t>* vertex_subset = nullptr) {
  if (s.spec() != spec) throw ArgumentError("cayley_graph: set lives on a different group");
  if (!s.is_symmetric()) throw ArgumentError("cayley_graph: connection set must be symmetric");
  std::vector<index_t> verts;
  if (vertex_subset) {
    verts = *vertex_subset;
  } else {
    verts.resize(static_cast<std::size_t>(spec.order()));
    std::iota(verts.begin(), verts.end(), 0);
  }
  CharGraph g(spec, verts);
  for (int v = 0; v < g.vertex_count(); ++v) {
    index_t chi = g.vertex_char(v);
    for (index_t gen : s.indices()) {
      if (gen == 0) continue;
      int u = g.position_of(spec.add(gen, chi));
      if (u >= 0 && u != v) g.add_edge(v, u);
    }
  }
  return g;
}

/// Elimination game along `order` (a permutation of vertex positions):
/// each processed vertex gets its not-yet-processed neighborhood completed.
/// Returns the chordal supergraph and the number of fill edges; the reverse
/// of `order` is a perfect elimination ordering of the result.
inline std::pair<CharGraph, std::size_t> elimination_game(const CharGraph& g,
                                                          const std::vector<int>& order) {
  int n = g.vertex_count();
  if (static_cast<int>(order.size()) != n)
    throw ArgumentError("elimination_game: order must be a permutation of the vertices");
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  for (int v : order) {
    if (v < 0 || v >= n || used[static_cast<std::size_t>(v)])
      throw ArgumentError("elimination_game: order must be a permutation of the vertices");
    used[static_cast<std::size_t>(v)] = true;
  }
  CharGraph out = g;
  std::vector<std::set<int>> work(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) work[static_cast<std::size_t>(v)] = g.neighbors(v);
  std::vector<bool> done(static_cast<std::size_t>(n), false);
  std::size_t fills = 0;
  for (int v : order) {
    std::vector<int> nb;
    for (int w : work[static_cast<std::size_t>(v)])
      if (!done[static_cast<std::size_t>(w)]) nb.push_back(w);
    for (std::size_t i = 0; i < nb.size(); ++i)
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        int a = nb[i], b = nb[j];
        if (!work[static_cast<std::size_t>(a)].count(b)) {
          work[static_cast<std::size_t>(a)].insert(b);
          work[static_cast<std::size_t>(b)].insert(a);
          out.add_edge(a, b);
          ++fills;
        }
      }
    done[static_cast<std::size_t>(v)] = true;
  }
  return {out, fills};
}

namespace detail {

/// Maximum cardinality search; returns a visit order (first visited first).
/// If the graph is chordal, the reverse visit order is a PEO.
inline std::vector<int> mcs_order(const CharGraph& g) {
  int n = g.vertex_count();
  std::vector<int> weight(static_cast<std::size_t>(n), 0);
  std::vector<bool> visited(static_cast<std::size_t>(n), false);
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(n));
  for (int step = 0; step < n; ++step) {
    int best = -1;
    for (int v = 0; v < n; ++v)
      if (!visited[static_cast<std::size_t>(v)] &&
          (best < 0 || weight[static_cast<std::size_t>(v)] > weight[static_cast<std::size_t>(best)]))
        best = v;
    visited[static_cast<std::size_t>(best)] = true;
    order.push_back(best);
    for (int w : g.neighbors(best))
      if (!visited[static_cast<std::size_t>(w)]) ++weight[static_cast<std::size_t>(w)];
  }
  return order;
}

/// Chordless cycle through non-adjacent u,w in adj(v): shortest u-w path in
/// the graph minus N[v] \ {u,w}, closed through v.
inline std::vector<int> chordless_cycle_via(const CharGraph& g, int v, int u, int w) {
  int n = g.vertex_count();
  std::vector<bool> blocked(static_cast<std::size_t>(n), false);
  blocked[static_cast<std::size_t>(v)] = true;
  for (int x : g.neighbors(v)) blocked[static_cast<std::size_t>(x)] = true;
  blocked[static_cast<std::size_t>(u)] = false;
  blocked[static_cast<std::size_t>(w)] = false;
  std::vector<int> parent(static_cast<std::size_t>(n), -1);
  std::deque<int> queue{u};
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  seen[static_cast<std::size_t>(u)] = true;
  while (!queue.empty()) {
    int x = queue.front();
    queue.pop_front();
    if (x == w) break;
    for (int y : g.neighbors(x)) {
      if (blocked[static_cast<std::size_t>(y)] || seen[static_cast<std::size_t>(y)]) continue;
      seen[static_cast<std::size_t>(y)] = true;
      parent[static_cast<std::size_t>(y)] = x;
      queue.push_back(y);
    }
  }
  if (!seen[static_cast<std::size_t>(w)]) return {};
  std::vector<int> cycle{v};
  for (int x = w; x != -1; x = parent[static_cast<std::size_t>(x)]) cycle.push_back(x);
  std::reverse(cycle.begin() + 1, cycle.end());  // v, u, ..., w
  return cycle;
}

/// Returns a PEO if the graph is chordal, otherwise throws NotChordal with a
/// chordless cycle witness.
inline std::vector<int> perfect_elimination_ordering(const CharGraph& g) {
  int n = g.vertex_count();
  std::vector<int> visit = mcs_order(g);
  std::vector<int> peo(visit.rbegin(), visit.rend());
  std::vector<int> pos(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pos[static_cast<std::size_t>(peo[static_cast<std::size_t>(i)])] = i;
  for (int i = 0; i < n; ++i) {
    int v = peo[static_cast<std::size_t>(i)];
    // later neighbors of v in elimination order
    int parent = -1;
    for (int w : g.neighbors(v))
      if (pos[static_cast<std::size_t>(w)] > i &&
          (parent < 0 || pos[static_cast<std::size_t>(w)] < pos[static_cast<std::size_t>(parent)]))
        parent = w;
    if (parent < 0) continue;
    for (int w : g.neighbors(v)) {
      if (pos[static_cast<std::size_t>(w)] <= i || w == parent) continue;
      if (!g.has_edge(parent, w)) {
        auto cyc = chordless_cycle_via(g, v, parent, w);
        if (!cyc.empty()) throw NotChordalError(cyc);
        // Fall back to scanning all failing triples; at least one of them
        // closes into a chordless cycle when the graph is not chordal.
        for (int a = 0; a < n; ++a)
          for (int b : g.neighbors(a))
            for (int c : g.neighbors(a)) {
              if (b >= c || g.has_edge(b, c)) continue;
              auto cyc2 = chordless_cycle_via(g, a, b, c);
              if (!cyc2.empty()) throw NotChordalError(cyc2);
            }
        throw NotChordalError({v, parent, w});
      }
    }
  }
  return peo;
}

}  // namespace detail

inline bool is_chordal(const CharGraph& g) {
  try {
    detail::perfect_elimination_ordering(g);
    return true;
  } catch (const NotChordalError&) {
    return false;
  }
}

/// Maximal cliques of a chordal graph, from a PEO: v together with its
/// later-ordered neighbors, keeping the set-maximal ones. Count <= |V|.
inline CliqueList maximal_cliques_chordal(const CharGraph& g) {
  std::vector<int> peo = detail::perfect_elimination_ordering(g);
  int n = g.vertex_count();
  std::vector<int> pos(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pos[static_cast<std::size_t>(peo[static_cast<std::size_t>(i)])] = i;
  std::vector<std::vector<int>> cands;
  for (int i = 0; i < n; ++i) {
    int v = peo[static_cast<std::size_t>(i)];
    std::vector<int> c{v};
    for (int w : g.neighbors(v))
      if (pos[static_cast<std::size_t>(w)] > i) c.push_back(w);
    std::sort(c.begin(), c.end());
    cands.push_back(std::move(c));
  }
  std::sort(cands.begin(), cands.end());
  cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
  CliqueList out;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    bool maximal = true;
    for (std::size_t j = 0; j < cands.size() && maximal; ++j) {
      if (i == j || cands[j].size() <= cands[i].size()) continue;
      if (std::includes(cands[j].begin(), cands[j].end(), cands[i].begin(), cands[i].end()))
        maximal = false;
    }
    if (maximal) out.cliques.push_back(cands[i]);
  }
  return out;
}

/// Strong product: vertex set V1 x V2 lifted into the dual of the product
/// group; (u1,v1) ~ (u2,v2) iff each coordinate pair is adjacent or equal
/// (not both equal).
inline CharGraph strong_product(const CharGraph& g1, const CharGraph& g2) {
  ProductGroup pg = product_group(g1.spec(), g2.spec());
  std::vector<index_t> verts;
  verts.reserve(static_cast<std::size_t>(g1.vertex_count()) * g2.vertex_count());
  for (int j = 0; j < g2.vertex_count(); ++j)
    for (int i = 0; i < g1.vertex_count(); ++i)
      verts.push_back(pg.lift_index(g1.vertex_char(i), g2.vertex_char(j)));
  CharGraph out(pg.spec, verts);
  auto vid = [&](int i, int j) { return i + g1.vertex_count() * j; };
  for (int j1 = 0; j1 < g2.vertex_count(); ++j1)
    for (int i1 = 0; i1 < g1.vertex_count(); ++i1)
      for (int j2 = j1; j2 < g2.vertex_count(); ++j2)
        for (int i2 = (j2 == j1 ? i1 + 1 : 0); i2 < g1.vertex_count(); ++i2) {
          bool same1 = i1 == i2, same2 = j1 == j2;
          bool e1 = !same1 && g1.has_edge(i1, i2);
          bool e2 = !same2 && g2.has_edge(j1, j2);
          if ((same1 && e2) || (e1 && same2) || (e1 && e2))
            out.add_edge(vid(i1, j1), vid(i2, j2));
        }
  return out;
}

/// Minimum-degree elimination ordering (degrees tracked on the filled graph),
/// ties broken by smallest character index. The default fill-reducing order
/// for chordal covers.
inline std::vector<int> min_degree_order(const CharGraph& g) {
  int n = g.vertex_count();
  std::vector<std::set<int>> adj(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) adj[static_cast<std::size_t>(v)] = g.neighbors(v);
  std::vector<bool> done(static_cast<std::size_t>(n), false);
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(n));
  for (int step = 0; step < n; ++step) {
    int best = -1;
    for (int v = 0; v < n; ++v) {
      if (done[static_cast<std::size_t>(v)]) continue;
      if (best < 0) {
        best = v;
        continue;
      }
      std::size_t dv = adj[static_cast<std::size_t>(v)].size();
      std::size_t db = adj[static_cast<std::size_t>(best)].size();
      if (dv < db || (dv == db && g.vertex_char(v) < g.vertex_char(best))) best = v;
    }
    order.push_back(best);
    done[static_cast<std::size_t>(best)] = true;
    std::vector<int> nb(adj[static_cast<std::size_t>(best)].begin(),
                        adj[static_cast<std::size_t>(best)].end());
    for (std::size_t i = 0; i < nb.size(); ++i) {
      adj[static_cast<std::size_t>(nb[i])].erase(best);
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        adj[static_cast<std::size_t>(nb[i])].insert(nb[j]);
        adj[static_cast<std::size_t>(nb[j])].insert(nb[i]);
      }
    }
    adj[static_cast<std::size_t>(best)].clear();
  }
  return order;
}

/// Connected components plus the graph K that completes each of them.
inline std::pair<std::vector<std::vector<int>>, CharGraph> components_and_completion(
    const CharGraph& g) {
  auto comps = g.components();
  CharGraph k(g.spec(), g.vertex_chars());
  for (const auto& comp : comps)
    for (std::size_t i = 0; i < comp.size(); ++i)
      for (std::size_t j = i + 1; j < comp.size(); ++j) k.add_edge(comp[i], comp[j]);
  return {comps, k};
}

/// Checks that each connected component of Cay(dual, s) is a coset of the
/// subgroup generated by s.
struct CosetComponentsReport {
  bool pass = false;
  std::vector<std::vector<index_t>> components;  // as sorted character indices
  std::vector<std::vector<index_t>> cosets;
  std::string mismatch;
};

inline CosetComponentsReport components_are_cosets(const GroupSpec& spec,
                                                   const CharacterSet& s) {
  CharGraph g = cayley_graph(spec, s);
  CosetComponentsReport report;
  for (const auto& comp : g.components()) {
    std::vector<index_t> chars;
    for (int v : comp) chars.push_back(g.vertex_char(v));
    std::sort(chars.begin(), chars.end());
    report.components.push_back(std::move(chars));
  }
  CharacterSet h = subgroup_generated(s);
  for (const auto& coset : cosets(h)) {
    std::vector<index_t> chars = coset.indices();
    std::sort(chars.begin(), chars.end());
    report.cosets.push_back(std::move(chars));
  }
  auto key = [](const std::vector<index_t>& v) { return v.empty() ? -1 : v.front(); };
  auto by_rep = [&](const std::vector<index_t>& a, const std::vector<index_t>& b) {
    return key(a) < key(b);
  };
  std::sort(report.components.begin(), report.components.end(), by_rep);
  std::sort(report.cosets.begin(), report.cosets.end(), by_rep);
  report.pass = report.components == report.cosets;
  if (!report.pass) report.mismatch = "component partition differs from coset partition";
  return report;
}

}  // namespace fsos
