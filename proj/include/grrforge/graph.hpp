#pragma once

// Undirected simple graphs in compressed sparse row form, Cayley graph
// construction over element tables, and the DIMACS / JSON exports.
//
// The Cayley graph of a table with connection set S (table indices) has the
// group elements as vertices, with v adjacent to s*v for each s in S: the
// neighbor maps are exactly the left-multiplication permutations.  S must be
// inverse-closed and identity-free, which makes the graph simple and
// undirected with degree |S| everywhere; it is connected precisely when S
// generates the group.

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "grrforge/common.hpp"
#include "grrforge/table.hpp"

namespace grrforge {

struct Graph {
  u32 n = 0;
  std::vector<u32> offsets;    // size n + 1
  std::vector<u32> neighbors;  // sorted within each vertex's slice

  u32 degree(u32 v) const { return offsets[v + 1] - offsets[v]; }
  u64 edge_count() const { return neighbors.size() / 2; }

  const u32* begin_of(u32 v) const { return neighbors.data() + offsets[v]; }
  const u32* end_of(u32 v) const { return neighbors.data() + offsets[v + 1]; }

  bool adjacent(u32 u, u32 v) const {
    return std::binary_search(begin_of(u), end_of(u), v);
  }

  bool is_regular(u32 d) const {
    for (u32 v = 0; v < n; ++v)
      if (degree(v) != d) return false;
    return true;
  }
};

// Builds a simple undirected graph from an edge list.  Loops, out-of-range
// endpoints, and duplicate edges are rejected.
inline Graph make_graph(u32 n, const std::vector<std::pair<u32, u32>>& edges) {
  Graph g;
  g.n = n;
  std::vector<std::pair<u32, u32>> dir;
  dir.reserve(edges.size() * 2);
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) throw DomainError("edge endpoint out of range");
    if (u == v) throw DomainError("loops are not allowed");
    dir.emplace_back(u, v);
    dir.emplace_back(v, u);
  }
  std::sort(dir.begin(), dir.end());
  if (std::adjacent_find(dir.begin(), dir.end()) != dir.end())
    throw DomainError("duplicate edge");
  g.offsets.assign(n + 1, 0);
  for (const auto& [u, v] : dir) ++g.offsets[u + 1];
  for (u32 v = 0; v < n; ++v) g.offsets[v + 1] += g.offsets[v];
  g.neighbors.reserve(dir.size());
  for (const auto& [u, v] : dir) g.neighbors.push_back(v);
  return g;
}

inline bool is_connected(const Graph& g) {
  if (g.n == 0) return true;
  std::vector<bool> seen(g.n, false);
  std::vector<u32> stack{0};
  seen[0] = true;
  u32 visited = 1;
  while (!stack.empty()) {
    u32 v = stack.back();
    stack.pop_back();
    for (const u32* it = g.begin_of(v); it != g.end_of(v); ++it) {
      if (!seen[*it]) {
        seen[*it] = true;
        ++visited;
        stack.push_back(*it);
      }
    }
  }
  return visited == g.n;
}

// Relabels vertices: vertex v becomes perm[v].
inline Graph relabel(const Graph& g, const std::vector<u32>& perm) {
  if (perm.size() != g.n) throw DomainError("relabel: permutation size mismatch");
  std::vector<bool> seen(g.n, false);
  for (u32 p : perm) {
    if (p >= g.n || seen[p]) throw DomainError("relabel: not a permutation");
    seen[p] = true;
  }
  std::vector<std::pair<u32, u32>> edges;
  edges.reserve(g.edge_count());
  for (u32 v = 0; v < g.n; ++v)
    for (const u32* it = g.begin_of(v); it != g.end_of(v); ++it)
      if (v < *it) edges.emplace_back(perm[v], perm[*it]);
  return make_graph(g.n, edges);
}

struct CayleyGraph {
  Graph graph;
  std::vector<u32> connection;  // table indices of S, ascending
};

// Cay(G, S): vertices are table indices, v ~ s*v for s in S.
inline CayleyGraph build_cayley(const ElementTable& table, std::vector<u32> connection) {
  std::sort(connection.begin(), connection.end());
  connection.erase(std::unique(connection.begin(), connection.end()), connection.end());
  if (connection.empty()) throw DomainError("connection set is empty");
  for (u32 s : connection) {
    if (s >= table.size()) throw DomainError("connection set index out of range");
    if (s == table.identity_index()) throw DomainError("identity in connection set");
  }
  for (u32 s : connection) {
    u32 si = table.inverse(s);
    if (!std::binary_search(connection.begin(), connection.end(), si))
      throw DomainError("connection set is not inverse-closed");
  }
  std::vector<std::pair<u32, u32>> edges;
  edges.reserve(size_t(table.size()) * connection.size() / 2);
  for (u32 s : connection) {
    std::vector<u32> sigma = table.left_mult_perm(s);
    for (u32 v = 0; v < table.size(); ++v) {
      u32 w = sigma[v];
      if (v < w) edges.emplace_back(v, w);
      // v > w is recorded when the inverse generator maps w to v; v == w
      // cannot happen (s is not the identity and left translation is free).
    }
  }
  CayleyGraph out;
  out.graph = make_graph(u32(table.size()), edges);
  out.connection = std::move(connection);
  if (!out.graph.is_regular(u32(out.connection.size())))
    throw DomainError("Cayley graph is not |S|-regular (construction defect)");
  return out;
}

// DIMACS-like edge list: "p edge V E" header then one "e u v" line per edge,
// 1-indexed endpoints.
inline std::string to_dimacs(const Graph& g) {
  std::string out = "p edge " + std::to_string(g.n) + " " + std::to_string(g.edge_count()) + "\n";
  for (u32 v = 0; v < g.n; ++v)
    for (const u32* it = g.begin_of(v); it != g.end_of(v); ++it)
      if (v < *it)
        out += "e " + std::to_string(v + 1) + " " + std::to_string(*it + 1) + "\n";
  return out;
}

// JSON adjacency form: {"n": V, "adjacency": [[...], ...]}.
inline std::string to_json(const Graph& g) {
  std::string out = "{\"n\": " + std::to_string(g.n) + ", \"adjacency\": [";
  for (u32 v = 0; v < g.n; ++v) {
    if (v) out += ", ";
    out += "[";
    for (const u32* it = g.begin_of(v); it != g.end_of(v); ++it) {
      if (it != g.begin_of(v)) out += ", ";
      out += std::to_string(*it);
    }
    out += "]";
  }
  out += "]}";
  return out;
}

}  // namespace grrforge
