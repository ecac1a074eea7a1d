#pragma once
#include <numeric>
#include <random>

#include "graph.hpp"

namespace dpc {

inline ColoredGraph plain_graph(std::size_t n, const std::vector<std::pair<Vertex, Vertex>>& edges) {
  std::vector<NodeId> ids(n);
  std::iota(ids.begin(), ids.end(), NodeId{1});
  return ColoredGraph::assemble(std::move(ids), edges);
}

inline ColoredGraph path_graph(std::size_t n) {
  std::vector<std::pair<Vertex, Vertex>> es;
  for (Vertex i = 0; i + 1 < n; ++i) es.emplace_back(i, i + 1);
  return plain_graph(n, es);
}

inline ColoredGraph cycle_graph(std::size_t n) {
  std::vector<std::pair<Vertex, Vertex>> es;
  for (Vertex i = 0; i + 1 < n; ++i) es.emplace_back(i, i + 1);
  if (n >= 3) es.emplace_back(static_cast<Vertex>(n - 1), 0);
  return plain_graph(n, es);
}

inline ColoredGraph complete_graph(std::size_t n) {
  std::vector<std::pair<Vertex, Vertex>> es;
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i + 1; j < n; ++j) es.emplace_back(i, j);
  return plain_graph(n, es);
}

// Center has id 1.
inline ColoredGraph star_graph(std::size_t leaves) {
  std::vector<std::pair<Vertex, Vertex>> es;
  for (Vertex i = 1; i <= leaves; ++i) es.emplace_back(0, i);
  return plain_graph(leaves + 1, es);
}

// Random spanning tree plus each remaining pair with probability p.
template <class Rng>
ColoredGraph random_connected(std::size_t n, double p, Rng& rng) {
  std::vector<std::pair<Vertex, Vertex>> es;
  std::vector<std::vector<char>> has(n, std::vector<char>(n, 0));
  for (Vertex v = 1; v < n; ++v) {
    Vertex u = std::uniform_int_distribution<Vertex>(0, v - 1)(rng);
    es.emplace_back(u, v);
    has[u][v] = has[v][u] = 1;
  }
  std::bernoulli_distribution coin(p);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (!has[u][v] && coin(rng)) es.emplace_back(u, v);
  return plain_graph(n, es);
}

// Same topology and ids, new unary vocabulary.
inline ColoredGraph with_colors(const ColoredGraph& g, std::vector<std::string> names,
                                const std::vector<std::vector<Vertex>>& members) {
  std::vector<NodeId> ids(g.ids().begin(), g.ids().end());
  std::vector<std::vector<std::pair<Vertex, Vertex>>> rel;
  for (std::size_t r = 0; r < g.binary_count(); ++r) rel.push_back(g.relation(r));
  return ColoredGraph::assemble(std::move(ids), g.edges(), std::move(names), members, g.binary_names(), rel);
}

inline std::vector<std::string> numbered_colors(std::size_t k) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= k; ++i) out.push_back("P" + std::to_string(i));
  return out;
}

// color[v] in 0..k-1 puts v in P(color+1).
inline ColoredGraph with_coloring(const ColoredGraph& g, std::size_t k, const std::vector<std::size_t>& color) {
  std::vector<std::vector<Vertex>> members(k);
  for (Vertex v = 0; v < g.order(); ++v)
    if (color[v] < k) members[color[v]].push_back(v);
  return with_colors(g, numbered_colors(k), members);
}

// Same graph with ids replaced by f(old id); f must be injective.
template <class F>
ColoredGraph relabel_ids(const ColoredGraph& g, F f) {
  std::vector<std::pair<NodeId, Vertex>> order;
  for (Vertex v = 0; v < g.order(); ++v) order.emplace_back(f(g.id(v)), v);
  std::sort(order.begin(), order.end());
  std::vector<Vertex> to_new(g.order());
  std::vector<NodeId> ids;
  for (std::size_t i = 0; i < order.size(); ++i) {
    to_new[order[i].second] = static_cast<Vertex>(i);
    ids.push_back(order[i].first);
  }
  std::vector<std::pair<Vertex, Vertex>> es;
  for (auto [u, v] : g.edges()) es.emplace_back(to_new[u], to_new[v]);
  std::vector<std::vector<Vertex>> um(g.unary_count());
  for (std::size_t p = 0; p < g.unary_count(); ++p)
    for (Vertex v : g.members(p)) um[p].push_back(to_new[v]);
  std::vector<std::vector<std::pair<Vertex, Vertex>>> bp(g.binary_count());
  for (std::size_t r = 0; r < g.binary_count(); ++r)
    for (auto [u, v] : g.relation(r)) bp[r].emplace_back(to_new[u], to_new[v]);
  return ColoredGraph::assemble(std::move(ids), es, g.unary_names(), um, g.binary_names(), bp);
}

}  // namespace dpc
