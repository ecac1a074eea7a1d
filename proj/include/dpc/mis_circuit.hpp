#pragma once
#include "circuits.hpp"
#include "reductions.hpp"

namespace dpc {

struct MisCircuit {
  Circuit circuit;
  EmbeddedInstance embedding;
  std::size_t conflict_pairs = 0;
};

// Color class of v among P1..Pk; WrongColoring unless there is exactly one.
inline std::vector<std::size_t> single_colors(const ColoredGraph& g, std::size_t k) {
  std::vector<std::size_t> out(g.order(), 0);
  for (Vertex v = 0; v < g.order(); ++v) {
    std::size_t found = 0;
    for (std::size_t i = 1; i <= k; ++i)
      if (auto p = g.unary_index("P" + std::to_string(i)); p && g.has_color(v, *p)) {
        if (found) throw WrongColoring("node " + std::to_string(g.id(v)) + " has two colors among P1..P" + std::to_string(k));
        found = i;
      }
    if (!found) throw WrongColoring("node " + std::to_string(g.id(v)) + " has no color among P1..P" + std::to_string(k));
    out[v] = found;
  }
  return out;
}

// Weft-1 circuit accepting exactly the weight-k inputs that pick a
// multicolored independent set: inputs x_v, negations, one OR(~x_u, ~x_v)
// per edge or same-color pair, all under one big AND. A vertex in no pair
// contributes the tautology (x_v | ~x_v) so that its negation gate is used;
// further tautologies at the least vertex pad the AND to arity 3.
//
// Embedding into the clique over V(G): x_v and ~x_v at v, OR(~x_u, ~x_v) at
// min(u, v), tautologies at their vertex, the AND and the padding at the
// least vertex. Every wire is a direct clique edge.
inline MisCircuit mis_to_circuit(const ColoredGraph& g, std::size_t k) {
  auto color = single_colors(g, k);
  const std::size_t n = g.order();
  Circuit c(n);
  std::vector<NodeId> host(n);
  for (Vertex v = 0; v < n; ++v) host[v] = g.id(v);
  for (Vertex v = 0; v < n; ++v) {
    c.add(GateKind::Neg, {v});
    host.push_back(g.id(v));
  }
  std::vector<std::size_t> clauses;
  std::vector<char> covered(n, 0);
  std::size_t pairs = 0;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (g.adjacent(u, v) || color[u] == color[v]) {
        clauses.push_back(c.add(GateKind::Or, {n + u, n + v}));
        host.push_back(g.id(u));
        covered[u] = covered[v] = 1;
        ++pairs;
      }
  for (Vertex v = 0; v < n; ++v)
    if (!covered[v]) {
      clauses.push_back(c.add(GateKind::Or, {v, n + v}));
      host.push_back(g.id(v));
    }
  while (clauses.size() < 3) {
    clauses.push_back(c.add(GateKind::Or, {0, n}));
    host.push_back(g.id(0));
  }
  c.add(GateKind::BigAnd, clauses);
  host.push_back(g.id(0));
  c.validate();

  EmbeddedInstance e;
  e.reduction = "mis_to_circuit";
  e.source = Problem::MulticoloredIndependentSet;
  e.target = Problem::WeightedCircuitSat;
  e.model = ModelKind::Clique;
  e.host = g;
  e.k_prime = k;
  e.unary_names.assign(std::begin(kGateColors), std::end(kGateColors));
  e.binary_names = {"WIRE"};
  e.rounds = 1;
  e.declared = {3, 1, 3, 1, k};
  const std::size_t out = c.output();
  for (NodeId h : g.ids()) e.stores[h];
  for (std::size_t i = 0; i < c.size(); ++i) {
    std::vector<std::string> colors;
    if (c.gate(i).kind != GateKind::Input) colors.emplace_back(gate_token(c.gate(i).kind));
    if (i == out) colors.emplace_back("OUT");
    e.stores[host[i]].hosted.push_back({{i}, host[i], colors});
    for (auto j : c.gate(i).inputs) {
      std::vector<NodeId> path{host[j]};
      if (host[i] != host[j]) path.push_back(host[i]);
      auto edge = make_edge({j}, {i}, path, {"WIRE"});
      e.stores[host[j]].incident.push_back(edge);
      if (host[i] != host[j]) e.stores[host[i]].incident.push_back(edge);
    }
  }
  for (auto& [h, st] : e.stores) st.normalize();
  return {std::move(c), std::move(e), pairs};
}

}  // namespace dpc
