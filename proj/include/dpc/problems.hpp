#pragma once
#include "circuits.hpp"
#include "logic.hpp"
#include "sim.hpp"

namespace dpc {

enum class Problem {
  IndependentSet,
  DominatingSet,
  MulticoloredIndependentSet,
  RedBlueDominatingSet,
  CliqueDomination,
  InducedSubgraphIsomorphism,
  DegreeGreaterThan,
  McSigma1,
  WeightedCircuitSat,
};

inline const std::vector<std::pair<Problem, std::string>>& problem_names() {
  static const std::vector<std::pair<Problem, std::string>> names = {
      {Problem::IndependentSet, "IndependentSet"},
      {Problem::DominatingSet, "DominatingSet"},
      {Problem::MulticoloredIndependentSet, "MulticoloredIndependentSet"},
      {Problem::RedBlueDominatingSet, "RedBlueDominatingSet"},
      {Problem::CliqueDomination, "CliqueDomination"},
      {Problem::InducedSubgraphIsomorphism, "InducedSubgraphIsomorphism"},
      {Problem::DegreeGreaterThan, "DegreeGreaterThan"},
      {Problem::McSigma1, "MC-Sigma1"},
      {Problem::WeightedCircuitSat, "WeightedCircuitSat"},
  };
  return names;
}

inline std::string problem_name(Problem p) {
  for (const auto& [q, name] : problem_names())
    if (q == p) return name;
  return "?";
}

inline Problem parse_problem(std::string_view s) {
  static const std::vector<std::pair<std::string, Problem>> aliases = {
      {"IS", Problem::IndependentSet},        {"DS", Problem::DominatingSet},
      {"MIS", Problem::MulticoloredIndependentSet}, {"RBDS", Problem::RedBlueDominatingSet},
      {"CliqueDom", Problem::CliqueDomination}, {"ISI", Problem::InducedSubgraphIsomorphism},
      {"Degree", Problem::DegreeGreaterThan},  {"MC", Problem::McSigma1},
      {"WCS", Problem::WeightedCircuitSat},
  };
  for (const auto& [q, name] : problem_names())
    if (name == s) return q;
  for (const auto& [name, q] : aliases)
    if (name == s) return q;
  throw UnsupportedProblem("unknown problem '" + std::string(s) + "'");
}

struct ProblemInstance {
  ColoredGraph graph;
  std::size_t k = 0;
  std::size_t l = 0;                      // clique size for CliqueDomination
  std::optional<ColoredGraph> pattern{};  // H for InducedSubgraphIsomorphism
  std::size_t d = 0;                      // degree threshold
  Formula formula{};                      // MC-Sigma1 sentence
};

// The parameter the problem is parameterized by.
inline std::size_t parameter(Problem p, const ProblemInstance& inst) {
  switch (p) {
    case Problem::CliqueDomination: return inst.k + inst.l;
    case Problem::InducedSubgraphIsomorphism: return inst.pattern ? inst.pattern->order() : 0;
    case Problem::DegreeGreaterThan: return inst.d;
    case Problem::McSigma1: return inst.formula ? formula_size(inst.formula) : 0;
    default: return inst.k;
  }
}

namespace oracle {

// Visits all k-subsets of {0..n-1} until f returns true.
template <class F>
bool any_subset(std::size_t n, std::size_t k, F&& f) {
  if (k > n) return false;
  std::vector<Vertex> pick(k);
  std::iota(pick.begin(), pick.end(), Vertex{0});
  while (true) {
    if (f(pick)) return true;
    std::size_t i = k;
    while (i > 0 && pick[i - 1] == n - k + i - 1) --i;
    if (i == 0) return false;
    ++pick[i - 1];
    for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
}

inline bool independent_set(const ColoredGraph& g, std::size_t k) {
  return any_subset(g.order(), k, [&](const std::vector<Vertex>& s) {
    for (std::size_t i = 0; i < s.size(); ++i)
      for (std::size_t j = i + 1; j < s.size(); ++j)
        if (g.adjacent(s[i], s[j])) return false;
    return true;
  });
}

inline bool dominating_set(const ColoredGraph& g, std::size_t k) {
  return any_subset(g.order(), std::min(k, g.order()), [&](const std::vector<Vertex>& s) {
    for (Vertex v = 0; v < g.order(); ++v) {
      bool dom = false;
      for (Vertex x : s) dom = dom || x == v || g.adjacent(x, v);
      if (!dom) return false;
    }
    return true;
  });
}

inline void require_colors(const ColoredGraph& g, std::size_t k) {
  if (g.unary_count() < k)
    throw WrongColoring("instance has " + std::to_string(g.unary_count()) + " color classes, needs P1..P" + std::to_string(k));
}

inline bool multicolored_independent_set(const ColoredGraph& g, std::size_t k) {
  require_colors(g, k);
  BitGraph bg(g);
  std::vector<Bits> classes;
  for (std::size_t i = 0; i < k; ++i) classes.push_back(member_bits(g, i));
  return has_multicolored_is(bg, classes);
}

// Red = P1, blue = P2; a red set S dominates blue b iff b has a neighbor in S.
inline bool red_blue_dominating_set(const ColoredGraph& g, std::size_t k) {
  require_colors(g, 2);
  auto red = g.members(0), blue = g.members(1);
  std::vector<Vertex> red_list(red.begin(), red.end());
  return any_subset(red_list.size(), std::min(k, red_list.size()), [&](const std::vector<Vertex>& s) {
    for (Vertex b : blue) {
      bool dom = false;
      for (Vertex i : s) dom = dom || g.adjacent(red_list[i], b);
      if (!dom) return false;
    }
    return true;
  });
}

inline std::vector<std::vector<Vertex>> cliques_of_size(const ColoredGraph& g, std::size_t l) {
  std::vector<std::vector<Vertex>> out;
  any_subset(g.order(), l, [&](const std::vector<Vertex>& s) {
    for (std::size_t i = 0; i < s.size(); ++i)
      for (std::size_t j = i + 1; j < s.size(); ++j)
        if (!g.adjacent(s[i], s[j])) return false;
    out.push_back(s);
    return false;
  });
  return out;
}

// S dominates clique C iff every vertex of C has a neighbor in S.
inline bool clique_domination(const ColoredGraph& g, std::size_t k, std::size_t l) {
  auto cliques = cliques_of_size(g, l);
  if (cliques.empty()) return true;
  return any_subset(g.order(), std::min(k, g.order()), [&](const std::vector<Vertex>& s) {
    for (const auto& c : cliques)
      for (Vertex u : c) {
        bool dom = false;
        for (Vertex x : s) dom = dom || g.adjacent(x, u);
        if (!dom) return false;
      }
    return true;
  });
}

// Injective h: V(H) -> V(G) preserving adjacency and non-adjacency; a color
// of a pattern vertex must be present (by name) on its image.
inline bool induced_subgraph(const ColoredGraph& g, const ColoredGraph& h) {
  const std::size_t m = h.order();
  std::vector<std::vector<std::size_t>> need(m);
  for (Vertex a = 0; a < m; ++a)
    for (auto p : h.colors_of(a)) {
      auto q = g.unary_index(h.unary_names()[p]);
      if (!q) return false;
      need[a].push_back(*q);
    }
  std::vector<Vertex> img(m);
  std::vector<char> used(g.order(), 0);
  std::function<bool(std::size_t)> go = [&](std::size_t a) -> bool {
    if (a == m) return true;
    for (Vertex v = 0; v < g.order(); ++v) {
      if (used[v]) continue;
      bool ok = std::all_of(need[a].begin(), need[a].end(), [&](auto q) { return g.has_color(v, q); });
      for (Vertex b = 0; b < a && ok; ++b) ok = h.adjacent(a, b) == g.adjacent(v, img[b]);
      if (!ok) continue;
      used[v] = 1;
      img[a] = v;
      if (go(a + 1)) return true;
      used[v] = 0;
    }
    return false;
  };
  return go(0);
}

inline bool degree_greater_than(const ColoredGraph& g, std::size_t d) {
  for (Vertex v = 0; v < g.order(); ++v)
    if (g.degree(v) > d) return true;
  return false;
}

}  // namespace oracle

inline bool oracle_solve(Problem p, const ProblemInstance& inst) {
  const auto& g = inst.graph;
  switch (p) {
    case Problem::IndependentSet: return oracle::independent_set(g, inst.k);
    case Problem::DominatingSet: return oracle::dominating_set(g, inst.k);
    case Problem::MulticoloredIndependentSet: return oracle::multicolored_independent_set(g, inst.k);
    case Problem::RedBlueDominatingSet: return oracle::red_blue_dominating_set(g, inst.k);
    case Problem::CliqueDomination: return oracle::clique_domination(g, inst.k, inst.l);
    case Problem::InducedSubgraphIsomorphism:
      if (!inst.pattern) throw UnsupportedProblem("InducedSubgraphIsomorphism needs a pattern");
      return oracle::induced_subgraph(g, *inst.pattern);
    case Problem::DegreeGreaterThan: return oracle::degree_greater_than(g, inst.d);
    case Problem::McSigma1: {
      if (!inst.formula) throw UnsupportedProblem("MC-Sigma1 needs a sentence");
      auto fr = classify(inst.formula);
      if (fr.side != Fragment::Side::Sigma || fr.t > 1) throw NotSigma1(to_string(inst.formula));
      return model_check(g, inst.formula);
    }
    case Problem::WeightedCircuitSat: return weighted_sat(graph_to_circuit(g), inst.k);
  }
  throw UnsupportedProblem(problem_name(p));
}

// ---------------------------------------------------------------- distributed

namespace detail {

// Even positions of a shortest path from `self` to a farthest vertex: pairwise
// at distance >= 2, hence independent.
inline std::vector<std::size_t> path_witness(const BallGatherer::Local& view) {
  std::vector<std::size_t> dist(view.ids.size(), kUnreachable), parent(view.ids.size(), kUnreachable);
  std::vector<std::size_t> queue{view.self};
  dist[view.self] = 0;
  for (std::size_t h = 0; h < queue.size(); ++h) {
    std::size_t u = queue[h];
    for (std::size_t w = 0; w < view.ids.size(); ++w)
      if (view.adj.adjacent(u, w) && dist[w] == kUnreachable) {
        dist[w] = dist[u] + 1;
        parent[w] = u;
        queue.push_back(w);
      }
  }
  std::size_t far = queue.back();
  std::vector<std::size_t> path;
  for (std::size_t v = far; v != kUnreachable; v = parent[v]) path.push_back(v);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < path.size(); i += 2) out.push_back(path[i]);
  return out;
}

}  // namespace detail

// Gather radius 2k. A complete view is solved exactly; an incomplete view
// certifies a shortest path with 2k+1 edges whose even positions form an
// independent set of size k+1.
inline NodeAlgorithm local_fpt_independent_set() {
  struct Program : NodeProgram {
    BallGatherer gather;
    void init(const NodeView& v) override { gather.init(v); }
    void step(NodeContext& ctx, const Inbox& inbox) override {
      const std::size_t k = ctx.view().k;
      gather.step(ctx, inbox);
      if (ctx.round() < 2 * k) return;
      auto view = gather.local();
      if (gather.complete()) {
        ctx.decide(has_independent_set(view.adj, k));
        return;
      }
      auto witness = detail::path_witness(view);
      for (std::size_t i = 0; i < witness.size(); ++i)
        for (std::size_t j = i + 1; j < witness.size(); ++j)
          if (view.adj.adjacent(witness[i], witness[j])) throw Error("independent-set witness is not independent");
      ctx.decide(witness.size() >= k);
    }
  };
  NodeAlgorithm alg;
  alg.name = "local-fpt-independent-set";
  alg.make = [] { return std::make_unique<Program>(); };
  alg.round_bound = [](std::size_t k) { return std::optional<std::size_t>(2 * k); };
  return alg;
}

// Gather radius 3k+1. A graph with a dominating set of size <= k has diameter
// at most 3k-1, so an incomplete view rejects.
inline NodeAlgorithm local_fpt_dominating_set() {
  struct Program : NodeProgram {
    BallGatherer gather;
    void init(const NodeView& v) override { gather.init(v); }
    void step(NodeContext& ctx, const Inbox& inbox) override {
      const std::size_t k = ctx.view().k;
      gather.step(ctx, inbox);
      if (ctx.round() < 3 * k + 1) return;
      if (!gather.complete()) {
        ctx.decide(false);
        return;
      }
      ctx.decide(has_dominating_set(gather.local().adj, k));
    }
  };
  NodeAlgorithm alg;
  alg.name = "local-fpt-dominating-set";
  alg.make = [] { return std::make_unique<Program>(); };
  alg.round_bound = [](std::size_t k) { return std::optional<std::size_t>(3 * k + 1); };
  return alg;
}

enum class IncompletePolicy { Accept, Reject };

// Gathers `radius` rounds and runs the oracle on the view when complete.
inline NodeAlgorithm gather_and_decide(Problem problem, std::size_t radius, IncompletePolicy policy,
                                       ProblemInstance extras = {}) {
  struct Program : NodeProgram {
    Problem problem;
    std::size_t radius;
    IncompletePolicy policy;
    std::shared_ptr<const ProblemInstance> extras;
    BallGatherer gather;
    void init(const NodeView& v) override { gather.init(v); }
    void step(NodeContext& ctx, const Inbox& inbox) override {
      gather.step(ctx, inbox);
      if (ctx.round() < radius) return;
      if (!gather.complete()) {
        ctx.decide(policy == IncompletePolicy::Accept);
        return;
      }
      ProblemInstance inst = *extras;
      inst.graph = gather.ball(radius).subgraph;
      inst.k = ctx.view().k;
      ctx.decide(oracle_solve(problem, inst));
    }
  };
  auto shared = std::make_shared<const ProblemInstance>(std::move(extras));
  NodeAlgorithm alg;
  alg.name = "gather-and-decide-" + problem_name(problem);
  alg.make = [=] {
    auto p = std::make_unique<Program>();
    p->problem = problem;
    p->radius = radius;
    p->policy = policy;
    p->extras = shared;
    return p;
  };
  alg.round_bound = [radius](std::size_t) { return std::optional<std::size_t>(radius); };
  return alg;
}

// Zero rounds: each node checks its own degree. Valid in every model.
inline NodeAlgorithm degree_greater_than_algorithm(std::size_t d) {
  struct Program : NodeProgram {
    std::size_t d = 0;
    void step(NodeContext& ctx, const Inbox&) override {
      ctx.charge(ctx.view().neighbors.size());
      ctx.decide(ctx.view().neighbors.size() > d);
    }
  };
  NodeAlgorithm alg;
  alg.name = "degree-greater-than";
  alg.make = [d] {
    auto p = std::make_unique<Program>();
    p->d = d;
    return p;
  };
  alg.round_bound = [](std::size_t) { return std::optional<std::size_t>(0); };
  return alg;
}

// CONGESTED-CLIQUE dominating set: every node streams its adjacency row as an
// n-bit vector over the ids of all_ids to every other node, ceil(n/B') chunks
// per round, then all solve the assembled graph. B' leaves room for a header.
inline NodeAlgorithm clique_dominating_set() {
  struct Program : NodeProgram {
    std::vector<NodeId> ids;
    std::vector<char> row;
    std::size_t self = 0, chunk = 1, chunks = 1;
    std::vector<std::vector<char>> rows;
    std::vector<std::size_t> received;
    void init(const NodeView& v) override {
      if (v.model != ModelKind::Clique) throw NotAvailableInModel("clique dominating set needs CONGESTED-CLIQUE");
      ids = v.all_ids;
      const std::size_t n = ids.size();
      self = static_cast<std::size_t>(std::lower_bound(ids.begin(), ids.end(), v.id) - ids.begin());
      row.assign(n, 0);
      for (NodeId w : v.neighbors) row[static_cast<std::size_t>(std::lower_bound(ids.begin(), ids.end(), w) - ids.begin())] = 1;
      chunk = std::max<std::size_t>(1, v.bandwidth);
      chunks = std::max<std::size_t>(1, (n + chunk - 1) / chunk);
      rows.assign(n, std::vector<char>(n, 0));
      rows[self] = row;
      received.assign(n, 0);
    }
    void step(NodeContext& ctx, const Inbox& inbox) override {
      const std::size_t n = ids.size();
      for (const auto& [from, m] : inbox) {
        auto s = static_cast<std::size_t>(std::lower_bound(ids.begin(), ids.end(), from) - ids.begin());
        MessageReader rd(m);
        std::size_t base = (ctx.round() - 1) * chunk;
        for (std::size_t i = base; i < std::min(n, base + chunk); ++i) rows[s][i] = rd.get_flag() ? 1 : 0;
        ++received[s];
      }
      if (ctx.round() == chunks) {
        BitGraph g(n);
        for (std::size_t u = 0; u < n; ++u)
          for (std::size_t w = u + 1; w < n; ++w)
            if (rows[u][w]) g.add_edge(u, w);
        ctx.charge(n * n);
        ctx.decide(has_dominating_set(g, ctx.view().k));
        return;
      }
      std::size_t base = ctx.round() * chunk;
      Message m;
      for (std::size_t i = base; i < std::min(n, base + chunk); ++i) m.put_flag(row[i] != 0);
      for (std::size_t j = 0; j < n; ++j)
        if (j != self) ctx.send(ids[j], m);
    }
  };
  NodeAlgorithm alg;
  alg.name = "clique-dominating-set";
  alg.make = [] { return std::make_unique<Program>(); };
  return alg;
}

}  // namespace dpc
