#pragma once
#include <numeric>

#include "embedding.hpp"

namespace dpc {

struct Reduction {
  std::string name;
  Problem source{};
  Problem target{};
  std::function<EmbeddedInstance(const ProblemInstance&, RuleMode)> build;

  EmbeddedInstance apply(const ProblemInstance& inst, RuleMode mode = RuleMode::Fast) const { return build(inst, mode); }
};

namespace detail {

inline std::vector<std::string> color_names(const NodeView& view) {
  std::vector<std::string> out;
  for (auto c : view.colors) out.push_back((*view.unary_names)[c]);
  return out;
}

inline std::vector<std::string> pinned_names(char prefix, std::size_t count) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= count; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

// Index i of "P<i>", or 0 when the name is not of that form.
inline std::size_t color_number(const std::string& name) {
  if (auto p = pinned_index(name, 'P')) return *p;
  return 0;
}

inline EmbeddedInstance shell(std::string name, Problem source, Problem target, const ColoredGraph& host) {
  EmbeddedInstance e;
  e.reduction = std::move(name);
  e.source = source;
  e.target = target;
  e.host = host;
  return e;
}

}  // namespace detail

// G' = G with nu = id and every edge on itself.
inline Reduction identity_reduction(Problem p) {
  Reduction red{"identity", p, p, {}};
  red.build = [p](const ProblemInstance& inst, RuleMode mode) {
    LocalRule rule{"identity", 0, [](const ColoredGraph&, const NodeView& view) {
                     HostStore st;
                     st.hosted.push_back({{view.id}, view.id, detail::color_names(view)});
                     for (std::size_t i = 0; i < view.neighbors.size(); ++i) {
                       NodeId w = view.neighbors[i];
                       std::vector<std::string> out, in;
                       if (!view.labels.empty()) {
                         for (auto r : view.labels[i].out) out.push_back((*view.binary_names)[r]);
                         for (auto r : view.labels[i].in) in.push_back((*view.binary_names)[r]);
                       }
                       st.incident.push_back(make_edge({view.id}, {w}, {view.id, w}, out, in));
                     }
                     return st;
                   }};
    auto e = detail::shell("identity", p, p, inst.graph);
    e.stores = apply_rule(inst.graph, rule, inst.k, mode);
    e.unary_names = inst.graph.unary_names();
    e.binary_names = inst.graph.binary_names();
    e.k_prime = inst.k;
    e.extras = inst;
    e.rounds = 0;
    e.declared = {1, 1, 1, 0, inst.k};
    return e;
  };
  return red;
}

// Multicolored independent set to itself with P_i and P_{k+1-i} swapped.
inline Reduction recolor_mis_reduction() {
  Reduction red{"recolor-mis", Problem::MulticoloredIndependentSet, Problem::MulticoloredIndependentSet, {}};
  red.build = [](const ProblemInstance& inst, RuleMode mode) {
    const std::size_t k = inst.k;
    LocalRule rule{"recolor-mis", 0, [](const ColoredGraph&, const NodeView& view) {
                     HostStore st;
                     std::vector<std::string> colors;
                     for (const auto& c : detail::color_names(view)) {
                       auto i = detail::color_number(c);
                       colors.push_back(i >= 1 && i <= view.k ? "P" + std::to_string(view.k + 1 - i) : c);
                     }
                     st.hosted.push_back({{view.id}, view.id, colors});
                     for (NodeId w : view.neighbors) st.incident.push_back(make_edge({view.id}, {w}, {view.id, w}));
                     return st;
                   }};
    auto e = detail::shell("recolor-mis", Problem::MulticoloredIndependentSet, Problem::MulticoloredIndependentSet, inst.graph);
    e.stores = apply_rule(inst.graph, rule, k, mode);
    auto names = inst.graph.unary_names();
    for (const auto& nm : detail::pinned_names('P', k))
      if (std::find(names.begin(), names.end(), nm) == names.end()) names.push_back(nm);
    e.unary_names = detail::order_names(names, 'P');
    e.k_prime = k;
    e.declared = {1, 1, 1, 0, k};
    return e;
  };
  return red;
}

// CliqueDomination to RedBlueDominatingSet. Every vertex is red (v,0); every
// vertex of an l-clique Q gets a blue copy (v,Q); (u,i) ~ (v,0) for each
// host edge uv. A host needs its neighbors' cliques, hence radius 2.
inline Reduction clique_dom_reduction() {
  Reduction red{"clique_dom_to_rbds", Problem::CliqueDomination, Problem::RedBlueDominatingSet, {}};
  red.build = [](const ProblemInstance& inst, RuleMode mode) {
    const std::size_t l = inst.l;
    LocalRule rule{"clique-dom", 2, [l](const ColoredGraph& b, const NodeView& view) {
                     const NodeId v = view.id;
                     auto blue_keys = [&](NodeId u) {
                       std::vector<VKey> keys;
                       Vertex x = b.index_of(u);
                       for (const auto& q : oracle::cliques_of_size(b, l)) {
                         if (std::find(q.begin(), q.end(), x) == q.end()) continue;
                         VKey key{u, 1};
                         for (Vertex y : q) key.push_back(b.id(y));
                         std::sort(key.begin() + 2, key.end());
                         keys.push_back(std::move(key));
                       }
                       return keys;
                     };
                     HostStore st;
                     st.hosted.push_back({{v, 0}, v, {"P1"}});
                     auto own_blue = blue_keys(v);
                     for (const auto& key : own_blue) st.hosted.push_back({key, v, {"P2"}});
                     for (NodeId w : view.neighbors) {
                       st.incident.push_back(make_edge({v, 0}, {w, 0}, {v, w}));
                       for (const auto& key : own_blue) st.incident.push_back(make_edge(key, {w, 0}, {v, w}));
                       for (const auto& key : blue_keys(w)) st.incident.push_back(make_edge(key, {v, 0}, {w, v}));
                     }
                     return st;
                   }};
    auto e = detail::shell("clique_dom_to_rbds", Problem::CliqueDomination, Problem::RedBlueDominatingSet, inst.graph);
    e.stores = apply_rule(inst.graph, rule, inst.k, mode);
    e.unary_names = {"P1", "P2"};
    e.k_prime = inst.k;
    e.rounds = rule.radius;
    e.declared = {static_cast<double>(l + 1), 1, kUnbounded, 2, inst.k};
    return e;
  };
  return red;
}

// ---------------------------------------------------------------- conjunctive queries

struct CqLiteral {
  enum class Kind { Unary, Adjacent, Relation, Equal };
  Kind kind = Kind::Unary;
  bool positive = true;
  std::size_t x = 0, y = 0;
  std::size_t index = 0;  // unary or relation index in the host vocabulary
};

// Exists x_0..x_{vars-1}: conjunction of literals.
struct ConjunctiveQuery {
  std::size_t vars = 0;
  std::vector<CqLiteral> literals;
  bool image_nodes = false;  // one node per image set rather than per assignment
};

namespace detail {

inline bool literal_holds(const ColoredGraph& g, const CqLiteral& l, const std::vector<Vertex>& img) {
  bool v = false;
  switch (l.kind) {
    case CqLiteral::Kind::Unary: v = g.has_color(img[l.x], l.index); break;
    case CqLiteral::Kind::Adjacent: v = g.adjacent(img[l.x], img[l.y]); break;
    case CqLiteral::Kind::Relation: v = l.index < g.binary_count() && g.related(l.index, img[l.x], img[l.y]); break;
    case CqLiteral::Kind::Equal: v = img[l.x] == img[l.y]; break;
  }
  return v == l.positive;
}

inline bool links(const CqLiteral& l) { return l.positive && l.kind != CqLiteral::Kind::Unary; }

struct CqPlan {
  ConjunctiveQuery q;
  std::vector<std::vector<std::size_t>> comps;  // variables in BFS order over positive links
  std::vector<std::size_t> comp_of;
  std::vector<std::optional<CqLiteral>> via;  // linking literal to an earlier variable
  std::vector<std::size_t> parent;
  std::vector<std::vector<std::size_t>> internal;  // literal indices per component
  std::vector<std::size_t> cross;
  std::size_t span = 0;  // largest component size
};

inline CqPlan plan_query(ConjunctiveQuery q) {
  CqPlan p;
  const std::size_t m = q.vars;
  p.comp_of.assign(m, kUnreachable);
  p.via.assign(m, std::nullopt);
  p.parent.assign(m, 0);
  for (std::size_t s = 0; s < m; ++s) {
    if (p.comp_of[s] != kUnreachable) continue;
    const std::size_t c = p.comps.size();
    p.comps.push_back({s});
    p.comp_of[s] = c;
    for (std::size_t head = 0; head < p.comps[c].size(); ++head) {
      std::size_t x = p.comps[c][head];
      for (const auto& l : q.literals) {
        if (!links(l) || (l.x != x && l.y != x)) continue;
        std::size_t y = l.x == x ? l.y : l.x;
        if (p.comp_of[y] != kUnreachable) continue;
        p.comp_of[y] = c;
        p.via[y] = l;
        p.parent[y] = x;
        p.comps[c].push_back(y);
      }
    }
    p.span = std::max(p.span, p.comps[c].size());
  }
  p.internal.assign(p.comps.size(), {});
  for (std::size_t i = 0; i < q.literals.size(); ++i) {
    const auto& l = q.literals[i];
    std::size_t cy = l.kind == CqLiteral::Kind::Unary ? p.comp_of[l.x] : p.comp_of[l.y];
    if (p.comp_of[l.x] == cy)
      p.internal[cy].push_back(i);
    else
      p.cross.push_back(i);
  }
  p.q = std::move(q);
  return p;
}

struct CqNode {
  VKey key;
  NodeId host;
  std::size_t comp;
  std::vector<Vertex> img;  // ball vertices by query variable; other components unset
};

// Nodes of component c whose least image id is `host`, enumerated in ball b.
inline std::vector<CqNode> enumerate_component(const CqPlan& p, const ColoredGraph& b, std::size_t c, NodeId host) {
  const auto& vars = p.comps[c];
  const Vertex h = b.index_of(host);
  auto dist = bfs_distances(b, h);
  std::vector<Vertex> img(p.q.vars, 0);
  std::vector<CqNode> out;
  std::set<VKey> seen;
  std::function<void(std::size_t)> go = [&](std::size_t pos) {
    if (pos == vars.size()) {
      bool has_host = false;
      for (auto x : vars) has_host = has_host || img[x] == h;
      if (!has_host) return;
      for (auto i : p.internal[c])
        if (!literal_holds(b, p.q.literals[i], img)) return;
      VKey key{host, 1, c};
      for (auto x : vars) key.push_back(b.id(img[x]));
      if (p.q.image_nodes) {
        std::sort(key.begin() + 3, key.end());
        key.erase(std::unique(key.begin() + 3, key.end()), key.end());
      }
      if (seen.insert(key).second) out.push_back({key, host, c, img});
      return;
    }
    const std::size_t x = vars[pos];
    auto try_vertex = [&](Vertex w) {
      if (b.id(w) < host) return;
      img[x] = w;
      go(pos + 1);
    };
    if (pos == 0) {
      for (Vertex w = 0; w < b.order(); ++w)
        if (dist[w] != kUnreachable && dist[w] < vars.size()) try_vertex(w);
    } else if (p.via[x]->kind == CqLiteral::Kind::Equal) {
      try_vertex(img[p.parent[x]]);
    } else {
      for (Vertex w : b.neighbors(img[p.parent[x]])) try_vertex(w);
    }
  };
  go(0);
  return out;
}

inline bool conflict(const CqPlan& p, const ColoredGraph& b, const CqNode& a, const CqNode& c) {
  if (a.comp == c.comp) return false;
  std::vector<Vertex> img(p.q.vars, 0);
  for (auto x : p.comps[a.comp]) img[x] = a.img[x];
  for (auto x : p.comps[c.comp]) img[x] = c.img[x];
  for (auto i : p.cross) {
    const auto& l = p.q.literals[i];
    auto cx = p.comp_of[l.x], cy = p.comp_of[l.y];
    bool relevant = (cx == a.comp && cy == c.comp) || (cx == c.comp && cy == a.comp);
    if (relevant && !literal_holds(b, l, img)) return true;
  }
  return false;
}

// Least-id shortest path from `from` to `to`; both ends compute it alike.
inline std::vector<NodeId> least_path(const ColoredGraph& b, NodeId from, NodeId to) {
  Vertex s = b.index_of(from), t = b.index_of(to);
  auto dist = bfs_distances(b, t);
  std::vector<NodeId> path{from};
  for (Vertex u = s; u != t;) {
    Vertex next = std::numeric_limits<Vertex>::max();
    for (Vertex w : b.neighbors(u))
      if (dist[w] + 1 == dist[u] && (next == std::numeric_limits<Vertex>::max() || b.id(w) < b.id(next))) next = w;
    u = next;
    path.push_back(b.id(u));
  }
  return path;
}

inline VirtualEdge edge_between(const ColoredGraph& b, const VKey& x, NodeId hx, const VKey& y, NodeId hy) {
  auto path = x < y ? least_path(b, hx, hy) : least_path(b, hy, hx);
  if (!(x < y)) std::reverse(path.begin(), path.end());
  return make_edge(x, y, std::move(path));
}

}  // namespace detail

// One node per satisfying assignment of each positive-link component,
// colored by component; conflict edges join nodes of different components
// that violate a cross literal. Every host also carries an uncolored anchor
// (v,0) joined to the anchors of its neighbors and to its own nodes.
inline EmbeddedInstance cq_to_mis(const ColoredGraph& g, const ConjunctiveQuery& query, std::string name, Problem source,
                                  std::size_t k, RuleMode mode) {
  auto plan = std::make_shared<detail::CqPlan>(detail::plan_query(query));
  const std::size_t m = std::max<std::size_t>(query.vars, 1);
  LocalRule rule{name, 2 * m, [plan, m](const ColoredGraph& b, const NodeView& view) {
                   const NodeId v = view.id;
                   const Vertex c = b.index_of(v);
                   auto dist = bfs_distances(b, c);
                   HostStore st;
                   st.hosted.push_back({{v, 0}, v, {}});
                   for (NodeId w : view.neighbors) st.incident.push_back(make_edge({v, 0}, {w, 0}, {v, w}));
                   std::vector<detail::CqNode> mine, near;
                   for (Vertex u = 0; u < b.order(); ++u) {
                     if (dist[u] > m) continue;
                     for (std::size_t comp = 0; comp < plan->comps.size(); ++comp)
                       for (auto& x : detail::enumerate_component(*plan, b, comp, b.id(u))) {
                         if (u == c) mine.push_back(x);
                         near.push_back(std::move(x));
                       }
                   }
                   for (const auto& x : mine) {
                     st.hosted.push_back({x.key, v, {"P" + std::to_string(x.comp + 1)}});
                     st.incident.push_back(make_edge({v, 0}, x.key, {v}));
                     for (const auto& y : near)
                       if (detail::conflict(*plan, b, x, y)) st.incident.push_back(detail::edge_between(b, x.key, v, y.key, y.host));
                   }
                   return st;
                 }};
  auto e = detail::shell(std::move(name), source, Problem::MulticoloredIndependentSet, g);
  e.stores = apply_rule(g, rule, k, mode);
  e.k_prime = plan->comps.size();
  e.unary_names = detail::pinned_names('P', e.k_prime);
  e.rounds = rule.radius;
  e.declared = {static_cast<double>(query.vars + 1), 2 * m, kUnbounded, 2 * m, e.k_prime};
  return e;
}

// The induced-copy query of H: adjacency and non-adjacency for every pair,
// pairwise distinct images, and H's colors by name.
inline ConjunctiveQuery pattern_query(const ColoredGraph& g, const ColoredGraph& h) {
  ConjunctiveQuery q;
  q.vars = h.order();
  q.image_nodes = true;
  for (Vertex a = 0; a < h.order(); ++a) {
    for (auto p : h.colors_of(a)) {
      auto idx = g.unary_index(h.unary_names()[p]);
      q.literals.push_back({CqLiteral::Kind::Unary, true, a, a, idx.value_or(kUnreachable)});
    }
    for (Vertex b = a + 1; b < h.order(); ++b) {
      q.literals.push_back({CqLiteral::Kind::Adjacent, h.adjacent(a, b), a, b, 0});
      q.literals.push_back({CqLiteral::Kind::Equal, false, a, b, 0});
    }
  }
  return q;
}

// Induced subgraph isomorphism to multicolored independent set: one node per
// induced copy of each component of H, hosted at the copy's least id.
inline Reduction isi_reduction(std::optional<ColoredGraph> fixed = std::nullopt) {
  Reduction red{"isi_to_mis", Problem::InducedSubgraphIsomorphism, Problem::MulticoloredIndependentSet, {}};
  red.build = [fixed](const ProblemInstance& inst, RuleMode mode) {
    const ColoredGraph* h = fixed ? &*fixed : inst.pattern ? &*inst.pattern : nullptr;
    if (!h) throw UnsupportedProblem("isi_to_mis needs a pattern");
    return cq_to_mis(inst.graph, pattern_query(inst.graph, *h), "isi_to_mis", Problem::InducedSubgraphIsomorphism,
                     h->order(), mode);
  };
  return red;
}

// ---------------------------------------------------------------- union

// Product-color blow-up of two multicolored-independent-set embeddings over
// the same host: a node of color i on side 1 becomes p2 copies colored
// (i-1)p2+j, a node of color j on side 2 becomes p1 copies colored
// (i-1)p2+j. Edges become complete bipartite between copies. Within each
// host, the least node of one side is linked to every node of the other.
inline EmbeddedInstance union_instances(const EmbeddedInstance& a, const EmbeddedInstance& b, bool require_surjective = true) {
  if (a.host != b.host) throw ProblemMismatch("union needs a common host graph");
  const std::size_t p1 = a.k_prime, p2 = b.k_prime;
  auto e = detail::shell("union(" + a.reduction + "," + b.reduction + ")", a.source, Problem::MulticoloredIndependentSet, a.host);
  e.k_prime = p1 * p2;
  e.unary_names = detail::pinned_names('P', e.k_prime);
  e.rounds = std::max(a.rounds, b.rounds);
  e.declared = {a.declared.s + b.declared.s, std::max(a.declared.r, b.declared.r), kUnbounded,
                std::max(a.declared.t, b.declared.t), p1 * p2};
  e.model = a.model;

  auto color_of = [](const VirtualNode& x) -> std::size_t {
    std::size_t found = 0;
    for (const auto& c : x.colors)
      if (auto i = detail::color_number(c)) {
        if (found) throw WrongColoring("union input node carries two colors");
        found = i;
      }
    return found;
  };
  // side 1: copy j of color i -> (i-1)p2+j; side 2: copy i of color j -> (i-1)p2+j
  auto copies = [&](int side) { return std::max<std::size_t>(side == 1 ? p2 : p1, 1); };
  auto blown = [&](int side, const VKey& key, std::size_t copy) {
    VKey out{static_cast<std::uint64_t>(side), copy};
    out.insert(out.end(), key.begin(), key.end());
    return out;
  };
  auto color_name = [&](int side, std::size_t color, std::size_t copy) -> std::vector<std::string> {
    if (color == 0 || p1 * p2 == 0) return {};
    std::size_t i = side == 1 ? color : copy, j = side == 1 ? copy : color;
    return {"P" + std::to_string((i - 1) * p2 + j)};
  };

  std::set<NodeId> hosts;
  for (const auto& [h, st] : a.stores) hosts.insert(h);
  for (const auto& [h, st] : b.stores) hosts.insert(h);
  for (NodeId h : hosts) {
    HostStore out;
    std::optional<VKey> least[2];
    for (int side : {1, 2}) {
      const auto& src = side == 1 ? a : b;
      auto it = src.stores.find(h);
      if (it == src.stores.end()) continue;
      const std::size_t cp = copies(side);
      for (const auto& x : it->second.hosted)
        for (std::size_t j = 1; j <= cp; ++j) {
          auto key = blown(side, x.key, j);
          out.hosted.push_back({key, h, color_name(side, color_of(x), j)});
          if (!least[side - 1] || key < *least[side - 1]) least[side - 1] = key;
        }
      for (const auto& ed : it->second.incident)
        for (std::size_t i = 1; i <= cp; ++i)
          for (std::size_t j = 1; j <= cp; ++j)
            out.incident.push_back(make_edge(blown(side, ed.a, i), blown(side, ed.b, j), ed.path, ed.forward, ed.backward));
    }
    if (!least[0] || !least[1]) {
      if (require_surjective) throw NotSurjective("host " + std::to_string(h) + " hosts no node of one side");
      e.stores[h] = std::move(out);
      continue;
    }
    for (const auto& x : out.hosted)
      if (x.key != *least[0] && x.key != *least[1]) out.incident.push_back(make_edge(*least[x.key[0] == 1 ? 1 : 0], x.key, {h}));
    out.incident.push_back(make_edge(*least[0], *least[1], {h}));
    out.normalize();
    e.stores[h] = std::move(out);
  }
  return e;
}

// Decides "source instance is in A or in B"; both reductions target
// multicolored independent set and read the same instance.
inline Reduction union_combinator(Reduction ra, Reduction rb) {
  if (ra.target != Problem::MulticoloredIndependentSet || rb.target != Problem::MulticoloredIndependentSet)
    throw ProblemMismatch("union_combinator needs reductions to MulticoloredIndependentSet");
  Reduction red{"union(" + ra.name + "," + rb.name + ")", ra.source, Problem::MulticoloredIndependentSet, {}};
  red.build = [ra, rb](const ProblemInstance& inst, RuleMode mode) {
    return union_instances(ra.apply(inst, mode), rb.apply(inst, mode));
  };
  return red;
}

// ---------------------------------------------------------------- MC(Sigma_1)

inline void require_relations_on_edges(const ColoredGraph& g) {
  for (std::size_t r = 0; r < g.binary_count(); ++r)
    for (auto [u, v] : g.relation(r))
      if (!g.adjacent(u, v))
        throw UnsupportedVocabulary("relation " + g.binary_names()[r] + " holds off the topology at (" +
                                    std::to_string(g.id(u)) + "," + std::to_string(g.id(v)) + ")");
}

// Existential sentence to one conjunctive query per DNF disjunct.
inline std::vector<ConjunctiveQuery> sigma1_queries(const ColoredGraph& g, const Formula& f) {
  require_sentence(f);
  auto fr = classify(f);
  if (fr.side != Fragment::Side::Sigma || fr.t > 1) throw NotSigma1(to_string(f));
  auto pre = split_prenex(canonical_form(f));
  std::map<std::string, std::size_t> var;
  for (const auto& [q, name] : pre.prefix) var.emplace(name, var.size());
  std::vector<ConjunctiveQuery> out;
  for (const auto& conjunct : dnf(pre.matrix)) {
    ConjunctiveQuery q;
    q.vars = var.size();
    for (const auto& lit : conjunct) {
      const auto& atom = lit.atom;
      CqLiteral l;
      l.positive = lit.positive;
      l.x = var.at(atom->a);
      switch (atom->kind) {
        case FormulaKind::Unary:
          l.kind = CqLiteral::Kind::Unary;
          l.y = l.x;
          l.index = atom->index;
          break;
        case FormulaKind::Equal:
          l.kind = CqLiteral::Kind::Equal;
          l.y = var.at(atom->b);
          break;
        case FormulaKind::Binary:
          l.y = var.at(atom->b);
          if (atom->index == 0 && g.binary_count() == 0) {
            l.kind = CqLiteral::Kind::Adjacent;
          } else {
            l.kind = CqLiteral::Kind::Relation;
            l.index = atom->index == 0 ? 0 : atom->index - 1;
          }
          break;
        default: throw NotPrenex("non-atomic literal");
      }
      q.literals.push_back(l);
    }
    out.push_back(std::move(q));
  }
  return out;
}

// Model checking of existential sentences to multicolored independent set:
// one embedding per disjunct, folded with the union blow-up.
inline Reduction mc_sigma1_reduction() {
  Reduction red{"mc_sigma1_to_mis", Problem::McSigma1, Problem::MulticoloredIndependentSet, {}};
  red.build = [](const ProblemInstance& inst, RuleMode mode) {
    if (!inst.formula) throw UnsupportedProblem("MC-Sigma1 needs a sentence");
    require_relations_on_edges(inst.graph);
    auto queries = sigma1_queries(inst.graph, inst.formula);
    const std::size_t size = formula_size(inst.formula);
    std::optional<EmbeddedInstance> acc;
    for (const auto& q : queries) {
      auto e = cq_to_mis(inst.graph, q, "mc_sigma1_to_mis", Problem::McSigma1, size, mode);
      acc = acc ? union_instances(*acc, e) : std::move(e);
    }
    acc->reduction = "mc_sigma1_to_mis";
    acc->source = Problem::McSigma1;
    return std::move(*acc);
  };
  return red;
}

// ---------------------------------------------------------------- composition

// Composite of e1 (host G, produced G1) and e2 (host G1): nodes of e2 are
// placed through nu1, and each e2 path is the concatenation of the e1 paths
// of its steps, shortcut to a simple path.
inline EmbeddedInstance compose_instances(const EmbeddedInstance& e1, const EmbeddedInstance& e2) {
  auto p1 = collect(e1);
  auto host1 = [&](NodeId virt) { return p1.nodes.at(virt - 1).host; };
  std::map<std::pair<NodeId, NodeId>, std::vector<NodeId>> route;
  for (const auto& ed : p1.edges) {
    NodeId a = p1.rank.at(ed.a) + 1, b = p1.rank.at(ed.b) + 1;
    route[{a, b}] = ed.path;
    route[{b, a}] = std::vector<NodeId>(ed.path.rbegin(), ed.path.rend());
  }
  auto lift = [&](const std::vector<NodeId>& path) {
    std::vector<NodeId> out{host1(path.front())};
    for (std::size_t i = 1; i < path.size(); ++i) {
      auto it = route.find({path[i - 1], path[i]});
      if (it == route.end()) throw InvalidEmbedding("composed path steps over a non-edge of the intermediate instance");
      out.insert(out.end(), it->second.begin() + 1, it->second.end());
    }
    std::vector<NodeId> simple;
    for (NodeId h : out) {
      auto seen = std::find(simple.begin(), simple.end(), h);
      if (seen != simple.end())
        simple.erase(seen + 1, simple.end());
      else
        simple.push_back(h);
    }
    return simple;
  };
  auto e = detail::shell(e1.reduction + ";" + e2.reduction, e1.source, e2.target, e1.host);
  e.model = e1.model;
  e.k_prime = e2.k_prime;
  e.unary_names = e2.unary_names;
  e.binary_names = e2.binary_names;
  e.extras = e2.extras;
  for (NodeId h : e1.host.ids()) e.stores[h];
  for (const auto& [h2, st] : e2.stores) {
    NodeId h = host1(h2);
    auto& out = e.stores[h];
    for (auto x : st.hosted) {
      x.host = h;
      out.hosted.push_back(std::move(x));
    }
  }
  auto p2 = collect(e2);
  for (const auto& ed : p2.edges) {
    auto lifted = ed;
    lifted.path = lift(ed.path);
    e.stores[lifted.path.front()].incident.push_back(lifted);
    if (lifted.path.back() != lifted.path.front()) e.stores[lifted.path.back()].incident.push_back(lifted);
  }
  for (auto& [h, st] : e.stores) st.normalize();
  auto b1 = measure(e1);
  e.rounds = e1.rounds + e2.rounds * simulation_slot(b1, e1.model);
  const auto& d1 = e1.declared;
  const auto& d2 = e2.declared;
  std::size_t c3 = d1.c == kUnbounded || d2.c == kUnbounded ? kUnbounded : d1.c * d2.c;
  std::size_t slot = e1.model == ModelKind::Local
                         ? std::max<std::size_t>(1, d1.r)
                         : std::max<std::size_t>(1, d1.r * d1.r * d1.c * static_cast<std::size_t>(std::ceil(d1.s)));
  e.declared = {d1.s * d2.s, d1.r * d2.r, c3, d1.t + d2.t * slot, d2.p};
  return e;
}

inline Reduction compose(Reduction r1, Reduction r2) {
  if (r1.target != r2.source)
    throw ProblemMismatch(r1.name + " produces " + problem_name(r1.target) + " but " + r2.name + " reads " +
                          problem_name(r2.source));
  Reduction red{r1.name + ";" + r2.name, r1.source, r2.target, {}};
  red.build = [r1, r2](const ProblemInstance& inst, RuleMode mode) {
    auto e1 = r1.apply(inst, mode);
    auto e2 = r2.apply(target_instance(e1), mode);
    return compose_instances(e1, e2);
  };
  return red;
}

// Registry used by the CLI.
inline Reduction reduction_between(Problem from, Problem to) {
  if (from == to) return identity_reduction(from);
  if (from == Problem::CliqueDomination && to == Problem::RedBlueDominatingSet) return clique_dom_reduction();
  if (from == Problem::InducedSubgraphIsomorphism && to == Problem::MulticoloredIndependentSet) return isi_reduction();
  if (from == Problem::McSigma1 && to == Problem::MulticoloredIndependentSet) return mc_sigma1_reduction();
  throw UnsupportedProblem("no reduction from " + problem_name(from) + " to " + problem_name(to));
}

}  // namespace dpc
