#pragma once
#include <numeric>

#include "logic.hpp"
#include "solvers.hpp"

namespace dpc {

// Exists x_1..x_s: alpha^(r)(x_i) for all i, pairwise dist(x_i, x_j) > 2r.
// alpha has the single free variable `var` and is evaluated in the ball of
// radius r around its argument.
struct BasicLocalSentence {
  std::size_t s = 1;
  std::size_t r = 0;
  Formula alpha;
  std::string var = "x";
};

inline bool alpha_holds(const ColoredGraph& g, const BasicLocalSentence& b, Vertex a) {
  auto local = ball(g, g.id(a), b.r);
  return UnaryQuery(b.alpha, b.var).holds(local.subgraph, local.subgraph.index_of(g.id(a)));
}

inline std::vector<Vertex> alpha_vertices(const ColoredGraph& g, const BasicLocalSentence& b) {
  std::vector<Vertex> out;
  for (Vertex a = 0; a < g.order(); ++a)
    if (alpha_holds(g, b, a)) out.push_back(a);
  return out;
}

inline std::vector<std::vector<std::size_t>> all_distances(const ColoredGraph& g) {
  std::vector<std::vector<std::size_t>> d;
  for (Vertex v = 0; v < g.order(); ++v) d.push_back(bfs_distances(g, v));
  return d;
}

// Size of a largest subset of `cands` with pairwise distance > 2r, capped at `cap`.
inline std::size_t max_scattered(const std::vector<std::vector<std::size_t>>& dist, const std::vector<Vertex>& cands,
                                 std::size_t r, std::size_t cap) {
  BitGraph close(cands.size());
  for (std::size_t i = 0; i < cands.size(); ++i)
    for (std::size_t j = i + 1; j < cands.size(); ++j)
      if (dist[cands[i]][cands[j]] <= 2 * r) close.add_edge(i, j);
  std::size_t best = 0;
  while (best < cap && has_independent_set(close, best + 1)) ++best;
  return best;
}

// Brute force: alpha-vertices by ball evaluation, then an s-scattered subset.
inline bool eval_basic_local(const ColoredGraph& g, const BasicLocalSentence& b) {
  auto dist = all_distances(g);
  return max_scattered(dist, alpha_vertices(g, b), b.r, b.s) >= b.s;
}

// ---------------------------------------------------------------- unfolded sentence

namespace detail {

inline std::string fresh_var(std::size_t& counter) { return "u" + std::to_string(++counter); }

// dist(u, v) <= d as a first-order formula.
inline Formula dist_at_most(const std::string& u, const std::string& v, std::size_t d, std::size_t& counter) {
  if (d == 0) return fo::eq(u, v);
  auto z = fresh_var(counter);
  return fo::disj(fo::eq(u, v), fo::exists(z, fo::conj(fo::rel(0, u, z), dist_at_most(z, v, d - 1, counter))));
}

inline Formula relativize(const Formula& f, const std::string& center, std::size_t r, std::size_t& counter) {
  switch (f->kind) {
    case FormulaKind::Exists:
      return fo::exists(f->a, fo::conj(dist_at_most(center, f->a, r, counter), relativize(f->kids[0], center, r, counter)));
    case FormulaKind::Forall:
      return fo::forall(f->a, fo::implies(dist_at_most(center, f->a, r, counter), relativize(f->kids[0], center, r, counter)));
    case FormulaKind::Not:
    case FormulaKind::And:
    case FormulaKind::Or: {
      std::vector<Formula> kids;
      for (const auto& k : f->kids) kids.push_back(relativize(k, center, r, counter));
      return fo::make(f->kind, {}, {}, 0, kids);
    }
    default: return f;
  }
}

}  // namespace detail

// The sentence with alpha relativized to the r-ball and distances unfolded
// into existential paths; evaluated on the whole graph it agrees with
// eval_basic_local.
inline Formula unfold_basic_local(const BasicLocalSentence& b) {
  std::size_t counter = 0;
  std::vector<std::string> xs;
  for (std::size_t i = 1; i <= b.s; ++i) xs.push_back("w" + std::to_string(i));
  auto alpha = canonical_form(b.alpha);
  std::vector<Formula> parts;
  for (const auto& x : xs) {
    auto inst = rename_free(alpha, {{b.var, x}});
    parts.push_back(detail::relativize(canonical_form(inst), x, b.r, counter));
  }
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = i + 1; j < xs.size(); ++j) parts.push_back(fo::neg(detail::dist_at_most(xs[i], xs[j], 2 * b.r, counter)));
  Formula f = fo::conj_all(parts, fo::truth(xs.empty() ? "w0" : xs[0]));
  for (auto it = xs.rbegin(); it != xs.rend(); ++it) f = fo::exists(*it, f);
  return f;
}

// ---------------------------------------------------------------- alpha decoration

struct AlphaDecoration {
  std::vector<NodeId> alpha_vertices;
  std::vector<std::pair<NodeId, NodeId>> alpha_edges;  // u < v, distance <= 2r
  std::vector<std::vector<NodeId>> components;         // ascending ids, ordered by least id
  std::vector<std::size_t> k_values;                   // per component, capped at s
  std::vector<std::size_t> alpha_diameters;            // per component, w.r.t. alpha-edges
};

// The alpha-vertices and alpha-edges `center` can determine from its ball of
// radius 3r alone: marks of vertices within 2r, and its incident alpha-edges.
struct LocalAlphaView {
  bool is_alpha = false;
  std::vector<NodeId> alpha_neighbors;
  std::size_t ball_radius = 0;
};

inline LocalAlphaView local_alpha_view(const ColoredGraph& g, const BasicLocalSentence& b, NodeId center) {
  LocalAlphaView out;
  out.ball_radius = 3 * b.r;
  auto big = ball(g, center, out.ball_radius).subgraph;
  Vertex c = big.index_of(center);
  auto dist = bfs_distances(big, c);
  for (Vertex u = 0; u < big.order(); ++u) {
    if (dist[u] > 2 * b.r) continue;
    bool mark = alpha_holds(big, b, u);
    if (u == c)
      out.is_alpha = mark;
    else if (mark)
      out.alpha_neighbors.push_back(big.id(u));
  }
  if (!out.is_alpha) out.alpha_neighbors.clear();
  return out;
}

inline AlphaDecoration analyze_alpha(const ColoredGraph& g, const BasicLocalSentence& b) {
  AlphaDecoration d;
  auto dist = all_distances(g);
  auto av = alpha_vertices(g, b);
  for (auto a : av) d.alpha_vertices.push_back(g.id(a));
  std::vector<std::vector<std::size_t>> adj(av.size());
  for (std::size_t i = 0; i < av.size(); ++i)
    for (std::size_t j = i + 1; j < av.size(); ++j)
      if (dist[av[i]][av[j]] <= 2 * b.r) {
        d.alpha_edges.emplace_back(g.id(av[i]), g.id(av[j]));
        adj[i].push_back(j);
        adj[j].push_back(i);
      }
  auto alpha_bfs = [&](std::size_t s) {
    std::vector<std::size_t> dd(av.size(), kUnreachable);
    std::vector<std::size_t> q{s};
    dd[s] = 0;
    for (std::size_t h = 0; h < q.size(); ++h)
      for (auto w : adj[q[h]])
        if (dd[w] == kUnreachable) {
          dd[w] = dd[q[h]] + 1;
          q.push_back(w);
        }
    return dd;
  };
  std::vector<char> seen(av.size(), 0);
  for (std::size_t i = 0; i < av.size(); ++i) {
    if (seen[i]) continue;
    auto dd = alpha_bfs(i);
    std::vector<Vertex> members;
    std::vector<NodeId> ids;
    for (std::size_t j = 0; j < av.size(); ++j)
      if (dd[j] != kUnreachable) {
        seen[j] = 1;
        members.push_back(av[j]);
        ids.push_back(g.id(av[j]));
      }
    std::size_t diam = 0;
    for (std::size_t j = 0; j < av.size(); ++j)
      if (dd[j] != kUnreachable)
        for (auto x : alpha_bfs(j))
          if (x != kUnreachable) diam = std::max(diam, x);
    d.components.push_back(ids);
    d.alpha_diameters.push_back(diam);
    d.k_values.push_back(max_scattered(dist, members, b.r, b.s));
  }
  return d;
}

// No s-scattered set of alpha-vertices iff every alpha-component has
// alpha-diameter < (2r+1)s, there are fewer than s components, and the
// per-component maxima sum to less than s.
inline bool three_conditions(const AlphaDecoration& d, const BasicLocalSentence& b) {
  const std::size_t k = b.s;
  bool c1 = std::all_of(d.alpha_diameters.begin(), d.alpha_diameters.end(), [&](auto x) { return x < (2 * b.r + 1) * k; });
  bool c2 = d.components.size() < k;
  bool c3 = std::accumulate(d.k_values.begin(), d.k_values.end(), std::size_t{0}) < k;
  return c1 && c2 && c3;
}

struct Decorated {
  ColoredGraph h;
  AlphaDecoration decoration;
  std::vector<Formula> psi;  // psi'_0 .. psi'_{s-1}
};

inline std::string k_predicate(std::size_t i) { return "K" + std::to_string(i); }

// H = g plus P_alpha ("PA"), K<k_i> on the vertices of each component,
// E1 = topology, E2 = alpha-edges, E3 = pairs at alpha-distance in
// [1, (2r+1)s). g ⊭ b iff H satisfies one of the returned sentences.
inline Decorated decorate_alpha(const ColoredGraph& g, const BasicLocalSentence& b) {
  if (g.binary_count() > 0) throw UnsupportedVocabulary("decorate_alpha expects a graph without binary relations");
  const std::size_t k = b.s;
  Decorated out;
  out.decoration = analyze_alpha(g, b);
  const auto& d = out.decoration;

  GraphBuilder hb;
  for (const auto& nm : g.unary_names()) hb.unary(nm);
  hb.unary("PA");
  for (std::size_t i = 1; i <= k; ++i) hb.unary(k_predicate(i));
  for (const auto& nm : {"E1", "E2", "E3"}) hb.binary(nm);
  for (Vertex v = 0; v < g.order(); ++v) {
    std::vector<std::string> cs;
    for (auto p : g.colors_of(v)) cs.push_back(g.unary_names()[p]);
    hb.node(g.id(v), cs);
  }
  for (auto [u, v] : g.edges()) {
    hb.edge(g.id(u), g.id(v), {"E1"});
    hb.relation("E1", g.id(v), g.id(u));
  }
  for (auto a : d.alpha_vertices) hb.color(a, "PA");
  for (auto [u, v] : d.alpha_edges) {
    hb.relation("E2", u, v);
    hb.relation("E2", v, u);
  }
  const std::size_t reach = (2 * b.r + 1) * k;
  for (std::size_t c = 0; c < d.components.size(); ++c) {
    for (auto a : d.components[c]) hb.color(a, k_predicate(std::max<std::size_t>(1, std::min(d.k_values[c], k))));
    // alpha-distances inside the component
    const auto& ids = d.components[c];
    std::map<NodeId, std::vector<NodeId>> adj;
    for (auto [u, v] : d.alpha_edges)
      if (std::binary_search(ids.begin(), ids.end(), u)) {
        adj[u].push_back(v);
        adj[v].push_back(u);
      }
    for (auto s : ids) {
      std::map<NodeId, std::size_t> dd{{s, 0}};
      std::vector<NodeId> q{s};
      for (std::size_t h = 0; h < q.size(); ++h)
        for (auto w : adj[q[h]])
          if (!dd.count(w)) {
            dd[w] = dd[q[h]] + 1;
            q.push_back(w);
          }
      for (auto [w, x] : dd)
        if (x >= 1 && x < reach) hb.relation("E3", s, w);
    }
  }
  out.h = hb.build(false);

  const auto pa = *out.h.unary_index("PA");
  out.psi.push_back(fo::forall("y", fo::neg(fo::pred(pa, "y"))));
  for (std::size_t i = 1; i < k; ++i) {
    std::vector<std::string> xs;
    for (std::size_t j = 1; j <= i; ++j) xs.push_back("x" + std::to_string(j));
    std::vector<Formula> parts;
    for (std::size_t j = 0; j < i; ++j)
      for (std::size_t jj = j + 1; jj < i; ++jj) parts.push_back(fo::neg(fo::eq(xs[j], xs[jj])));
    for (const auto& x : xs) parts.push_back(fo::pred(pa, x));
    std::vector<Formula> cover;
    for (const auto& x : xs) cover.push_back(fo::disj(fo::eq("y", x), fo::rel(3, "y", x)));
    parts.push_back(fo::implies(fo::pred(pa, "y"), fo::disj_all(cover, fo::falsity("y"))));
    // sum of the component values of x_1..x_i below k, expanded over all tuples
    std::vector<Formula> sums;
    std::vector<std::size_t> val(i, 1);
    while (true) {
      if (std::accumulate(val.begin(), val.end(), std::size_t{0}) < k) {
        std::vector<Formula> conj;
        for (std::size_t j = 0; j < i; ++j) conj.push_back(fo::pred(*out.h.unary_index(k_predicate(val[j])), xs[j]));
        sums.push_back(fo::conj_all(conj, fo::truth("y")));
      }
      std::size_t j = 0;
      while (j < i && val[j] == k - 1) val[j++] = 1;
      if (j == i) break;
      ++val[j];
    }
    parts.push_back(fo::disj_all(sums, fo::falsity("y")));
    Formula f = fo::forall("y", fo::conj_all(parts, fo::truth("y")));
    for (auto it = xs.rbegin(); it != xs.rend(); ++it) f = fo::exists(*it, f);
    out.psi.push_back(f);
  }
  return out;
}

inline bool any_psi_holds(const Decorated& d) {
  return std::any_of(d.psi.begin(), d.psi.end(), [&](const Formula& f) { return model_check(d.h, f); });
}

// ---------------------------------------------------------------- merges

namespace detail {

struct Sigma21 {
  std::vector<std::string> exists;
  std::optional<std::string> forall;
  Formula matrix;
};

inline Sigma21 split_sigma21(const Formula& f) {
  require_sentence(f);
  Prenex p;
  try {
    p = split_prenex(f);
  } catch (const NotPrenex&) {
    throw NotSigma21(to_string(f));
  }
  Sigma21 s;
  s.matrix = p.matrix;
  for (std::size_t i = 0; i < p.prefix.size(); ++i) {
    auto [q, v] = p.prefix[i];
    if (q == FormulaKind::Exists && !s.forall)
      s.exists.push_back(v);
    else if (q == FormulaKind::Forall && !s.forall)
      s.forall = v;
    else
      throw NotSigma21(to_string(f));
  }
  return s;
}

inline Sigma21 rename_apart(const Sigma21& s, const std::string& prefix, const std::string& y) {
  std::map<std::string, std::string> m;
  Sigma21 out;
  for (std::size_t i = 0; i < s.exists.size(); ++i) {
    out.exists.push_back(prefix + std::to_string(i + 1));
    m[s.exists[i]] = out.exists.back();
  }
  if (s.forall) m[*s.forall] = y;
  out.forall = y;
  out.matrix = rename_free(s.matrix, m);
  return out;
}

inline Formula assemble_sigma21(const std::vector<std::string>& exists, const std::string& y, Formula matrix) {
  Formula f = fo::forall(y, std::move(matrix));
  for (auto it = exists.rbegin(); it != exists.rend(); ++it) f = fo::exists(*it, f);
  return f;
}

}  // namespace detail

// Exists a Exists b Forall y (f'(a, y) & h'(b, y)).
inline Formula conjunction_merge(const Formula& f, const Formula& h) {
  auto a = detail::rename_apart(detail::split_sigma21(f), "a", "y");
  auto b = detail::rename_apart(detail::split_sigma21(h), "b", "y");
  auto ex = a.exists;
  ex.insert(ex.end(), b.exists.begin(), b.exists.end());
  return detail::assemble_sigma21(ex, "y", fo::conj(a.matrix, b.matrix));
}

// Exists a Exists b Exists w1 Exists w2 Forall y
//   ((w1 = w2 -> f'(a, y)) & (w1 != w2 -> h'(b, y))).
// Equivalent to f | h on graphs with at least two vertices.
inline Formula disjunction_merge(const Formula& f, const Formula& h) {
  auto a = detail::rename_apart(detail::split_sigma21(f), "a", "y");
  auto b = detail::rename_apart(detail::split_sigma21(h), "b", "y");
  auto ex = a.exists;
  ex.insert(ex.end(), b.exists.begin(), b.exists.end());
  ex.push_back("w1");
  ex.push_back("w2");
  auto same = fo::eq("w1", "w2");
  return detail::assemble_sigma21(ex, "y", fo::conj(fo::implies(same, a.matrix), fo::implies(fo::neg(same), b.matrix)));
}

inline void require_disjunction_target(const ColoredGraph& g) {
  if (g.order() < 2) throw GraphTooSmall("the disjunction merge needs at least two vertices");
}

// f | h on g: the merged sentence on graphs of order >= 2, direct model
// checking on a single vertex.
inline bool eval_disjunction(const ColoredGraph& g, const Formula& f, const Formula& h) {
  if (g.order() < 2) return model_check(g, f) || model_check(g, h);
  return model_check(g, disjunction_merge(f, h));
}

}  // namespace dpc
