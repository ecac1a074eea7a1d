#pragma once
#include <bit>
#include <set>

#include "sim.hpp"

namespace dpc {

struct CenteredColoring {
  std::size_t p = 1;
  std::map<NodeId, std::size_t> colors;  // values in 1..m
  std::size_t m = 0;
};

// Roots map to themselves; depth counts edges to the root. height() counts
// vertices on the longest root-leaf chain, so td(G) is the least height.
struct EliminationForest {
  std::map<NodeId, NodeId> parent;
  std::map<NodeId, std::size_t> depth;

  std::size_t height() const {
    std::size_t h = 0;
    for (const auto& [v, d] : depth) h = std::max(h, d + 1);
    return h;
  }
  friend bool operator==(const EliminationForest&, const EliminationForest&) = default;
};

inline constexpr std::size_t kCenteredCheckCap = 18;
inline constexpr std::size_t kTreedepthCap = 12;
inline constexpr std::size_t kLowerBoundCap = 10;

namespace detail {

using Mask = std::uint32_t;

inline std::vector<Mask> neighbor_masks(const ColoredGraph& g) {
  std::vector<Mask> nb(g.order(), 0);
  for (Vertex v = 0; v < g.order(); ++v)
    for (Vertex w : g.neighbors(v)) nb[v] |= Mask{1} << w;
  return nb;
}

inline bool mask_connected(const std::vector<Mask>& nb, Mask s) {
  if (!s) return false;
  Mask seen = s & (~s + 1), frontier = seen;
  while (frontier) {
    Mask next = 0;
    for (Mask f = frontier; f; f &= f - 1) next |= nb[std::countr_zero(f)];
    next &= s & ~seen;
    seen |= next;
    frontier = next;
  }
  return seen == s;
}

// Each connected vertex set exactly once: fix the least member v, then branch
// on including or excluding the least candidate.
template <class F>
void enumerate_connected(const std::vector<Mask>& nb, F&& visit) {
  const std::size_t n = nb.size();
  std::function<void(Mask, Mask, Mask)> rec = [&](Mask s, Mask cand, Mask banned) {
    if (!cand) {
      visit(s);
      return;
    }
    Mask w = cand & (~cand + 1);
    Mask grown = s | w;
    rec(grown, (cand | nb[std::countr_zero(w)]) & ~grown & ~banned, banned);
    rec(s, cand & ~w, banned | w);
  };
  for (std::size_t v = 0; v < n; ++v) {
    Mask below = (Mask{1} << v) - 1, self = Mask{1} << v;
    rec(self, nb[v] & ~below & ~self, below);
  }
}

// Second enumerator: every mask, kept when connected.
template <class F>
void enumerate_connected_bruteforce(const std::vector<Mask>& nb, F&& visit) {
  const Mask limit = nb.empty() ? 0 : static_cast<Mask>((std::uint64_t{1} << nb.size()) - 1);
  for (Mask s = 1; s != 0 && s <= limit; ++s)
    if (mask_connected(nb, s)) visit(s);
}

inline std::vector<std::size_t> color_vector(const ColoredGraph& g, const CenteredColoring& c) {
  std::vector<std::size_t> out(g.order());
  for (Vertex v = 0; v < g.order(); ++v) {
    auto it = c.colors.find(g.id(v));
    if (it == c.colors.end()) throw Error("node " + std::to_string(g.id(v)) + " has no color");
    out[v] = it->second;
  }
  return out;
}

inline bool centered_on(Mask s, const std::vector<std::size_t>& col, std::size_t p) {
  std::map<std::size_t, std::size_t> count;
  for (Mask f = s; f; f &= f - 1) ++count[col[std::countr_zero(f)]];
  if (count.size() >= p + 1) return true;
  for (const auto& [c, k] : count)
    if (k == 1) return true;
  return false;
}

}  // namespace detail

// A connected vertex set violating the centered condition, if any.
inline std::optional<std::vector<NodeId>> centered_violation(const ColoredGraph& g, const CenteredColoring& c, std::size_t p,
                                                             bool bruteforce = false) {
  if (g.order() > kCenteredCheckCap)
    throw GraphTooLargeForExhaustiveCheck(std::to_string(g.order()) + " > " + std::to_string(kCenteredCheckCap));
  auto col = detail::color_vector(g, c);
  auto nb = detail::neighbor_masks(g);
  std::optional<detail::Mask> bad;
  auto visit = [&](detail::Mask s) {
    if (!bad && !detail::centered_on(s, col, p)) bad = s;
  };
  if (bruteforce)
    detail::enumerate_connected_bruteforce(nb, visit);
  else
    detail::enumerate_connected(nb, visit);
  if (!bad) return std::nullopt;
  std::vector<NodeId> out;
  for (detail::Mask f = *bad; f; f &= f - 1) out.push_back(g.id(static_cast<Vertex>(std::countr_zero(f))));
  return out;
}

inline bool verify_centered(const ColoredGraph& g, const CenteredColoring& c, std::size_t p) {
  return !centered_violation(g, c, p).has_value();
}

// ------------------------------------------------------------------ forests

inline bool validate_forest(const ColoredGraph& g, const EliminationForest& f) {
  if (f.parent.size() != g.order() || f.depth.size() != g.order()) return false;
  for (NodeId v : g.ids()) {
    auto p = f.parent.find(v);
    auto d = f.depth.find(v);
    if (p == f.parent.end() || d == f.depth.end() || !g.contains(p->second)) return false;
    if (p->second == v ? d->second != 0 : f.depth.at(p->second) + 1 != d->second) return false;
  }
  auto ancestor = [&](NodeId a, NodeId v) {
    while (true) {
      if (v == a) return true;
      NodeId up = f.parent.at(v);
      if (up == v) return false;
      v = up;
    }
  };
  for (auto [u, w] : g.edges()) {
    NodeId a = g.id(u), b = g.id(w);
    if (!ancestor(a, b) && !ancestor(b, a)) return false;
  }
  return true;
}

struct ForestTrace {
  struct Piece {
    std::size_t colors = 0;  // distinct colors in the component
    std::size_t hops = 0;    // BFS rounds from the least id until closure
  };
  std::vector<Piece> pieces;

  // Every component with i colors closed within 2^i - 2 hops.
  bool within_path_bound() const {
    for (const auto& pc : pieces)
      if (pc.hops + 2 > (std::size_t{1} << std::min<std::size_t>(pc.colors, 62))) return false;
    return true;
  }
};

// Members of g whose color lies in I.
inline std::vector<Vertex> color_class_vertices(const ColoredGraph& g, const CenteredColoring& c,
                                                const std::set<std::size_t>& colors) {
  std::vector<Vertex> out;
  for (Vertex v = 0; v < g.order(); ++v)
    if (colors.count(c.colors.at(g.id(v)))) out.push_back(v);
  return out;
}

// Elimination forest of G[I]: in every component of what is left, the least
// id among the vertices of unique color becomes the root and is removed.
inline EliminationForest elimination_forest_for(const ColoredGraph& g, const CenteredColoring& c,
                                                const std::set<std::size_t>& colors, ForestTrace* trace = nullptr) {
  if (colors.size() > c.p) throw Error("|I| = " + std::to_string(colors.size()) + " exceeds p = " + std::to_string(c.p));
  auto sub = g.induced(color_class_vertices(g, c, colors));
  EliminationForest f;
  std::vector<char> alive(sub.order(), 1);
  std::function<void(std::vector<Vertex>, std::optional<NodeId>, std::size_t)> build =
      [&](std::vector<Vertex> part, std::optional<NodeId> above, std::size_t depth) {
        std::vector<char> seen(sub.order(), 0);
        for (Vertex s : part) {
          if (seen[s]) continue;
          std::vector<Vertex> comp{s};
          std::vector<std::size_t> dist{0};
          seen[s] = 1;
          std::size_t hops = 0;
          for (std::size_t h = 0; h < comp.size(); ++h)
            for (Vertex w : sub.neighbors(comp[h]))
              if (alive[w] && !seen[w]) {
                seen[w] = 1;
                comp.push_back(w);
                dist.push_back(dist[h] + 1);
                hops = std::max(hops, dist.back());
              }
          std::map<std::size_t, std::size_t> count;
          for (Vertex v : comp) ++count[c.colors.at(sub.id(v))];
          if (trace) trace->pieces.push_back({count.size(), hops});
          std::optional<Vertex> root;
          for (Vertex v : comp)
            if (count[c.colors.at(sub.id(v))] == 1 && (!root || v < *root)) root = v;
          if (!root) throw NotCentered("component of " + std::to_string(sub.id(s)) + " has no color occurring once");
          NodeId rid = sub.id(*root);
          f.parent[rid] = above.value_or(rid);
          f.depth[rid] = depth;
          alive[*root] = 0;
          std::vector<Vertex> rest;
          for (Vertex v : comp)
            if (v != *root) rest.push_back(v);
          std::sort(rest.begin(), rest.end());
          if (!rest.empty()) build(rest, rid, depth + 1);
        }
      };
  std::vector<Vertex> all(sub.order());
  std::iota(all.begin(), all.end(), Vertex{0});
  build(all, std::nullopt, 0);
  return f;
}

// The same procedure as a CONGESTED-CLIQUE algorithm. Round 0 tells neighbors
// which vertices are in I. Each of the |I| phases floods the least id over the
// surviving part of G[I] for L = 2^|I| - 2 rounds, every member reports its
// color to that leader over a clique edge, and the leader announces the root
// it picked to all members, which then drop it.
class ForestProgram : public NodeProgram {
 public:
  ForestProgram(std::shared_ptr<const CenteredColoring> c, std::set<std::size_t> colors)
      : coloring_(std::move(c)), colors_(std::move(colors)) {}

  static std::size_t flood_rounds(std::size_t i) { return (std::size_t{1} << i) - 2; }
  static std::size_t total_rounds(std::size_t i) { return 1 + i * (flood_rounds(i) + 2); }

  void init(const NodeView& v) override {
    if (v.model != ModelKind::Clique) throw NotAvailableInModel("forest construction needs CONGESTED-CLIQUE");
    id_ = v.id;
    member_ = colors_.count(coloring_->colors.at(id_)) > 0;
    active_ = member_;
    parent_ = id_;
  }

  void step(NodeContext& ctx, const Inbox& inbox) override {
    const std::size_t i = colors_.size();
    const std::size_t len = flood_rounds(i) + 2;
    const std::size_t r = ctx.round();
    ctx.charge(inbox.size() + 1);
    if (r == 0) {
      Message m;
      m.put_flag(member_);
      ctx.send_all_neighbors(m);
      if (i == 0) ctx.decide(false);
      return;
    }
    const std::size_t phase = (r - 1) / len, off = (r - 1) % len;
    if (r == 1) {
      for (const auto& [from, m] : inbox) {
        MessageReader rd(m);
        if (rd.get_flag()) live_.insert(from);
      }
    } else if (off == 0) {
      absorb_announcement(inbox, phase - 1);
    } else if (off <= flood_rounds(i)) {
      for (const auto& [from, m] : inbox) {
        MessageReader rd(m);
        label_ = std::min<NodeId>(label_, rd.get_gamma());
      }
    } else if (off == flood_rounds(i) + 1 && active_ && label_ == id_) {
      reports_.emplace_back(id_, coloring_->colors.at(id_));
      for (const auto& [from, m] : inbox) {
        MessageReader rd(m);
        reports_.emplace_back(from, rd.get_gamma());
      }
      choose_root(ctx);
    }
    if (r == total_rounds(i)) {
      if (active_) throw NotCentered("node " + std::to_string(id_) + " left after " + std::to_string(i) + " phases");
      ctx.decide(false);
      return;
    }
    if (!active_) return;
    if (off == 0) label_ = id_;
    if (off < flood_rounds(i)) {
      Message m;
      m.put_gamma(label_);
      for (NodeId w : live_) ctx.send(w, m);
    } else if (off == flood_rounds(i) && label_ != id_) {
      Message m;
      m.put_gamma(coloring_->colors.at(id_));
      ctx.send(label_, m);
    }
  }

  bool member() const { return member_; }
  NodeId parent() const { return parent_; }
  std::size_t depth() const { return depth_; }

 private:
  void choose_root(NodeContext& ctx) {
    std::map<std::size_t, std::size_t> count;
    for (auto [v, col] : reports_) ++count[col];
    std::optional<NodeId> root;
    for (auto [v, col] : reports_)
      if (count[col] == 1 && (!root || v < *root)) root = v;
    if (!root) throw NotCentered("component led by " + std::to_string(id_) + " has no color occurring once");
    Message m;
    m.put_gamma(*root);
    for (auto [v, col] : reports_)
      if (v != id_) ctx.send(v, m);
    pending_root_ = *root;
    reports_.clear();
  }

  void absorb_announcement(const Inbox& inbox, std::size_t phase) {
    std::optional<NodeId> root = pending_root_;
    pending_root_.reset();
    for (const auto& [from, m] : inbox) {
      MessageReader rd(m);
      root = rd.get_gamma();
    }
    if (!active_ || !root) return;
    if (*root == id_) {
      depth_ = phase;
      active_ = false;
    } else {
      parent_ = *root;
    }
    live_.erase(*root);
  }

  std::shared_ptr<const CenteredColoring> coloring_;
  std::set<std::size_t> colors_;
  NodeId id_ = 0, label_ = 0, parent_ = 0;
  std::set<NodeId> live_;
  bool member_ = false, active_ = false;
  std::size_t depth_ = 0;
  std::vector<std::pair<NodeId, std::size_t>> reports_;
  std::optional<NodeId> pending_root_;
};

inline NodeAlgorithm forest_algorithm(const CenteredColoring& c, const std::set<std::size_t>& colors) {
  NodeAlgorithm alg;
  alg.name = "elimination-forest";
  auto shared = std::make_shared<const CenteredColoring>(c);
  alg.make = [shared, colors] { return std::make_unique<ForestProgram>(shared, colors); };
  const std::size_t total = colors.empty() ? 0 : ForestProgram::total_rounds(colors.size());
  alg.round_bound = [total](std::size_t) { return std::optional<std::size_t>(total); };
  return alg;
}

struct DistributedForest {
  EliminationForest forest;
  RunResult run;
};

inline DistributedForest elimination_forest_distributed(const ColoredGraph& g, const CenteredColoring& c,
                                                        const std::set<std::size_t>& colors, RunOptions opts = {}) {
  if (colors.size() > c.p) throw Error("|I| = " + std::to_string(colors.size()) + " exceeds p = " + std::to_string(c.p));
  auto alg = forest_algorithm(c, colors);
  std::vector<std::unique_ptr<NodeProgram>> programs;
  for (std::size_t i = 0; i < g.order(); ++i) programs.push_back(alg.make());
  Engine engine(Model{ModelKind::Clique}, g, 0, opts);
  DistributedForest out;
  out.run = engine.run(programs);
  for (Vertex v = 0; v < g.order(); ++v) {
    const auto& p = static_cast<const ForestProgram&>(*programs[v]);
    if (!p.member()) continue;
    out.forest.parent[g.id(v)] = p.parent();
    out.forest.depth[g.id(v)] = p.depth();
  }
  return out;
}

// ------------------------------------------------------------------ treedepth

namespace detail {

class TreedepthTable {
 public:
  explicit TreedepthTable(const ColoredGraph& g) : nb_(neighbor_masks(g)), memo_(std::size_t{1} << g.order(), 0xFF) {}

  std::size_t of(Mask s) {
    if (!s) return 0;
    auto& slot = memo_[s];
    if (slot != 0xFF) return slot;
    std::size_t best = 0;
    Mask first = s & (~s + 1);
    Mask comp = closure(first, s);
    if (comp != s) {
      best = std::max(of(comp), of(s & ~comp));
    } else {
      best = kUnreachable;
      for (Mask f = s; f; f &= f - 1) best = std::min(best, 1 + of(s & ~(f & (~f + 1))));
    }
    slot = static_cast<std::uint8_t>(best);
    return best;
  }

 private:
  Mask closure(Mask seed, Mask s) const {
    Mask seen = seed, frontier = seed;
    while (frontier) {
      Mask next = 0;
      for (Mask f = frontier; f; f &= f - 1) next |= nb_[std::countr_zero(f)];
      next &= s & ~seen;
      seen |= next;
      frontier = next;
    }
    return seen;
  }

  std::vector<Mask> nb_;
  std::vector<std::uint8_t> memo_;
};

}  // namespace detail

// Least height of an elimination forest; td(K1) = 1, td of the empty graph 0.
inline std::size_t treedepth_exact(const ColoredGraph& g) {
  if (g.order() > kTreedepthCap)
    throw GraphTooLarge("treedepth oracle supports n <= " + std::to_string(kTreedepthCap));
  detail::TreedepthTable t(g);
  return t.of(g.order() ? static_cast<detail::Mask>((std::uint64_t{1} << g.order()) - 1) : 0);
}

// Every connected induced subgraph of treedepth i <= p carries >= i colors.
inline bool colors_lower_bound_check(const ColoredGraph& g, const CenteredColoring& c, std::size_t p) {
  if (g.order() > kLowerBoundCap) throw GraphTooLarge("color lower bound check supports n <= " + std::to_string(kLowerBoundCap));
  auto col = detail::color_vector(g, c);
  detail::TreedepthTable t(g);
  bool ok = true;
  detail::enumerate_connected(detail::neighbor_masks(g), [&](detail::Mask s) {
    if (!ok) return;
    std::size_t td = t.of(s);
    if (td > p) return;
    std::set<std::size_t> seen;
    for (detail::Mask f = s; f; f &= f - 1) seen.insert(col[std::countr_zero(f)]);
    if (seen.size() < td) ok = false;
  });
  return ok;
}

// ------------------------------------------------------------------ coloring

// Depth coloring of a balanced elimination forest: each component is rooted
// at the vertex whose removal leaves the smallest largest component (least
// id on ties). The top vertex of any connected subgraph has a color nobody
// else in it has, so the result is centered for every p. On graphs within the
// exhaustive cap the result is verified and any witness recolored fresh.
inline CenteredColoring centered_coloring(const ColoredGraph& g, std::size_t p) {
  if (p < 1) throw Error("centered coloring needs p >= 1");
  CenteredColoring out;
  out.p = p;
  std::vector<char> alive(g.order(), 1);
  auto component = [&](Vertex s) {
    std::vector<Vertex> comp{s};
    std::vector<char> seen(g.order(), 0);
    seen[s] = 1;
    for (std::size_t h = 0; h < comp.size(); ++h)
      for (Vertex w : g.neighbors(comp[h]))
        if (alive[w] && !seen[w]) {
          seen[w] = 1;
          comp.push_back(w);
        }
    return comp;
  };
  std::function<void(std::vector<Vertex>, std::size_t)> place = [&](std::vector<Vertex> part, std::size_t depth) {
    std::vector<char> done(g.order(), 0);
    for (Vertex s : part) {
      if (done[s] || !alive[s]) continue;
      auto comp = component(s);
      for (Vertex v : comp) done[v] = 1;
      Vertex best = comp.front();
      std::size_t best_size = kUnreachable;
      std::sort(comp.begin(), comp.end());
      for (Vertex v : comp) {
        alive[v] = 0;
        std::size_t largest = 0;
        std::vector<char> seen(g.order(), 0);
        for (Vertex w : comp)
          if (w != v && !seen[w]) {
            auto piece = component(w);
            for (Vertex x : piece) seen[x] = 1;
            largest = std::max(largest, piece.size());
          }
        alive[v] = 1;
        if (largest < best_size) {
          best_size = largest;
          best = v;
        }
      }
      out.colors[g.id(best)] = depth + 1;
      out.m = std::max(out.m, depth + 1);
      alive[best] = 0;
      std::vector<Vertex> rest;
      for (Vertex v : comp)
        if (v != best) rest.push_back(v);
      place(rest, depth + 1);
    }
  };
  std::vector<Vertex> all(g.order());
  std::iota(all.begin(), all.end(), Vertex{0});
  place(all, 0);
  if (g.order() <= kCenteredCheckCap)
    while (auto bad = centered_violation(g, out, p))
      for (NodeId v : *bad) out.colors[v] = ++out.m;
  return out;
}

inline CenteredColoring distinct_coloring(const ColoredGraph& g, std::size_t p) {
  CenteredColoring c;
  c.p = p;
  for (NodeId v : g.ids()) c.colors[v] = ++c.m;
  return c;
}

}  // namespace dpc
