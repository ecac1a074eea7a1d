#pragma once
#include <algorithm>
#include <charconv>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace dpc {

using NodeId = std::uint64_t;
using Vertex = std::uint32_t;

inline constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max();

namespace detail {

inline std::size_t words_for(std::size_t n) { return (n + 63) / 64; }

inline bool test_bit(const std::uint64_t* row, std::size_t i) { return (row[i >> 6] >> (i & 63)) & 1U; }
inline void set_bit(std::uint64_t* row, std::size_t i) { row[i >> 6] |= std::uint64_t{1} << (i & 63); }

// "P3" with prefix 'P' -> 3; anything else -> nullopt.
inline std::optional<std::size_t> pinned_index(std::string_view name, char prefix) {
  if (name.size() < 2 || name[0] != prefix) return std::nullopt;
  std::size_t k = 0;
  auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), k);
  if (ec != std::errc() || ptr != name.data() + name.size() || k == 0 || name[1] == '0') return std::nullopt;
  return k;
}

// Orders predicate names: `<prefix><k>` sits at index k-1, gaps get their
// canonical name, other names follow in declaration order.
inline std::vector<std::string> order_names(const std::vector<std::string>& declared, char prefix) {
  std::size_t max_pinned = 0;
  std::vector<std::string> unpinned;
  for (const auto& name : declared) {
    if (auto k = pinned_index(name, prefix))
      max_pinned = std::max(max_pinned, *k);
    else if (std::find(unpinned.begin(), unpinned.end(), name) == unpinned.end())
      unpinned.push_back(name);
  }
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= max_pinned; ++i) out.push_back(std::string(1, prefix) + std::to_string(i));
  out.insert(out.end(), unpinned.begin(), unpinned.end());
  return out;
}

}  // namespace detail

// Finite simple graph with unique node ids, named unary predicates (colors)
// and named binary relations over ordered pairs. Vertices are addressed by
// dense index; index order is ascending id order.
class ColoredGraph {
 public:
  ColoredGraph() = default;

  // ids must be sorted and distinct; edges are index pairs.
  static ColoredGraph assemble(std::vector<NodeId> ids, const std::vector<std::pair<Vertex, Vertex>>& edges,
                               std::vector<std::string> unary_names = {},
                               const std::vector<std::vector<Vertex>>& unary_members = {},
                               std::vector<std::string> binary_names = {},
                               const std::vector<std::vector<std::pair<Vertex, Vertex>>>& binary_pairs = {}) {
    ColoredGraph g;
    const std::size_t n = ids.size();
    g.ids_ = std::move(ids);
    g.words_ = detail::words_for(n);
    g.adj_.assign(n, {});
    g.matrix_.assign(n * g.words_, 0);
    for (auto [u, v] : edges) {
      if (u == v) throw Error("self-loop on node " + std::to_string(g.ids_[u]));
      if (g.adjacent(u, v)) throw Error("multi-edge between " + std::to_string(g.ids_[u]) + " and " + std::to_string(g.ids_[v]));
      detail::set_bit(g.row(u), v);
      detail::set_bit(g.row(v), u);
      g.adj_[u].push_back(v);
      g.adj_[v].push_back(u);
      ++g.edge_count_;
    }
    for (auto& a : g.adj_) std::sort(a.begin(), a.end());
    g.unary_names_ = std::move(unary_names);
    g.unary_.assign(g.unary_names_.size(), std::vector<std::uint64_t>(g.words_, 0));
    for (std::size_t p = 0; p < unary_members.size() && p < g.unary_.size(); ++p)
      for (Vertex v : unary_members[p]) detail::set_bit(g.unary_[p].data(), v);
    g.binary_names_ = std::move(binary_names);
    g.binary_pairs_.assign(g.binary_names_.size(), {});
    g.binary_matrix_.assign(g.binary_names_.size(), std::vector<std::uint64_t>(n * g.words_, 0));
    for (std::size_t r = 0; r < binary_pairs.size() && r < g.binary_names_.size(); ++r) {
      auto pairs = binary_pairs[r];
      std::sort(pairs.begin(), pairs.end());
      pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
      for (auto [u, v] : pairs) detail::set_bit(g.binary_matrix_[r].data() + u * g.words_, v);
      g.binary_pairs_[r] = std::move(pairs);
    }
    return g;
  }

  std::size_t order() const { return ids_.size(); }
  std::size_t size() const { return edge_count_; }
  std::span<const NodeId> ids() const { return ids_; }
  NodeId id(Vertex v) const { return ids_[v]; }
  std::optional<Vertex> find(NodeId id) const {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    if (it == ids_.end() || *it != id) return std::nullopt;
    return static_cast<Vertex>(it - ids_.begin());
  }
  Vertex index_of(NodeId id) const {
    if (auto v = find(id)) return *v;
    throw UnknownNode("id " + std::to_string(id));
  }
  bool contains(NodeId id) const { return find(id).has_value(); }

  std::span<const Vertex> neighbors(Vertex v) const { return adj_[v]; }
  std::size_t degree(Vertex v) const { return adj_[v].size(); }
  bool adjacent(Vertex u, Vertex v) const { return detail::test_bit(row(u), v); }
  const std::uint64_t* adjacency_row(Vertex v) const { return matrix_.data() + v * words_; }
  std::size_t words() const { return words_; }
  std::vector<std::pair<Vertex, Vertex>> edges() const {
    std::vector<std::pair<Vertex, Vertex>> out;
    out.reserve(edge_count_);
    for (Vertex u = 0; u < order(); ++u)
      for (Vertex v : adj_[u])
        if (u < v) out.emplace_back(u, v);
    return out;
  }

  std::size_t unary_count() const { return unary_names_.size(); }
  const std::vector<std::string>& unary_names() const { return unary_names_; }
  std::optional<std::size_t> unary_index(std::string_view name) const {
    for (std::size_t i = 0; i < unary_names_.size(); ++i)
      if (unary_names_[i] == name) return i;
    return std::nullopt;
  }
  bool has_color(Vertex v, std::size_t pred) const {
    return pred < unary_.size() && detail::test_bit(unary_[pred].data(), v);
  }
  std::vector<Vertex> members(std::size_t pred) const {
    std::vector<Vertex> out;
    for (Vertex v = 0; v < order(); ++v)
      if (has_color(v, pred)) out.push_back(v);
    return out;
  }
  std::vector<std::size_t> colors_of(Vertex v) const {
    std::vector<std::size_t> out;
    for (std::size_t p = 0; p < unary_.size(); ++p)
      if (has_color(v, p)) out.push_back(p);
    return out;
  }

  std::size_t binary_count() const { return binary_names_.size(); }
  const std::vector<std::string>& binary_names() const { return binary_names_; }
  std::optional<std::size_t> binary_index(std::string_view name) const {
    if (name == "E") return binary_names_.empty() ? std::nullopt : std::optional<std::size_t>(0);
    for (std::size_t i = 0; i < binary_names_.size(); ++i)
      if (binary_names_[i] == name) return i;
    return std::nullopt;
  }
  const std::vector<std::pair<Vertex, Vertex>>& relation(std::size_t r) const { return binary_pairs_[r]; }
  bool related(std::size_t r, Vertex u, Vertex v) const {
    return detail::test_bit(binary_matrix_[r].data() + u * words_, v);
  }
  // The distinguished relation E: the first binary relation if any, else the edge set.
  bool distinguished(Vertex u, Vertex v) const {
    return binary_names_.empty() ? adjacent(u, v) : related(0, u, v);
  }

  bool is_connected() const {
    if (order() == 0) return true;
    std::vector<char> seen(order(), 0);
    std::vector<Vertex> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
      Vertex u = stack.back();
      stack.pop_back();
      for (Vertex w : adj_[u])
        if (!seen[w]) {
          seen[w] = 1;
          ++count;
          stack.push_back(w);
        }
    }
    return count == order();
  }

  // Induced subgraph on the given vertices; ids, colors and relations kept.
  ColoredGraph induced(std::vector<Vertex> keep) const {
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
    std::vector<Vertex> local(order(), std::numeric_limits<Vertex>::max());
    std::vector<NodeId> ids;
    ids.reserve(keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i) {
      local[keep[i]] = static_cast<Vertex>(i);
      ids.push_back(ids_[keep[i]]);
    }
    auto inside = [&](Vertex v) { return local[v] != std::numeric_limits<Vertex>::max(); };
    std::vector<std::pair<Vertex, Vertex>> es;
    for (Vertex u : keep)
      for (Vertex v : adj_[u])
        if (u < v && inside(v)) es.emplace_back(local[u], local[v]);
    std::vector<std::vector<Vertex>> um(unary_.size());
    for (std::size_t p = 0; p < unary_.size(); ++p)
      for (Vertex v : keep)
        if (has_color(v, p)) um[p].push_back(local[v]);
    std::vector<std::vector<std::pair<Vertex, Vertex>>> bp(binary_pairs_.size());
    for (std::size_t r = 0; r < binary_pairs_.size(); ++r)
      for (auto [u, v] : binary_pairs_[r])
        if (inside(u) && inside(v)) bp[r].emplace_back(local[u], local[v]);
    return assemble(std::move(ids), es, unary_names_, um, binary_names_, bp);
  }

  friend bool operator==(const ColoredGraph& a, const ColoredGraph& b) {
    return a.ids_ == b.ids_ && a.matrix_ == b.matrix_ && a.unary_names_ == b.unary_names_ && a.unary_ == b.unary_ &&
           a.binary_names_ == b.binary_names_ && a.binary_pairs_ == b.binary_pairs_;
  }

 private:
  std::uint64_t* row(Vertex v) { return matrix_.data() + v * words_; }
  const std::uint64_t* row(Vertex v) const { return matrix_.data() + v * words_; }

  std::vector<NodeId> ids_;
  std::vector<std::vector<Vertex>> adj_;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> matrix_;
  std::size_t edge_count_ = 0;
  std::vector<std::string> unary_names_;
  std::vector<std::vector<std::uint64_t>> unary_;
  std::vector<std::string> binary_names_;
  std::vector<std::vector<std::pair<Vertex, Vertex>>> binary_pairs_;
  std::vector<std::vector<std::uint64_t>> binary_matrix_;
};

// Name-based construction. `P<k>` and `E<k>` land at index k-1; "E" means E1.
class GraphBuilder {
 public:
  GraphBuilder& unary(const std::string& name) {
    unary_declared_.push_back(name);
    return *this;
  }
  GraphBuilder& binary(const std::string& name) {
    binary_declared_.push_back(canonical_binary(name));
    return *this;
  }
  GraphBuilder& node(NodeId id, const std::vector<std::string>& colors = {}) {
    nodes_.push_back(id);
    for (const auto& c : colors) color(id, c);
    return *this;
  }
  GraphBuilder& color(NodeId id, const std::string& name) {
    unary_declared_.push_back(name);
    colors_.emplace_back(id, name);
    return *this;
  }
  GraphBuilder& edge(NodeId u, NodeId v, const std::vector<std::string>& labels = {}) {
    edges_.emplace_back(u, v);
    for (const auto& l : labels) relation(l, u, v);
    return *this;
  }
  GraphBuilder& relation(const std::string& name, NodeId u, NodeId v) {
    auto n = canonical_binary(name);
    binary_declared_.push_back(n);
    pairs_.push_back({n, u, v});
    return *this;
  }

  ColoredGraph build(bool require_connected = true) const {
    std::vector<NodeId> ids = nodes_;
    std::sort(ids.begin(), ids.end());
    for (std::size_t i = 1; i < ids.size(); ++i)
      if (ids[i] == ids[i - 1]) throw DuplicateId("id " + std::to_string(ids[i]));
    auto index = [&](NodeId id) -> Vertex {
      auto it = std::lower_bound(ids.begin(), ids.end(), id);
      if (it == ids.end() || *it != id) throw UnknownNode("id " + std::to_string(id));
      return static_cast<Vertex>(it - ids.begin());
    };
    std::vector<std::pair<Vertex, Vertex>> es;
    es.reserve(edges_.size());
    for (auto [u, v] : edges_) es.emplace_back(index(u), index(v));
    auto unames = detail::order_names(unary_declared_, 'P');
    auto bnames = detail::order_names(binary_declared_, 'E');
    std::vector<std::vector<Vertex>> um(unames.size());
    for (const auto& [id, name] : colors_) {
      auto p = std::find(unames.begin(), unames.end(), name) - unames.begin();
      um[p].push_back(index(id));
    }
    std::vector<std::vector<std::pair<Vertex, Vertex>>> bp(bnames.size());
    for (const auto& pr : pairs_) {
      auto r = std::find(bnames.begin(), bnames.end(), pr.name) - bnames.begin();
      bp[r].emplace_back(index(pr.u), index(pr.v));
    }
    auto g = ColoredGraph::assemble(std::move(ids), es, std::move(unames), um, std::move(bnames), bp);
    if (require_connected && !g.is_connected()) throw DisconnectedGraph("graph is not connected");
    return g;
  }

 private:
  struct Pair {
    std::string name;
    NodeId u, v;
  };
  static std::string canonical_binary(const std::string& name) { return name == "E" ? "E1" : name; }

  std::vector<NodeId> nodes_;
  std::vector<std::pair<NodeId, NodeId>> edges_;
  std::vector<std::pair<NodeId, std::string>> colors_;
  std::vector<Pair> pairs_;
  std::vector<std::string> unary_declared_;
  std::vector<std::string> binary_declared_;
};

inline std::vector<std::size_t> bfs_distances(const ColoredGraph& g, Vertex source) {
  std::vector<std::size_t> dist(g.order(), kUnreachable);
  std::vector<Vertex> queue{source};
  dist[source] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    Vertex u = queue[head];
    for (Vertex w : g.neighbors(u))
      if (dist[w] == kUnreachable) {
        dist[w] = dist[u] + 1;
        queue.push_back(w);
      }
  }
  return dist;
}

inline std::size_t eccentricity(const ColoredGraph& g, Vertex v) {
  std::size_t e = 0;
  for (auto d : bfs_distances(g, v)) {
    if (d == kUnreachable) throw DisconnectedGraph("eccentricity on a disconnected graph");
    e = std::max(e, d);
  }
  return e;
}

inline std::size_t diameter(const ColoredGraph& g) {
  std::size_t d = 0;
  for (Vertex v = 0; v < g.order(); ++v) d = std::max(d, eccentricity(g, v));
  return d;
}

struct Ball {
  NodeId center = 0;
  std::size_t radius = 0;
  ColoredGraph subgraph;
};

inline std::vector<Vertex> ball_vertices(const ColoredGraph& g, Vertex center, std::size_t r) {
  std::vector<std::size_t> dist(g.order(), kUnreachable);
  std::vector<Vertex> queue{center};
  dist[center] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    Vertex u = queue[head];
    if (dist[u] == r) continue;
    for (Vertex w : g.neighbors(u))
      if (dist[w] == kUnreachable) {
        dist[w] = dist[u] + 1;
        queue.push_back(w);
      }
  }
  return queue;
}

inline Ball ball(const ColoredGraph& g, NodeId v, std::size_t r) {
  Vertex c = g.index_of(v);
  return Ball{v, r, g.induced(ball_vertices(g, c, r))};
}

inline bool balls_identical(const ColoredGraph& g1, const ColoredGraph& g2, NodeId v, std::size_t r) {
  return ball(g1, v, r).subgraph == ball(g2, v, r).subgraph;
}

inline std::string serialize(const ColoredGraph& g) {
  std::ostringstream out;
  out << "graph " << g.order() << "\n";
  if (g.unary_count() > 0) {
    out << "unary";
    for (const auto& n : g.unary_names()) out << ' ' << n;
    out << "\n";
  }
  if (g.binary_count() > 0) {
    out << "binary";
    for (const auto& n : g.binary_names()) out << ' ' << n;
    out << "\n";
  }
  for (Vertex v = 0; v < g.order(); ++v) {
    out << "node " << g.id(v);
    for (auto p : g.colors_of(v)) out << ' ' << g.unary_names()[p];
    out << "\n";
  }
  for (auto [u, v] : g.edges()) {
    out << "edge " << g.id(u) << ' ' << g.id(v);
    for (std::size_t r = 0; r < g.binary_count(); ++r)
      if (g.related(r, u, v)) out << ' ' << g.binary_names()[r];
    out << "\n";
  }
  // relation pairs not written as an edge label above
  std::map<std::pair<Vertex, Vertex>, std::vector<std::string>> rest;
  for (std::size_t r = 0; r < g.binary_count(); ++r)
    for (auto [u, v] : g.relation(r))
      if (!(u < v && g.adjacent(u, v))) rest[{u, v}].push_back(g.binary_names()[r]);
  for (const auto& [pr, names] : rest) {
    out << "rel " << g.id(pr.first) << ' ' << g.id(pr.second);
    for (const auto& n : names) out << ' ' << n;
    out << "\n";
  }
  return out.str();
}

inline ColoredGraph parse_graph(std::string_view text) {
  GraphBuilder b;
  std::optional<std::size_t> declared;
  std::size_t node_lines = 0;
  NodeId max_id = 0;
  std::vector<std::pair<NodeId, NodeId>> seen_edges;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  auto parse_id = [&](const std::string& tok) -> NodeId {
    NodeId x = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || x == 0)
      throw ParseError(lineno, "expected a positive integer id, got '" + tok + "'");
    return x;
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    const std::string& kw = tok[0];
    if (kw == "graph") {
      if (declared || tok.size() != 2) throw ParseError(lineno, "bad header");
      declared = parse_id(tok[1]);
      continue;
    }
    if (!declared) throw ParseError(lineno, "missing 'graph <n>' header");
    if (kw == "unary") {
      for (std::size_t i = 1; i < tok.size(); ++i) b.unary(tok[i]);
    } else if (kw == "binary") {
      for (std::size_t i = 1; i < tok.size(); ++i) b.binary(tok[i]);
    } else if (kw == "node") {
      if (tok.size() < 2) throw ParseError(lineno, "node without id");
      NodeId id = parse_id(tok[1]);
      max_id = std::max(max_id, id);
      b.node(id, std::vector<std::string>(tok.begin() + 2, tok.end()));
      ++node_lines;
    } else if (kw == "edge" || kw == "rel") {
      if (tok.size() < 3) throw ParseError(lineno, kw + " needs two endpoints");
      NodeId u = parse_id(tok[1]), v = parse_id(tok[2]);
      std::vector<std::string> labels(tok.begin() + 3, tok.end());
      if (kw == "edge") {
        if (u == v) throw ParseError(lineno, "self-loop");
        auto key = std::minmax(u, v);
        if (std::find(seen_edges.begin(), seen_edges.end(), std::pair<NodeId, NodeId>(key)) != seen_edges.end())
          throw ParseError(lineno, "duplicate edge");
        seen_edges.emplace_back(key);
        b.edge(u, v, labels);
      } else {
        if (labels.empty()) throw ParseError(lineno, "rel without relation name");
        for (const auto& l : labels) b.relation(l, u, v);
      }
    } else {
      throw ParseError(lineno, "unknown keyword '" + kw + "'");
    }
  }
  if (!declared) throw ParseError(lineno, "empty input");
  if (*declared != node_lines)
    throw ParseError(lineno, "header declares " + std::to_string(*declared) + " nodes, found " + std::to_string(node_lines));
  const auto n = static_cast<long double>(node_lines);
  if (static_cast<long double>(max_id) > n * n * n) throw ParseError(lineno, "id exceeds n^3");
  try {
    return b.build(true);
  } catch (const UnknownNode& e) {
    throw ParseError(lineno, e.what());
  }
}

}  // namespace dpc
