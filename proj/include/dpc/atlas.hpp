#pragma once
#include <array>
#include <bit>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <unordered_set>

#include "generators.hpp"

namespace dpc {

inline constexpr std::size_t kAtlasCap = 9;

// Dense small graph, n <= 11, adjacency as bit masks.
struct SmallGraph {
  std::size_t n = 0;
  std::array<std::uint16_t, 16> adj{};
};

namespace detail {

inline std::uint64_t code_under(const SmallGraph& g, const std::array<int, 16>& label) {
  std::array<int, 16> at{};
  for (std::size_t v = 0; v < g.n; ++v) at[label[v]] = static_cast<int>(v);
  std::uint64_t code = 0;
  for (std::size_t j = 1; j < g.n; ++j)
    for (std::size_t i = 0; i < j; ++i) code = (code << 1) | ((g.adj[at[i]] >> at[j]) & 1U);
  return code;
}

using Cells = std::vector<std::uint16_t>;

inline void refine(const SmallGraph& g, Cells& cells) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t s = 0; s < cells.size() && !changed; ++s) {
      const std::uint16_t splitter = cells[s];
      for (std::size_t c = 0; c < cells.size(); ++c) {
        if (std::popcount(cells[c]) < 2) continue;
        std::array<std::uint16_t, 17> by_count{};
        int distinct = 0;
        for (std::uint16_t m = cells[c]; m; m &= m - 1) {
          int v = std::countr_zero(m);
          int cnt = std::popcount(static_cast<std::uint16_t>(g.adj[v] & splitter));
          if (!by_count[cnt]) ++distinct;
          by_count[cnt] |= static_cast<std::uint16_t>(1U << v);
        }
        if (distinct < 2) continue;
        Cells parts;
        for (auto m : by_count)
          if (m) parts.push_back(m);
        cells.erase(cells.begin() + static_cast<long>(c));
        cells.insert(cells.begin() + static_cast<long>(c), parts.begin(), parts.end());
        changed = true;
        break;
      }
    }
  }
}

inline void canon_search(const SmallGraph& g, Cells cells, std::uint64_t& best, bool& have) {
  refine(g, cells);
  std::size_t target = cells.size();
  for (std::size_t c = 0; c < cells.size(); ++c)
    if (std::popcount(cells[c]) > 1 && (target == cells.size() || std::popcount(cells[c]) < std::popcount(cells[target])))
      target = c;
  if (target == cells.size()) {
    std::array<int, 16> label{};
    for (std::size_t c = 0; c < cells.size(); ++c) label[std::countr_zero(cells[c])] = static_cast<int>(c);
    auto code = code_under(g, label);
    if (!have || code < best) best = code, have = true;
    return;
  }
  std::uint16_t tried_twins = 0;
  const std::uint16_t cell = cells[target];
  for (std::uint16_t m = cell; m; m &= m - 1) {
    int v = std::countr_zero(m);
    if ((tried_twins >> v) & 1U) continue;
    for (std::uint16_t o = cell; o; o &= o - 1) {
      int u = std::countr_zero(o);
      auto strip = static_cast<std::uint16_t>(~((1U << u) | (1U << v)));
      if ((g.adj[u] & strip) == (g.adj[v] & strip)) tried_twins |= static_cast<std::uint16_t>(1U << u);
    }
    Cells next = cells;
    next[target] = static_cast<std::uint16_t>(cell & ~(1U << v));
    next.insert(next.begin() + static_cast<long>(target), static_cast<std::uint16_t>(1U << v));
    canon_search(g, std::move(next), best, have);
  }
}

}  // namespace detail

// Isomorphism-invariant code: the least upper-triangle adjacency word over
// all labelings reachable by refinement and individualization.
inline std::uint64_t canonical_code(const SmallGraph& g) {
  if (g.n <= 1) return 0;
  detail::Cells cells{static_cast<std::uint16_t>((1U << g.n) - 1)};
  std::uint64_t best = 0;
  bool have = false;
  detail::canon_search(g, cells, best, have);
  return best;
}

inline SmallGraph small_from(const ColoredGraph& g) {
  if (g.order() > 11) throw GraphTooLarge("small graph codes support n <= 11");
  SmallGraph s;
  s.n = g.order();
  for (auto [u, v] : g.edges()) {
    s.adj[u] |= static_cast<std::uint16_t>(1U << v);
    s.adj[v] |= static_cast<std::uint16_t>(1U << u);
  }
  return s;
}

inline std::uint64_t canonical_code(const ColoredGraph& g) { return canonical_code(small_from(g)); }

inline SmallGraph small_from_code(std::size_t n, std::uint64_t code) {
  SmallGraph s;
  s.n = n;
  std::size_t bits = n * (n - 1) / 2;
  std::size_t pos = bits;
  for (std::size_t j = 1; j < n; ++j)
    for (std::size_t i = 0; i < j; ++i) {
      --pos;
      if ((code >> pos) & 1U) {
        s.adj[i] |= static_cast<std::uint16_t>(1U << j);
        s.adj[j] |= static_cast<std::uint16_t>(1U << i);
      }
    }
  return s;
}

inline ColoredGraph to_colored(const SmallGraph& s) {
  std::vector<std::pair<Vertex, Vertex>> es;
  for (Vertex i = 0; i < s.n; ++i)
    for (Vertex j = i + 1; j < s.n; ++j)
      if ((s.adj[i] >> j) & 1U) es.emplace_back(i, j);
  return plain_graph(s.n, es);
}

inline std::string to_graph6(const SmallGraph& s) {
  std::string out(1, static_cast<char>(s.n + 63));
  int acc = 0, k = 0;
  for (std::size_t j = 1; j < s.n; ++j)
    for (std::size_t i = 0; i < j; ++i) {
      acc = (acc << 1) | ((s.adj[i] >> j) & 1);
      if (++k == 6) out.push_back(static_cast<char>(acc + 63)), acc = 0, k = 0;
    }
  if (k) out.push_back(static_cast<char>((acc << (6 - k)) + 63));
  return out;
}

inline SmallGraph from_graph6(std::string_view s) {
  if (s.empty()) throw ParseError(0, "empty graph6 string");
  SmallGraph g;
  g.n = static_cast<std::size_t>(s[0] - 63);
  if (g.n > 16) throw ParseError(0, "graph6 order too large");
  std::size_t bit = 0;
  for (std::size_t j = 1; j < g.n; ++j)
    for (std::size_t i = 0; i < j; ++i, ++bit) {
      std::size_t byte = 1 + bit / 6;
      if (byte >= s.size()) throw ParseError(0, "truncated graph6 string");
      if (((s[byte] - 63) >> (5 - bit % 6)) & 1) {
        g.adj[i] |= static_cast<std::uint16_t>(1U << j);
        g.adj[j] |= static_cast<std::uint16_t>(1U << i);
      }
    }
  return g;
}

namespace detail {

inline std::vector<SmallGraph> generate_level(const std::vector<SmallGraph>& prev, std::size_t n) {
  std::unordered_set<std::uint64_t> seen;
  std::vector<std::uint64_t> codes;
  for (const auto& base : prev) {
    for (std::uint32_t sub = 1; sub < (1U << (n - 1)); ++sub) {
      SmallGraph g = base;
      g.n = n;
      g.adj[n - 1] = static_cast<std::uint16_t>(sub);
      for (std::size_t v = 0; v + 1 < n; ++v)
        if ((sub >> v) & 1U) g.adj[v] |= static_cast<std::uint16_t>(1U << (n - 1));
      auto code = canonical_code(g);
      if (seen.insert(code).second) codes.push_back(code);
    }
  }
  std::sort(codes.begin(), codes.end());
  std::vector<SmallGraph> out;
  out.reserve(codes.size());
  for (auto c : codes) out.push_back(small_from_code(n, c));
  return out;
}

inline std::optional<std::filesystem::path> atlas_cache_dir() {
  if (const char* dir = std::getenv("DPC_ATLAS_CACHE"); dir && *dir) return std::filesystem::path(dir);
  return std::nullopt;
}

}  // namespace detail

// All connected graphs on exactly n vertices, one per isomorphism class,
// ordered by canonical code, ids 1..n.
inline const std::vector<SmallGraph>& atlas_small(std::size_t n) {
  static std::vector<std::vector<SmallGraph>> levels;
  if (n == 0 || n > kAtlasCap) throw CapExceeded("atlas supports 1 <= n <= " + std::to_string(kAtlasCap));
  if (levels.empty()) {
    SmallGraph k1;
    k1.n = 1;
    levels.push_back({k1});
  }
  while (levels.size() < n) {
    std::size_t m = levels.size() + 1;
    auto dir = detail::atlas_cache_dir();
    std::filesystem::path file;
    std::vector<SmallGraph> level;
    if (dir) {
      file = *dir / ("atlas_" + std::to_string(m) + ".g6");
      std::ifstream in(file);
      for (std::string line; std::getline(in, line);)
        if (!line.empty()) level.push_back(from_graph6(line));
    }
    if (level.empty()) {
      level = detail::generate_level(levels.back(), m);
      if (dir) {
        std::error_code ec;
        std::filesystem::create_directories(*dir, ec);
        auto tmp = file;
        tmp += ".tmp";
        {
          std::ofstream out(tmp);
          for (const auto& g : level) out << to_graph6(g) << '\n';
        }
        std::filesystem::rename(tmp, file, ec);
      }
    }
    levels.push_back(std::move(level));
  }
  return levels[n - 1];
}

inline std::vector<ColoredGraph> atlas(std::size_t n) {
  std::vector<ColoredGraph> out;
  for (const auto& s : atlas_small(n)) out.push_back(to_colored(s));
  return out;
}

// Visits every atlas graph with 1 <= order <= max_n.
template <class F>
void for_each_atlas_graph(std::size_t max_n, F&& f) {
  for (std::size_t n = 1; n <= max_n; ++n)
    for (const auto& s : atlas_small(n)) f(to_colored(s));
}

}  // namespace dpc
