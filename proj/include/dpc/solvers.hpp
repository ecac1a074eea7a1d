#pragma once
#include <bit>
#include <cstdint>
#include <functional>
#include <vector>

#include "graph.hpp"

namespace dpc {

// Dense adjacency rows, bit i of row v set iff v ~ i.
struct BitGraph {
  std::size_t n = 0;
  std::size_t words = 0;
  std::vector<std::uint64_t> rows;

  explicit BitGraph(std::size_t order = 0) : n(order), words(detail::words_for(order)), rows(order * words, 0) {}
  explicit BitGraph(const ColoredGraph& g) : BitGraph(g.order()) {
    for (Vertex v = 0; v < n; ++v) std::copy_n(g.adjacency_row(v), words, rows.begin() + static_cast<long>(v * words));
  }
  const std::uint64_t* row(std::size_t v) const { return rows.data() + v * words; }
  void add_edge(std::size_t u, std::size_t v) {
    detail::set_bit(rows.data() + u * words, v);
    detail::set_bit(rows.data() + v * words, u);
  }
  bool adjacent(std::size_t u, std::size_t v) const { return detail::test_bit(row(u), v); }
};

using Bits = std::vector<std::uint64_t>;

namespace detail {

inline std::size_t count(const Bits& b) {
  std::size_t c = 0;
  for (auto w : b) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}
inline std::size_t first(const Bits& b) {
  for (std::size_t i = 0; i < b.size(); ++i)
    if (b[i]) return i * 64 + static_cast<std::size_t>(std::countr_zero(b[i]));
  return kUnreachable;
}
inline bool any(const Bits& b) {
  for (auto w : b)
    if (w) return true;
  return false;
}
inline Bits full(std::size_t n) {
  Bits b(words_for(n), ~std::uint64_t{0});
  if (n % 64) b.back() = (std::uint64_t{1} << (n % 64)) - 1;
  if (n == 0) b.clear();
  return b;
}
template <class F>
void for_each_bit(const Bits& b, F&& f) {
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::uint64_t w = b[i]; w; w &= w - 1) f(i * 64 + static_cast<std::size_t>(std::countr_zero(w)));
}

inline bool is_search(const BitGraph& g, Bits cand, std::size_t need) {
  if (need == 0) return true;
  if (count(cand) < need) return false;
  std::size_t v = first(cand);
  Bits with = cand;
  const auto* r = g.row(v);
  for (std::size_t i = 0; i < with.size(); ++i) with[i] &= ~r[i];
  with[v >> 6] &= ~(std::uint64_t{1} << (v & 63));
  if (is_search(g, std::move(with), need - 1)) return true;
  cand[v >> 6] &= ~(std::uint64_t{1} << (v & 63));
  return is_search(g, std::move(cand), need);
}

inline bool ds_search(const BitGraph& g, Bits undominated, std::size_t budget) {
  std::size_t u = first(undominated);
  if (u == kUnreachable) return true;
  if (budget == 0) return false;
  auto try_pick = [&](std::size_t w) {
    Bits rest = undominated;
    const auto* r = g.row(w);
    for (std::size_t i = 0; i < rest.size(); ++i) rest[i] &= ~r[i];
    rest[w >> 6] &= ~(std::uint64_t{1} << (w & 63));
    return ds_search(g, std::move(rest), budget - 1);
  };
  if (try_pick(u)) return true;
  bool found = false;
  const auto* r = g.row(u);
  for (std::size_t i = 0; i < g.words && !found; ++i)
    for (std::uint64_t w = r[i]; w && !found; w &= w - 1) found = try_pick(i * 64 + static_cast<std::size_t>(std::countr_zero(w)));
  return found;
}

}  // namespace detail

inline bool has_independent_set(const BitGraph& g, std::size_t k) {
  if (k > g.n) return false;
  return detail::is_search(g, detail::full(g.n), k);
}

// Dominating set of size at most k under closed neighborhoods.
inline bool has_dominating_set(const BitGraph& g, std::size_t k) {
  if (g.n == 0) return true;
  return detail::ds_search(g, detail::full(g.n), k);
}

// Distinct x_1..x_k with x_i in classes[i], pairwise non-adjacent.
// Most-constrained class first.
inline bool has_multicolored_is(const BitGraph& g, const std::vector<Bits>& classes) {
  const std::size_t k = classes.size();
  std::vector<char> done(k, 0);
  std::function<bool(std::vector<Bits>&, std::size_t)> go = [&](std::vector<Bits>& avail, std::size_t left) -> bool {
    if (left == 0) return true;
    std::size_t best = k, best_count = kUnreachable;
    for (std::size_t c = 0; c < k; ++c) {
      if (done[c]) continue;
      auto cnt = detail::count(avail[c]);
      if (cnt == 0) return false;
      if (cnt < best_count) best = c, best_count = cnt;
    }
    done[best] = 1;
    bool ok = false;
    std::vector<std::size_t> choices;
    detail::for_each_bit(avail[best], [&](std::size_t v) { choices.push_back(v); });
    for (std::size_t v : choices) {
      std::vector<Bits> next = avail;
      const auto* r = g.row(v);
      for (std::size_t c = 0; c < k; ++c) {
        if (done[c]) continue;
        for (std::size_t i = 0; i < g.words; ++i) next[c][i] &= ~r[i];
        next[c][v >> 6] &= ~(std::uint64_t{1} << (v & 63));
      }
      if (go(next, left - 1)) {
        ok = true;
        break;
      }
    }
    done[best] = 0;
    return ok;
  };
  std::vector<Bits> avail = classes;
  for (auto& b : avail) b.resize(g.words, 0);
  return go(avail, k);
}

// At most k red vertices such that every blue vertex has a chosen red neighbor.
inline bool has_red_blue_ds(const BitGraph& g, const Bits& red, const Bits& blue, std::size_t k) {
  std::function<bool(Bits, std::size_t)> go = [&](Bits open, std::size_t budget) -> bool {
    std::size_t b = detail::first(open);
    if (b == kUnreachable) return true;
    if (budget == 0) return false;
    const auto* r = g.row(b);
    for (std::size_t i = 0; i < g.words; ++i)
      for (std::uint64_t w = r[i] & red[i]; w; w &= w - 1) {
        std::size_t x = i * 64 + static_cast<std::size_t>(std::countr_zero(w));
        Bits rest = open;
        const auto* rx = g.row(x);
        for (std::size_t j = 0; j < g.words; ++j) rest[j] &= ~rx[j];
        if (go(std::move(rest), budget - 1)) return true;
      }
    return false;
  };
  Bits open = blue;
  open.resize(g.words, 0);
  return go(open, k);
}

inline Bits member_bits(const ColoredGraph& g, std::size_t pred) {
  Bits b(g.words(), 0);
  for (Vertex v = 0; v < g.order(); ++v)
    if (g.has_color(v, pred)) detail::set_bit(b.data(), v);
  return b;
}

}  // namespace dpc
