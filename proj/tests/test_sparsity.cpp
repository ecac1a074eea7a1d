#include <gtest/gtest.h>

#include <bit>
#include <random>

#include "dpc/atlas.hpp"
#include "dpc/generators.hpp"
#include "dpc/sparsity.hpp"

using namespace dpc;

namespace {

using Mask = std::uint32_t;

bool mask_connected(const ColoredGraph& g, Mask s) {
  if (!s) return false;
  Mask seen = s & (~s + 1), frontier = seen;
  while (frontier) {
    Mask next = 0;
    for (Vertex v = 0; v < g.order(); ++v)
      if (frontier >> v & 1U)
        for (Vertex w : g.neighbors(v)) next |= Mask{1} << w;
    next &= s & ~seen;
    seen |= next;
    frontier = next;
  }
  return seen == s;
}

// td of the induced subgraph on s: components by max, connected by 1 + min over deletions.
std::size_t brute_td(const ColoredGraph& g, Mask s, std::map<Mask, std::size_t>& memo) {
  if (!s) return 0;
  if (auto it = memo.find(s); it != memo.end()) return it->second;
  std::size_t best;
  if (!mask_connected(g, s)) {
    best = 0;
    Mask rest = s;
    while (rest) {
      Mask comp = 0;
      for (Mask c = rest; c; c = (c - 1) & rest)
        if ((c & (rest & (~rest + 1))) && mask_connected(g, c) && std::popcount(c) > std::popcount(comp)) comp = c;
      best = std::max(best, brute_td(g, comp, memo));
      rest &= ~comp;
    }
  } else {
    best = 1000;
    for (Vertex v = 0; v < g.order(); ++v)
      if (s >> v & 1U) best = std::min(best, 1 + brute_td(g, s & ~(Mask{1} << v), memo));
  }
  return memo[s] = best;
}

std::size_t brute_td(const ColoredGraph& g) {
  std::map<Mask, std::size_t> memo;
  return brute_td(g, (Mask{1} << g.order()) - 1, memo);
}

bool brute_centered(const ColoredGraph& g, const CenteredColoring& c, std::size_t p) {
  for (Mask s = 1; s < (Mask{1} << g.order()); ++s) {
    if (!mask_connected(g, s)) continue;
    std::map<std::size_t, std::size_t> count;
    for (Vertex v = 0; v < g.order(); ++v)
      if (s >> v & 1U) ++count[c.colors.at(g.id(v))];
    bool unique = std::any_of(count.begin(), count.end(), [](const auto& kv) { return kv.second == 1; });
    if (count.size() <= p && !unique) return false;
  }
  return true;
}

// Nonempty subsets of {1..m} with at most max_size elements.
std::vector<std::set<std::size_t>> color_sets(std::size_t m, std::size_t max_size) {
  std::vector<std::set<std::size_t>> out;
  for (Mask s = 1; s < (Mask{1} << m); ++s) {
    if (static_cast<std::size_t>(std::popcount(s)) > max_size) continue;
    std::set<std::size_t> c;
    for (std::size_t i = 0; i < m; ++i)
      if (s >> i & 1U) c.insert(i + 1);
    out.push_back(std::move(c));
  }
  return out;
}

CenteredColoring random_coloring(const ColoredGraph& g, std::size_t p, std::size_t m, std::mt19937_64& rng) {
  CenteredColoring c;
  c.p = p;
  c.m = m;
  for (NodeId v : g.ids()) c.colors[v] = 1 + rng() % m;
  return c;
}

}  // namespace

TEST(Treedepth, KnownValues) {
  EXPECT_EQ(treedepth_exact(path_graph(1)), 1u);
  EXPECT_EQ(treedepth_exact(path_graph(4)), 3u);
  EXPECT_EQ(treedepth_exact(path_graph(7)), 3u);
  EXPECT_EQ(treedepth_exact(path_graph(8)), 4u);
  EXPECT_EQ(treedepth_exact(complete_graph(5)), 5u);
  EXPECT_EQ(treedepth_exact(star_graph(6)), 2u);
  EXPECT_EQ(treedepth_exact(cycle_graph(4)), 3u);
  EXPECT_THROW(treedepth_exact(path_graph(kTreedepthCap + 1)), GraphTooLarge);
}

TEST(Treedepth, MatchesDeletionRecursion) {
  for (std::size_t n = 1; n <= 6; ++n)
    for (const auto& g : atlas(n)) ASSERT_EQ(treedepth_exact(g), brute_td(g)) << serialize(g);
  std::mt19937_64 rng(71);
  for (int t = 0; t < 20; ++t) {
    std::vector<std::pair<Vertex, Vertex>> es;
    for (Vertex u = 0; u < 8; ++u)
      for (Vertex v = u + 1; v < 8; ++v)
        if (rng() % 4 == 0) es.emplace_back(u, v);
    auto g = plain_graph(8, es);
    ASSERT_EQ(treedepth_exact(g), brute_td(g)) << serialize(g);
  }
}

TEST(Centered, ConstantColoringOnPathFails) {
  auto g = path_graph(4);
  CenteredColoring c;
  c.p = 3;
  c.m = 1;
  for (NodeId v : g.ids()) c.colors[v] = 1;
  EXPECT_FALSE(verify_centered(g, c, 3));
  auto witness = centered_violation(g, c, 3);
  ASSERT_TRUE(witness.has_value());
  EXPECT_GE(witness->size(), 2u);
  EXPECT_TRUE(verify_centered(g, distinct_coloring(g, 3), 3));
}

TEST(Centered, VerifierMatchesBruteForce) {
  std::mt19937_64 rng(72);
  for (int t = 0; t < 300; ++t) {
    auto g = random_connected(2 + t % 8, 0.3, rng);
    const std::size_t p = 1 + t % 4;
    auto c = random_coloring(g, p, 1 + t % 5, rng);
    const bool want = brute_centered(g, c, p);
    ASSERT_EQ(verify_centered(g, c, p), want) << serialize(g);
    ASSERT_EQ(!centered_violation(g, c, p, true).has_value(), want);
    if (auto w = centered_violation(g, c, p)) {
      std::vector<Vertex> vs;
      for (NodeId id : *w) vs.push_back(g.index_of(id));
      EXPECT_TRUE(g.induced(vs).is_connected());
    }
  }
}

TEST(Centered, ConstructedColoringsVerify) {
  std::mt19937_64 rng(73);
  for (int t = 0; t < 80; ++t) {
    auto g = random_connected(2 + t % 12, 0.2, rng);
    for (std::size_t p = 1; p <= 4; ++p) {
      auto c = centered_coloring(g, p);
      ASSERT_EQ(c.colors.size(), g.order());
      ASSERT_TRUE(verify_centered(g, c, p)) << serialize(g) << " p=" << p;
      if (g.order() <= kLowerBoundCap) {
        EXPECT_TRUE(colors_lower_bound_check(g, c, p));
      }
    }
  }
  auto path = centered_coloring(path_graph(15), 3);
  EXPECT_EQ(path.m, 4u);
  EXPECT_THROW(centered_coloring(path_graph(3), 0), Error);
}

TEST(Centered, ExhaustiveCap) {
  auto g = path_graph(kCenteredCheckCap + 1);
  EXPECT_THROW(verify_centered(g, distinct_coloring(g, 2), 2), GraphTooLargeForExhaustiveCheck);
}

TEST(Forest, ValidAndShallow) {
  std::mt19937_64 rng(74);
  for (int t = 0; t < 60; ++t) {
    auto g = random_connected(3 + t % 10, 0.25, rng);
    const std::size_t p = 2 + t % 3;
    auto c = centered_coloring(g, p);
    for (const auto& colors : color_sets(std::min<std::size_t>(c.m, 5), p)) {
      ForestTrace trace;
      auto f = elimination_forest_for(g, c, colors, &trace);
      auto sub = g.induced(color_class_vertices(g, c, colors));
      ASSERT_TRUE(validate_forest(sub, f)) << serialize(g);
      EXPECT_LE(f.height(), colors.size());
      if (sub.order() <= kTreedepthCap) {
        EXPECT_GE(f.height(), treedepth_exact(sub));
      }
      EXPECT_TRUE(trace.within_path_bound());
    }
  }
}

TEST(Forest, InvalidForestRejected) {
  auto g = path_graph(3);
  EliminationForest f;
  for (NodeId v : g.ids()) {
    f.parent[v] = v;
    f.depth[v] = 0;
  }
  EXPECT_FALSE(validate_forest(g, f));  // edges between unrelated roots
  f.parent[1] = 2;
  f.parent[3] = 2;
  f.depth[1] = f.depth[3] = 1;
  EXPECT_TRUE(validate_forest(g, f));
  f.depth[3] = 2;
  EXPECT_FALSE(validate_forest(g, f));
}

TEST(Forest, TooManyColorsRejected) {
  auto g = path_graph(4);
  auto c = distinct_coloring(g, 2);
  EXPECT_THROW(elimination_forest_for(g, c, {1, 2, 3}), Error);
  EXPECT_THROW(elimination_forest_distributed(g, c, {1, 2, 3}), Error);
}

TEST(Forest, DistributedMatchesSequential) {
  std::mt19937_64 rng(75);
  for (int t = 0; t < 25; ++t) {
    auto g = random_connected(3 + t % 9, 0.25, rng);
    const std::size_t p = 2 + t % 2;
    auto c = centered_coloring(g, p);
    for (const auto& colors : color_sets(std::min<std::size_t>(c.m, 4), p)) {
      auto d = elimination_forest_distributed(g, c, colors);
      ASSERT_EQ(d.forest, elimination_forest_for(g, c, colors)) << serialize(g);
      EXPECT_EQ(d.run.rounds_used, *forest_algorithm(c, colors).round_bound(0));
      EXPECT_LE(d.run.max_message_bits, d.run.bandwidth);
    }
  }
}
