#include <gtest/gtest.h>

#include <bit>
#include <numeric>
#include <random>

#include "dpc/generators.hpp"
#include "dpc/mis_circuit.hpp"

using namespace dpc;

namespace {

std::vector<bool> bits_of(std::uint32_t mask, std::size_t n) {
  std::vector<bool> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = mask >> i & 1U;
  return out;
}

// Random circuit; the sinks are joined under one final OR so the output is unique.
Circuit random_circuit(std::mt19937_64& rng, std::size_t n, std::size_t gates, bool allow_neg) {
  Circuit c(n);
  std::vector<GateKind> kinds = {GateKind::Or, GateKind::And, GateKind::BigOr, GateKind::BigAnd};
  if (allow_neg) kinds.push_back(GateKind::Neg);
  for (std::size_t g = 0; g < gates; ++g) {
    auto kind = kinds[rng() % kinds.size()];
    std::size_t arity = kind == GateKind::Neg ? 1 : is_large(kind) ? 3 : 2;
    // distinct inputs, since the graph encoding stores wires as a set
    std::vector<std::size_t> in(c.size());
    std::iota(in.begin(), in.end(), std::size_t{0});
    std::shuffle(in.begin(), in.end(), rng);
    in.resize(arity);
    c.add(kind, in);
  }
  auto out = c.out_degrees();
  std::vector<std::size_t> sinks;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (out[i] == 0) sinks.push_back(i);
  if (sinks.size() == 2)
    c.add(GateKind::Or, sinks);
  else if (sinks.size() > 2)
    c.add(GateKind::BigOr, sinks);
  c.validate();
  return c;
}

bool brute_weighted_sat(const Circuit& c, std::size_t k) {
  const std::size_t n = c.n_inputs();
  for (std::uint32_t m = 0; m < (1U << n); ++m)
    if (static_cast<std::size_t>(std::popcount(m)) == k && evaluate(c, bits_of(m, n))) return true;
  return false;
}

bool is_multicolored_is(const ColoredGraph& g, std::size_t k, std::uint32_t m) {
  std::vector<char> seen(k + 1, 0);
  for (Vertex u = 0; u < g.order(); ++u) {
    if (!(m >> u & 1U)) continue;
    for (Vertex v = u + 1; v < g.order(); ++v)
      if ((m >> v & 1U) && g.adjacent(u, v)) return false;
    for (std::size_t i = 0; i < k; ++i)
      if (g.has_color(u, i)) {
        if (seen[i]) return false;
        seen[i] = 1;
      }
  }
  return static_cast<std::size_t>(std::popcount(m)) == k;
}

}  // namespace

TEST(Circuit, EvaluateHandBuilt) {
  // (x1 & ~x2) | BIGAND(x1, x2, x3)
  Circuit c(3);
  auto n2 = c.add(GateKind::Neg, {1});
  auto a = c.add(GateKind::And, {0, n2});
  auto big = c.add(GateKind::BigAnd, {0, 1, 2});
  c.add(GateKind::Or, {a, big});
  for (std::uint32_t m = 0; m < 8; ++m) {
    bool x1 = m & 1U, x2 = m & 2U, x3 = m & 4U;
    EXPECT_EQ(evaluate(c, bits_of(m, 3)), (x1 && !x2) || (x1 && x2 && x3)) << m;
  }
  auto wd = weft_and_depth(c);
  EXPECT_EQ(wd.weft, 1u);
  EXPECT_EQ(wd.depth, 3u);
}

TEST(Circuit, WeftCountsLargeGatesOnPath) {
  Circuit c(3);
  auto b1 = c.add(GateKind::BigOr, {0, 1, 2});
  auto b2 = c.add(GateKind::BigAnd, {b1, 0, 1});
  auto s = c.add(GateKind::And, {b2, 2});
  c.add(GateKind::Neg, {s});
  auto wd = weft_and_depth(c);
  EXPECT_EQ(wd.weft, 2u);
  EXPECT_EQ(wd.depth, 4u);
}

TEST(Circuit, InvalidShapesRejected) {
  Circuit c(2);
  EXPECT_THROW(c.add(GateKind::Or, {0}), InvalidCircuit);
  EXPECT_THROW(c.add(GateKind::BigOr, {0, 1}), InvalidCircuit);
  EXPECT_THROW(c.add(GateKind::Neg, {5}), InvalidCircuit);
  EXPECT_THROW(c.validate(), InvalidCircuit);  // two sinks
  c.add(GateKind::And, {0, 1});
  EXPECT_NO_THROW(c.validate());
  EXPECT_THROW(evaluate(c, {true}), ArityMismatch);
}

TEST(Circuit, WeightedSatMatchesBruteForce) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 200; ++t) {
    auto c = random_circuit(rng, 3 + t % 5, 2 + t % 9, true);
    for (std::size_t k = 0; k <= c.n_inputs() + 1; ++k) ASSERT_EQ(weighted_sat(c, k), brute_weighted_sat(c, k));
  }
}

TEST(Circuit, NegationFreeCircuitsAreMonotone) {
  std::mt19937_64 rng(32);
  for (int t = 0; t < 200; ++t) {
    auto c = random_circuit(rng, 4 + t % 3, 3 + t % 8, false);
    const std::size_t n = c.n_inputs();
    for (std::uint32_t m = 0; m < (1U << n); ++m) {
      if (!evaluate(c, bits_of(m, n))) continue;
      for (std::size_t i = 0; i < n; ++i) ASSERT_TRUE(evaluate(c, bits_of(m | (1U << i), n)));
    }
  }
}

TEST(Circuit, GraphEncodingRoundTrip) {
  std::mt19937_64 rng(33);
  for (int t = 0; t < 100; ++t) {
    auto c = random_circuit(rng, 3 + t % 4, 2 + t % 7, true);
    auto g = circuit_to_graph(c);
    EXPECT_EQ(g.order(), c.size());
    auto back = graph_to_circuit(g.is_connected() ? parse_graph(serialize(g)) : g);
    ASSERT_EQ(back.n_inputs(), c.n_inputs());
    ASSERT_EQ(back.size(), c.size());
    for (std::uint32_t m = 0; m < (1U << c.n_inputs()); ++m)
      ASSERT_EQ(evaluate(back, bits_of(m, c.n_inputs())), evaluate(c, bits_of(m, c.n_inputs())));
    EXPECT_EQ(weft_and_depth(back).weft, weft_and_depth(c).weft);
    EXPECT_EQ(weft_and_depth(back).depth, weft_and_depth(c).depth);
  }
}

TEST(MisCircuit, AcceptsExactlyMulticoloredIndependentSets) {
  std::mt19937_64 rng(34);
  for (int t = 0; t < 80; ++t) {
    const std::size_t n = 2 + t % 7, k = 1 + t % 3;
    auto g0 = random_connected(n, 0.3, rng);
    std::vector<std::size_t> col(n);
    for (auto& c : col) c = rng() % k;
    auto g = with_coloring(g0, k, col);
    auto mc = mis_to_circuit(g, k);
    auto wd = weft_and_depth(mc.circuit);
    EXPECT_EQ(wd.weft, 1u);
    EXPECT_EQ(wd.depth, 3u);
    for (std::uint32_t m = 0; m < (1U << n); ++m) {
      if (static_cast<std::size_t>(std::popcount(m)) != k) continue;
      ASSERT_EQ(evaluate(mc.circuit, bits_of(m, n)), is_multicolored_is(g, k, m)) << serialize(g) << m;
    }
    EXPECT_EQ(weighted_sat(mc.circuit, k), oracle_solve(Problem::MulticoloredIndependentSet, {g, k}));
  }
}

TEST(MisCircuit, RequiresOneColorPerVertex) {
  EXPECT_THROW(mis_to_circuit(path_graph(3), 1), WrongColoring);
  GraphBuilder b;
  b.node(1, {"P1", "P2"}).node(2, {"P1"}).edge(1, 2);
  EXPECT_THROW(mis_to_circuit(b.build(), 2), WrongColoring);
}

TEST(MisCircuit, EmbeddingStoresEveryGate) {
  auto g = with_coloring(path_graph(4), 2, {0, 1, 0, 1});
  auto mc = mis_to_circuit(g, 2);
  std::size_t hosted = 0;
  for (const auto& [h, st] : mc.embedding.stores) hosted += st.hosted.size();
  EXPECT_EQ(hosted, mc.circuit.size());
  EXPECT_EQ(mc.embedding.rounds, 1u);
  EXPECT_EQ(mc.conflict_pairs, 5u);  // 3 edges plus 2 same-color pairs
}
