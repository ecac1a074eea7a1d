#include <gtest/gtest.h>

#include <random>

#include "dpc/atlas.hpp"
#include "dpc/generators.hpp"
#include "dpc/reductions.hpp"
#include "dpc/suites.hpp"

using namespace dpc;

namespace {

std::vector<ColoredGraph> random_hosts(std::uint64_t seed, std::size_t count, std::size_t max_n) {
  std::mt19937_64 rng(seed);
  std::vector<ColoredGraph> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_connected(2 + i % (max_n - 1), 0.35, rng));
  return out;
}

bool same_stores(const EmbeddedInstance& a, const EmbeddedInstance& b) { return a.stores == b.stores; }

}  // namespace

TEST(Reductions, IdentityKeepsGraphAndMeasuresUnitEnvelope) {
  auto g = cycle_graph(6);
  ProblemInstance in{g, 2};
  auto e = identity_reduction(Problem::IndependentSet).apply(in);
  auto t = target_instance(e);
  EXPECT_EQ(canonical_code(t.graph), canonical_code(g));
  EXPECT_EQ(t.k, 2u);
  auto b = measure(e);
  EXPECT_EQ(b.nodes, 6u);
  EXPECT_EQ(b.radius, 1u);
  EXPECT_EQ(b.path_load, 1u);
  EXPECT_EQ(b.rounds, 0u);
  EXPECT_TRUE(violations(b, e.declared, ModelKind::Congest).empty());
  Envelope tight = e.declared;
  tight.r = 0;
  tight.p = 1;
  EXPECT_EQ(violations(b, tight, ModelKind::Congest), (std::vector<std::string>{"r", "p"}));
}

TEST(Reductions, UnboundedCongestionOnlyFitsLocal) {
  ReductionBounds b;
  b.nodes = b.host_nodes = 4;
  Envelope env;
  env.c = kUnbounded;
  EXPECT_TRUE(violations(b, env, ModelKind::Local).empty());
  EXPECT_EQ(violations(b, env, ModelKind::Congest), (std::vector<std::string>{"c"}));
}

TEST(Reductions, CliqueDomToRedBlueIsSound) {
  auto red = clique_dom_reduction();
  for (const auto& g : random_hosts(41, 40, 8))
    for (std::size_t l = 2; l <= 3; ++l)
      for (std::size_t k = 0; k <= 2; ++k) {
        ProblemInstance in{g, k};
        in.l = l;
        auto e = red.apply(in);
        auto t = target_instance(e);
        EXPECT_EQ(oracle_solve(Problem::RedBlueDominatingSet, t), oracle_solve(Problem::CliqueDomination, in)) << serialize(g);
        EXPECT_EQ(t.graph.members(0).size(), g.order());
        EXPECT_EQ(t.graph.members(1).size(), l * oracle::cliques_of_size(g, l).size());
        auto b = measure(e);
        EXPECT_LE(b.radius, 1u);
        EXPECT_TRUE(violations(b, e.declared, ModelKind::Local).empty());
      }
}

TEST(Reductions, DroppingARedBlueEdgeBreaksSoundness) {
  // the least red-blue edge is essential here: every 2-set dominating all triangles uses it
  auto g = plain_graph(7, {{0, 4}, {0, 5}, {0, 6}, {1, 3}, {1, 5}, {1, 6}, {2, 3}, {2, 4}, {2, 6}, {3, 6}, {4, 5}});
  ProblemInstance in{g, 2};
  in.l = 3;
  ASSERT_TRUE(oracle_solve(Problem::CliqueDomination, in));
  auto e = clique_dom_reduction().apply(in);
  EXPECT_TRUE(oracle_solve(Problem::RedBlueDominatingSet, target_instance(e)));
  suite::drop_red_blue_edge(e);
  EXPECT_NO_THROW(validate(e));
  EXPECT_FALSE(oracle_solve(Problem::RedBlueDominatingSet, target_instance(e)));
}

TEST(Reductions, InducedSubgraphToMulticoloredIsSound) {
  const std::vector<ColoredGraph> patterns = {path_graph(2), path_graph(3), complete_graph(3), plain_graph(2, {}),
                                              plain_graph(3, {{0, 1}}), star_graph(3), cycle_graph(4)};
  auto hosts = random_hosts(42, 30, 7);
  for (const auto& h : patterns)
    for (const auto& g : hosts) {
      ProblemInstance in{g, 0};
      in.pattern = h;
      auto e = isi_reduction().apply(in);
      auto b = measure(e);
      EXPECT_LE(b.radius, 2 * h.order());
      EXPECT_TRUE(violations(b, e.declared, e.model).empty());
      EXPECT_EQ(oracle_solve(Problem::MulticoloredIndependentSet, target_instance(e)),
                oracle_solve(Problem::InducedSubgraphIsomorphism, in))
          << serialize(h) << serialize(g);
    }
}

TEST(Reductions, UnionIsDisjunction) {
  auto ha = complete_graph(3), hb = cycle_graph(4);
  auto red = union_combinator(isi_reduction(ha), isi_reduction(hb));
  for (const auto& g : random_hosts(43, 30, 7)) {
    ProblemInstance in{g, 0};
    auto e = red.apply(in);
    ProblemInstance ia = in, ib = in;
    ia.pattern = ha;
    ib.pattern = hb;
    const bool want = oracle_solve(Problem::InducedSubgraphIsomorphism, ia) || oracle_solve(Problem::InducedSubgraphIsomorphism, ib);
    EXPECT_EQ(oracle_solve(Problem::MulticoloredIndependentSet, target_instance(e)), want) << serialize(g);
    EXPECT_NO_THROW(validate(e));
  }
}

TEST(Reductions, UnionNeedsCommonHost) {
  ProblemInstance a{path_graph(3), 0}, b{path_graph(4), 0};
  a.pattern = b.pattern = path_graph(2);
  auto ea = isi_reduction().apply(a), eb = isi_reduction().apply(b);
  EXPECT_THROW(union_instances(ea, eb), ProblemMismatch);
}

TEST(Reductions, ExistentialModelCheckingIsSound) {
  const std::vector<std::string> sentences = {"exists x. P1(x)", "exists x. exists y. (E(x,y) & P1(x) & P1(y))",
                                              "exists x. exists y. (~E(x,y) & ~x = y & ~P1(x))",
                                              "exists x. exists y. (P1(x) | (E(x,y) & ~P1(y)))"};
  std::mt19937_64 rng(44);
  auto red = mc_sigma1_reduction();
  for (const auto& text : sentences) {
    auto f = parse_sentence(text);
    for (const auto& g0 : random_hosts(45, 25, 6)) {
      std::vector<std::size_t> col(g0.order());
      for (auto& c : col) c = rng() % 2;
      auto g = with_coloring(g0, 1, col);
      ProblemInstance in{g, 0};
      in.formula = f;
      auto e = red.apply(in);
      EXPECT_EQ(oracle_solve(Problem::MulticoloredIndependentSet, target_instance(e)), model_check(g, f))
          << text << "\n" << serialize(g);
    }
  }
}

TEST(Reductions, FastAndDistributedRulesAgree) {
  for (const auto& g : random_hosts(46, 12, 7)) {
    ProblemInstance in{g, 1};
    in.l = 2;
    in.pattern = path_graph(3);
    EXPECT_TRUE(same_stores(identity_reduction(Problem::DominatingSet).apply(in, RuleMode::Fast),
                            identity_reduction(Problem::DominatingSet).apply(in, RuleMode::Distributed)));
    EXPECT_TRUE(same_stores(clique_dom_reduction().apply(in, RuleMode::Fast),
                            clique_dom_reduction().apply(in, RuleMode::Distributed)));
    EXPECT_TRUE(same_stores(isi_reduction().apply(in, RuleMode::Fast), isi_reduction().apply(in, RuleMode::Distributed)));
  }
}

TEST(Reductions, ComposeChainsVerdicts) {
  auto chain = compose(isi_reduction(), recolor_mis_reduction());
  EXPECT_EQ(chain.source, Problem::InducedSubgraphIsomorphism);
  EXPECT_EQ(chain.target, Problem::MulticoloredIndependentSet);
  for (const auto& g : random_hosts(47, 20, 7)) {
    ProblemInstance in{g, 0};
    in.pattern = path_graph(3);
    auto e = chain.apply(in);
    EXPECT_NO_THROW(validate(e));
    EXPECT_EQ(oracle_solve(Problem::MulticoloredIndependentSet, target_instance(e)),
              oracle_solve(Problem::InducedSubgraphIsomorphism, in));
  }
  EXPECT_THROW(compose(clique_dom_reduction(), isi_reduction()), ProblemMismatch);
}

TEST(Reductions, Registry) {
  EXPECT_EQ(reduction_between(Problem::DominatingSet, Problem::DominatingSet).name, "identity");
  EXPECT_EQ(reduction_between(Problem::CliqueDomination, Problem::RedBlueDominatingSet).name, "clique_dom_to_rbds");
  EXPECT_EQ(reduction_between(Problem::InducedSubgraphIsomorphism, Problem::MulticoloredIndependentSet).name, "isi_to_mis");
  EXPECT_EQ(reduction_between(Problem::McSigma1, Problem::MulticoloredIndependentSet).name, "mc_sigma1_to_mis");
  EXPECT_THROW(reduction_between(Problem::DominatingSet, Problem::MulticoloredIndependentSet), UnsupportedProblem);
}

TEST(Simulation, ThroughEmbeddingMatchesDirectRunWithinBound) {
  for (const auto& c : suite::simulation_cases(5)) {
    auto b = measure(c.embedded);
    auto res = simulate_through(c.embedded, c.target, c.model);
    auto t = target_instance(c.embedded);
    auto direct = run(c.model, t.graph, c.target, t.k);
    EXPECT_EQ(res.verdict, direct.verdict) << c.label;
    EXPECT_LE(res.rounds_used, simulation_bound(b, *c.target.round_bound(c.embedded.k_prime))) << c.label;
    if (res.bandwidth > 0) {
      EXPECT_LE(res.max_message_bits, res.bandwidth) << c.label;
    }
  }
}

TEST(Simulation, NeedsDeclaredRoundBound) {
  ProblemInstance in{path_graph(3), 1};
  auto e = identity_reduction(Problem::DominatingSet).apply(in);
  NodeAlgorithm alg = accept_immediately();
  alg.round_bound = [](std::size_t) { return std::nullopt; };
  EXPECT_THROW(simulate_through(e, alg, Model{ModelKind::Local}), Error);
}
