#include <gtest/gtest.h>

#include <random>

#include "dpc/atlas.hpp"
#include "dpc/gaifman.hpp"
#include "dpc/generators.hpp"

using namespace dpc;

namespace {

std::vector<std::vector<std::size_t>> floyd(const ColoredGraph& g) {
  const std::size_t n = g.order(), inf = 1000;
  std::vector<std::vector<std::size_t>> d(n, std::vector<std::size_t>(n, inf));
  for (Vertex v = 0; v < n; ++v) d[v][v] = 0;
  for (auto [u, v] : g.edges()) d[u][v] = d[v][u] = 1;
  for (Vertex m = 0; m < n; ++m)
    for (Vertex i = 0; i < n; ++i)
      for (Vertex j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][m] + d[m][j]);
  return d;
}

// Alpha evaluated on the induced r-ball, then an exhaustive search for s
// alpha-vertices pairwise more than 2r apart.
bool brute_basic_local(const ColoredGraph& g, const BasicLocalSentence& b) {
  auto d = floyd(g);
  std::vector<Vertex> good;
  for (Vertex a = 0; a < g.order(); ++a) {
    std::vector<Vertex> near;
    for (Vertex v = 0; v < g.order(); ++v)
      if (d[a][v] <= b.r) near.push_back(v);
    if (model_check(g.induced(near), b.alpha, {{b.var, g.id(a)}})) good.push_back(a);
  }
  std::function<bool(std::size_t, std::vector<Vertex>&)> pick = [&](std::size_t from, std::vector<Vertex>& chosen) {
    if (chosen.size() == b.s) return true;
    for (std::size_t i = from; i < good.size(); ++i) {
      bool far = std::all_of(chosen.begin(), chosen.end(), [&](Vertex c) { return d[c][good[i]] > 2 * b.r; });
      if (!far) continue;
      chosen.push_back(good[i]);
      if (pick(i + 1, chosen)) return true;
      chosen.pop_back();
    }
    return false;
  };
  std::vector<Vertex> chosen;
  return pick(0, chosen);
}

std::vector<std::string> alphas() {
  return {"P1(x)", "exists y. (E(x,y) & P1(y))", "forall y. (x = y | E(x,y))", "exists y. exists z. (E(x,y) & E(y,z) & ~x = z)",
          "~P1(x) & forall y. (~E(x,y) | P1(y))"};
}

std::vector<ColoredGraph> colored_samples(std::uint64_t seed, std::size_t count, std::size_t max_n) {
  std::mt19937_64 rng(seed);
  std::vector<ColoredGraph> out;
  for (std::size_t i = 0; i < count; ++i) {
    auto g = random_connected(1 + i % max_n, 0.2 + 0.1 * static_cast<double>(i % 3), rng);
    std::vector<std::size_t> col(g.order());
    for (auto& c : col) c = rng() % 2;
    out.push_back(with_coloring(g, 1, col));
  }
  return out;
}

}  // namespace

TEST(Gaifman, BasicLocalMatchesBruteForce) {
  auto graphs = colored_samples(51, 120, 10);
  for (const auto& text : alphas())
    for (std::size_t s = 1; s <= 3; ++s)
      for (std::size_t r = 0; r <= 2; ++r) {
        BasicLocalSentence b{s, r, parse_formula(text)};
        for (const auto& g : graphs) ASSERT_EQ(eval_basic_local(g, b), brute_basic_local(g, b)) << text << "\n" << serialize(g);
      }
}

TEST(Gaifman, UnfoldedSentenceAgrees) {
  auto graphs = colored_samples(52, 30, 5);
  for (const auto& text : {"P1(x)", "exists y. (E(x,y) & P1(y))"})
    for (std::size_t s = 1; s <= 2; ++s)
      for (std::size_t r = 0; r <= 1; ++r) {
        BasicLocalSentence b{s, r, parse_formula(text)};
        auto f = unfold_basic_local(b);
        EXPECT_TRUE(free_vars(f).empty());
        for (const auto& g : graphs) ASSERT_EQ(model_check(g, f), eval_basic_local(g, b)) << text << " s=" << s << " r=" << r;
      }
}

TEST(Gaifman, ThreeConditionsCharacterizeNegation) {
  auto graphs = colored_samples(53, 150, 10);
  for (const auto& text : alphas())
    for (std::size_t s = 1; s <= 3; ++s)
      for (std::size_t r = 0; r <= 1; ++r) {
        BasicLocalSentence b{s, r, parse_formula(text)};
        for (const auto& g : graphs)
          ASSERT_EQ(three_conditions(analyze_alpha(g, b), b), !eval_basic_local(g, b)) << text << "\n" << serialize(g);
      }
}

TEST(Gaifman, DecoratedSentencesCharacterizeNegation) {
  auto graphs = colored_samples(54, 60, 8);
  for (const auto& text : alphas())
    for (std::size_t s = 1; s <= 3; ++s)
      for (std::size_t r = 0; r <= 1; ++r) {
        BasicLocalSentence b{s, r, parse_formula(text)};
        for (const auto& g : graphs) {
          auto d = decorate_alpha(g, b);
          ASSERT_EQ(d.psi.size(), s);
          for (const auto& f : d.psi) EXPECT_TRUE(in_sigma_t1(classify(f), 2));
          ASSERT_EQ(any_psi_holds(d), !eval_basic_local(g, b)) << text << "\n" << serialize(g);
        }
      }
}

TEST(Gaifman, DecorationRejectsBinaryRelations) {
  GraphBuilder b;
  b.node(1).node(2).edge(1, 2, {"E1"});
  EXPECT_THROW(decorate_alpha(b.build(), {1, 0, parse_formula("x = x")}), UnsupportedVocabulary);
}

TEST(Gaifman, MergesMatchBooleanCombination) {
  const std::vector<std::string> sentences = {"exists x. forall y. (x = y | E(x,y))", "exists x. exists z. forall y. (~x = z & ~E(x,z))",
                                              "forall y. exists x. E(x,y)", "exists x. forall y. ~E(x,y)",
                                              "exists x. forall y. (E(x,y) | ~P1(y))"};
  std::vector<ColoredGraph> graphs;
  for (std::size_t n = 2; n <= 5; ++n)
    for (const auto& g : atlas(n)) {
      std::vector<std::size_t> col(n);
      for (std::size_t i = 0; i < n; ++i) col[i] = i % 2;
      graphs.push_back(with_coloring(g, 1, col));
    }
  std::vector<Formula> fs;
  for (const auto& s : sentences)
    if (classify(parse_sentence(s)).side == Fragment::Side::Sigma) fs.push_back(parse_sentence(s));
  for (const auto& f : fs)
    for (const auto& h : fs) {
      auto c = conjunction_merge(f, h), d = disjunction_merge(f, h);
      EXPECT_TRUE(in_sigma_t1(classify(c), 2));
      EXPECT_TRUE(in_sigma_t1(classify(d), 2));
      for (const auto& g : graphs) {
        const bool vf = model_check(g, f), vh = model_check(g, h);
        ASSERT_EQ(model_check(g, c), vf && vh) << to_string(c) << "\n" << serialize(g);
        ASSERT_EQ(model_check(g, d), vf || vh) << to_string(d) << "\n" << serialize(g);
        ASSERT_EQ(eval_disjunction(g, f, h), vf || vh);
      }
    }
}

TEST(Gaifman, DisjunctionMergeFailsOnOneVertex) {
  auto f = parse_sentence("exists x. forall y. ~x = y");
  auto h = parse_sentence("exists x. forall y. x = y");
  auto k1 = complete_graph(1);
  EXPECT_FALSE(model_check(k1, f));
  EXPECT_TRUE(model_check(k1, h));
  EXPECT_FALSE(model_check(k1, disjunction_merge(f, h)));
  EXPECT_TRUE(eval_disjunction(k1, f, h));
  EXPECT_THROW(require_disjunction_target(k1), GraphTooSmall);
  EXPECT_NO_THROW(require_disjunction_target(complete_graph(2)));
}

TEST(Gaifman, MergeInputsMustBeSigma21) {
  auto ok = parse_sentence("exists x. forall y. E(x,y)");
  EXPECT_THROW(conjunction_merge(ok, parse_sentence("forall y. exists x. E(x,y)")), NotSigma21);
  EXPECT_THROW(disjunction_merge(parse_sentence("exists x. forall y. forall z. E(y,z)"), ok), NotSigma21);
  EXPECT_THROW(conjunction_merge(ok, parse_formula("exists x. E(x,z)")), UnboundVariable);
}
