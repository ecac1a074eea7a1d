#include <gtest/gtest.h>

#include <random>

#include "dpc/atlas.hpp"
#include "dpc/generators.hpp"
#include "dpc/logic.hpp"

using namespace dpc;

namespace {

// Direct Tarskian evaluation over the formula tree.
bool naive_eval(const ColoredGraph& g, const Formula& f, std::map<std::string, Vertex>& asg) {
  switch (f->kind) {
    case FormulaKind::Equal: return asg.at(f->a) == asg.at(f->b);
    case FormulaKind::Unary: return g.has_color(asg.at(f->a), f->index);
    case FormulaKind::Binary:
      if (f->index == 0) return g.distinguished(asg.at(f->a), asg.at(f->b));
      return g.related(f->index - 1, asg.at(f->a), asg.at(f->b));
    case FormulaKind::Not: return !naive_eval(g, f->kids[0], asg);
    case FormulaKind::And: return naive_eval(g, f->kids[0], asg) && naive_eval(g, f->kids[1], asg);
    case FormulaKind::Or: return naive_eval(g, f->kids[0], asg) || naive_eval(g, f->kids[1], asg);
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
      const bool want = f->kind == FormulaKind::Exists;
      auto saved = asg.find(f->a) == asg.end() ? std::optional<Vertex>() : std::optional<Vertex>(asg[f->a]);
      bool result = !want;
      for (Vertex v = 0; v < g.order() && result != want; ++v) {
        asg[f->a] = v;
        if (naive_eval(g, f->kids[0], asg) == want) result = want;
      }
      if (saved)
        asg[f->a] = *saved;
      else
        asg.erase(f->a);
      return result;
    }
  }
  return false;
}

bool naive_check(const ColoredGraph& g, const Formula& f) {
  std::map<std::string, Vertex> asg;
  return naive_eval(g, f, asg);
}

struct RandomFormula {
  std::mt19937_64& rng;
  std::vector<std::string> vars{"x", "y", "z"};

  std::string var() { return vars[rng() % vars.size()]; }
  Formula atom() {
    switch (rng() % 3) {
      case 0: return fo::eq(var(), var());
      case 1: return fo::pred(0, var());
      default: return fo::rel(0, var(), var());
    }
  }
  Formula matrix(int depth) {
    if (depth == 0 || rng() % 3 == 0) return atom();
    switch (rng() % 3) {
      case 0: return fo::neg(matrix(depth - 1));
      case 1: return fo::conj(matrix(depth - 1), matrix(depth - 1));
      default: return fo::disj(matrix(depth - 1), matrix(depth - 1));
    }
  }
  Formula sentence() {
    Formula f = matrix(3);
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) f = rng() % 2 ? fo::exists(*it, f) : fo::forall(*it, f);
    return f;
  }
};

std::vector<ColoredGraph> small_colored_graphs() {
  std::vector<ColoredGraph> out;
  for (std::size_t n = 1; n <= 4; ++n)
    for (const auto& g : atlas(n))
      for (std::size_t mask = 0; mask < (std::size_t{1} << n); mask += 3) {
        std::vector<std::size_t> col(n);
        for (std::size_t i = 0; i < n; ++i) col[i] = (mask >> i) & 1U;
        out.push_back(with_coloring(g, 2, col));
      }
  return out;
}

}  // namespace

TEST(Logic, ParsePrintRoundTrip) {
  for (const char* text : {"exists x. P1(x)", "forall x. exists y. (E(x,y) | x = y)", "exists x. ~(P2(x) & E1(x,x))",
                           "exists x. exists y. ((E(x,y) & ~(x = y)) | P1(y))"}) {
    auto f = parse_formula(text);
    auto g = parse_formula(to_string(f));
    EXPECT_TRUE(formulas_equal(f, g)) << text;
  }
}

TEST(Logic, RandomPrintRoundTrip) {
  std::mt19937_64 rng(1);
  RandomFormula gen{rng};
  for (int t = 0; t < 500; ++t) {
    auto f = gen.sentence();
    EXPECT_TRUE(formulas_equal(f, parse_formula(to_string(f)))) << to_string(f);
  }
}

TEST(Logic, ParseErrors) {
  EXPECT_THROW(parse_formula("exists x. (P1(x)"), Error);
  EXPECT_THROW(parse_formula("exists . P1(x)"), Error);
  EXPECT_THROW(parse_formula("P0(x)"), Error);
  EXPECT_THROW(parse_formula("E(x)"), Error);
  EXPECT_THROW(parse_sentence("exists x. E(x,y)"), UnboundVariable);
  EXPECT_NO_THROW(parse_formula("exists x. E(x,y)"));
  EXPECT_THROW(model_check(path_graph(3), parse_sentence("exists x. P1(x)")), UnknownPredicate);
  EXPECT_THROW(model_check(path_graph(3), parse_sentence("exists x. E1(x,x)")), UnknownPredicate);
}

TEST(Logic, ModelCheckMatchesNaiveEvaluator) {
  std::mt19937_64 rng(2);
  RandomFormula gen{rng};
  auto graphs = small_colored_graphs();
  for (int t = 0; t < 300; ++t) {
    auto f = gen.sentence();
    for (const auto& g : graphs) ASSERT_EQ(model_check(g, f), naive_check(g, f)) << to_string(f) << "\n" << serialize(g);
  }
}

TEST(Logic, FreeVariablesAndAssignments) {
  auto f = parse_formula("exists y. (E(x,y) & P1(y))");
  EXPECT_EQ(free_vars(f), (std::set<std::string>{"x"}));
  auto g = with_coloring(path_graph(3), 1, {1, 0, 1});  // only vertex 2 carries P1
  EXPECT_TRUE(model_check(g, f, {{"x", 1}}));
  EXPECT_TRUE(model_check(g, f, {{"x", 3}}));
  EXPECT_FALSE(model_check(g, f, {{"x", 2}}));
}

TEST(Logic, BinaryRelations) {
  GraphBuilder b;
  b.binary("E1");
  b.node(1).node(2).node(3).edge(1, 2, {"E1"}).edge(2, 3);
  auto g = b.build();
  EXPECT_TRUE(model_check(g, parse_sentence("exists x. exists y. E1(x,y)")));
  EXPECT_FALSE(model_check(g, parse_sentence("exists x. exists y. (E1(x,y) & E1(y,x))")));
  EXPECT_TRUE(model_check(g, parse_sentence("forall x. forall y. (~E1(x,y) | E(x,y))")));
  // with a binary relation present, E names it rather than the edge set
  EXPECT_FALSE(model_check(g, parse_sentence("exists x. exists y. exists z. (E(x,y) & E(y,z))")));
}

TEST(Logic, Classification) {
  auto c = [](const char* s) { return classify(parse_sentence(s)); };
  EXPECT_EQ(c("exists x. exists y. E(x,y)").t, 1u);
  EXPECT_EQ(c("exists x. exists y. E(x,y)").side, Fragment::Side::Sigma);
  auto f = c("exists x. exists y. forall z. exists w. (E(x,z) | E(y,w))");
  EXPECT_EQ(f.t, 3u);
  EXPECT_TRUE(f.sigma_t1);
  EXPECT_EQ(f.blocks, (std::vector<std::size_t>{2, 1, 1}));
  auto g = c("exists x. forall y. forall z. (E(x,y) | E(x,z))");
  EXPECT_EQ(g.t, 2u);
  EXPECT_FALSE(g.sigma_t1);
  EXPECT_FALSE(in_sigma_t1(g, 2));
  auto p = c("forall y. exists x. E(x,y)");
  EXPECT_EQ(p.side, Fragment::Side::Pi);
  EXPECT_TRUE(in_sigma_t1(p, 3));
  EXPECT_FALSE(in_sigma_t1(p, 2));
  EXPECT_THROW(c("exists x. (P1(x) & exists y. E(x,y))"), NotPrenex);
}

TEST(Logic, PrenexNegation) {
  std::mt19937_64 rng(4);
  RandomFormula gen{rng};
  auto graphs = small_colored_graphs();
  for (int t = 0; t < 100; ++t) {
    auto f = gen.sentence();
    auto nf = negate_prenex(f);
    EXPECT_NO_THROW(split_prenex(nf));
    for (std::size_t i = 0; i < graphs.size(); i += 3) ASSERT_NE(naive_check(graphs[i], nf), naive_check(graphs[i], f));
  }
}

TEST(Logic, NumberingRoundTrip) {
  std::mt19937_64 rng(6);
  RandomFormula gen{rng};
  for (int t = 0; t < 100; ++t) {
    auto f = gen.sentence();
    auto back = decode(encode(f));
    ASSERT_TRUE(back.has_value());
    EXPECT_EQ(canonical_string(*back), canonical_string(f));
  }
  EXPECT_FALSE(decode(BigNat(0)).has_value());
}

TEST(Logic, FormulaSizeCountsNodes) {
  EXPECT_EQ(formula_size(parse_formula("P1(x)")), 1u);
  EXPECT_EQ(formula_size(parse_formula("exists x. (P1(x) & ~E(x,x))")), 5u);
}

TEST(Logic, NormalFormsPreserveTruth) {
  std::mt19937_64 rng(8);
  RandomFormula gen{rng};
  auto graphs = small_colored_graphs();
  for (int t = 0; t < 100; ++t) {
    auto f = gen.sentence();
    auto p = split_prenex(f);
    auto via_dnf = join_prenex(Prenex{p.prefix, from_dnf(dnf(p.matrix), "x")});
    auto n = nnf(f);
    for (std::size_t i = 0; i < graphs.size(); i += 2) {
      const bool want = naive_check(graphs[i], f);
      ASSERT_EQ(naive_check(graphs[i], n), want) << to_string(f);
      ASSERT_EQ(naive_check(graphs[i], via_dnf), want) << to_string(f);
      ASSERT_EQ(naive_check(graphs[i], canonical_form(f)), want) << to_string(f);
    }
  }
  EXPECT_THROW(dnf(parse_formula("exists x. P1(x)")), NotPrenex);
}

TEST(Logic, UnaryQueryMatchesAssignment) {
  std::mt19937_64 rng(9);
  auto f = parse_formula("exists y. (E(x,y) & forall z. (~E(y,z) | z = x | P1(z)))");
  UnaryQuery q(f, "x");
  for (int t = 0; t < 30; ++t) {
    auto g0 = random_connected(3 + t % 5, 0.5, rng);
    std::vector<std::size_t> col(g0.order());
    for (auto& c : col) c = rng() % 2;
    auto g = with_coloring(g0, 1, col);
    for (Vertex v = 0; v < g.order(); ++v) EXPECT_EQ(q.holds(g, v), model_check(g, f, {{"x", g.id(v)}}));
  }
}
