#include <gtest/gtest.h>

#include <random>

#include "dpc/generators.hpp"
#include "dpc/kernel.hpp"

using namespace dpc;

namespace {

KernelAlgorithm ds_kernel() {
  return clique_kernel_wrapper(Problem::DominatingSet, clique_dominating_set(), {path_graph(2), 1}, {path_graph(3), 0});
}

KernelAlgorithm degree_kernel(std::size_t d) {
  ProblemInstance yes{star_graph(d + 1), 0}, no{path_graph(1), 0};
  yes.d = no.d = d;
  return clique_kernel_wrapper(Problem::DegreeGreaterThan, degree_greater_than_algorithm(d), yes, no);
}

NodeAlgorithm heavy_algorithm() {
  struct Heavy : NodeProgram {
    void step(NodeContext& ctx, const Inbox&) override {
      ctx.charge(std::size_t{1} << 40);
      ctx.decide(true);
    }
  };
  NodeAlgorithm alg;
  alg.name = "heavy";
  alg.make = [] { return std::make_unique<Heavy>(); };
  alg.round_bound = [](std::size_t) { return std::optional<std::size_t>(0); };
  return alg;
}

}  // namespace

TEST(Kernel, DominatingSetKernelIsEquivalent) {
  std::mt19937_64 rng(61);
  auto kern = ds_kernel();
  for (int t = 0; t < 60; ++t) {
    auto g = random_connected(1 + t % 10, 0.3, rng);
    for (std::size_t k = 0; k <= 3; ++k) {
      ProblemInstance in{g, k};
      auto out = run_kernel(kern, in);
      ASSERT_TRUE(verify_kernel(Problem::DominatingSet, in, out)) << serialize(g) << k;
      EXPECT_EQ(out.run.verdict, oracle_solve(Problem::DominatingSet, in));
      EXPECT_LE(produced_order(out.embedded), 3u);
      EXPECT_EQ(out.declared_size_bound, 3u);
      EXPECT_NO_THROW(validate(out.embedded));
    }
  }
}

TEST(Kernel, DegreeKernelIsEquivalent) {
  std::mt19937_64 rng(62);
  for (std::size_t d = 1; d <= 4; ++d) {
    auto kern = degree_kernel(d);
    for (int t = 0; t < 30; ++t) {
      auto g = random_connected(2 + t % 9, 0.3, rng);
      ProblemInstance in{g, 0};
      in.d = d;
      auto out = run_kernel(kern, in);
      ASSERT_TRUE(verify_kernel(Problem::DegreeGreaterThan, in, out)) << serialize(g) << d;
      EXPECT_EQ(out.declared_size_bound, d + 2);
    }
  }
}

TEST(Kernel, AddsExactlyOneRound) {
  std::mt19937_64 rng(63);
  auto kern = ds_kernel();
  for (int t = 0; t < 20; ++t) {
    auto g = random_connected(2 + t % 12, 0.3, rng);
    ProblemInstance in{g, 2};
    auto direct = run(Model{ModelKind::Clique}, g, clique_dominating_set(), 2);
    auto out = run_kernel(kern, in);
    EXPECT_EQ(out.rounds_used, direct.rounds_used + 1);
    EXPECT_LE(out.run.max_message_bits, out.run.bandwidth);
  }
  ProblemInstance in{cycle_graph(7), 0};
  in.d = 2;
  EXPECT_EQ(run_kernel(degree_kernel(2), in).rounds_used, 1u);
}

TEST(Kernel, HardInstancesAreChecked) {
  EXPECT_THROW(clique_kernel_wrapper(Problem::DominatingSet, clique_dominating_set(), {path_graph(3), 0}, {path_graph(2), 1}),
               MissingHardInstance);
  EXPECT_THROW(clique_kernel_wrapper(Problem::DominatingSet, clique_dominating_set(), {}, {path_graph(3), 0}),
               MissingHardInstance);
  EXPECT_THROW(clique_kernel_wrapper(Problem::DominatingSet, clique_dominating_set(), {path_graph(2), 1}, {}),
               MissingHardInstance);
}

TEST(Kernel, NeedsCongestedClique) {
  EXPECT_THROW(run(Model{ModelKind::Congest}, path_graph(4), ds_kernel().algorithm(), 1), NotAvailableInModel);
}

TEST(Kernel, FullyPolynomialBudget) {
  RunOptions opts;
  opts.fully_polynomial = true;
  ProblemInstance in{cycle_graph(8), 3};
  EXPECT_NO_THROW(run_kernel(ds_kernel(), in, opts));
  ProblemInstance deg{cycle_graph(8), 0};
  deg.d = 2;
  EXPECT_NO_THROW(run_kernel(degree_kernel(2), deg, opts));
  KernelAlgorithm heavy{Problem::DegreeGreaterThan, heavy_algorithm(), {star_graph(1), 0}, {path_graph(1), 0}};
  EXPECT_THROW(run_kernel(heavy, in, opts), StepBudgetExceeded);
  EXPECT_NO_THROW(run_kernel(heavy, in));
}

TEST(Fixtures, DegreeFamilyVerdicts) {
  for (std::size_t n : {6, 12, 30}) {
    for (int variant = 0; variant <= 3; ++variant) {
      ProblemInstance in{degree_family(n, variant), 0};
      in.d = 3;
      EXPECT_EQ(oracle_solve(Problem::DegreeGreaterThan, in), variant != 0) << n << " " << variant;
      in.d = 4;
      EXPECT_FALSE(oracle_solve(Problem::DegreeGreaterThan, in));
    }
  }
  EXPECT_THROW(degree_family(2, 0), GraphTooSmall);
  EXPECT_THROW(degree_family(5, 4), Error);
}

TEST(Fixtures, DegreeFamilyMiddleIsBlind) {
  const std::size_t n = 30;
  auto g0 = degree_family(n, 0);
  for (int variant = 1; variant <= 3; ++variant) {
    auto gv = degree_family(n, variant);
    EXPECT_TRUE(indistinguishable(g0, gv, {n / 2, n / 2 + 1}, n / 2 - 4));
    // v1's pendant comes into view of v15 at radius 15
    EXPECT_FALSE(indistinguishable(g0, gv, {n / 2, n / 2 + 1}, n / 2 + 1));
  }
}

TEST(Fixtures, MisPathFamily) {
  const std::size_t n = 30;
  auto yes = mis_path_family(n, true), no = mis_path_family(n, false);
  EXPECT_TRUE(oracle_solve(Problem::MulticoloredIndependentSet, {yes, 3}));
  EXPECT_FALSE(oracle_solve(Problem::MulticoloredIndependentSet, {no, 3}));
  std::vector<NodeId> middle;
  for (NodeId v = n / 3 + 1; v <= 2 * n / 3; ++v) middle.push_back(v);
  EXPECT_TRUE(indistinguishable(yes, no, middle, n / 3 - 2));
  EXPECT_FALSE(indistinguishable(yes, no, {n}, 0));
  EXPECT_THROW(mis_path_family(4, true), GraphTooSmall);
}
