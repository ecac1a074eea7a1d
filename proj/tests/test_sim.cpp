#include <gtest/gtest.h>

#include <bit>
#include <random>

#include "dpc/generators.hpp"
#include "dpc/problems.hpp"

using namespace dpc;

namespace {

using StepFn = std::function<void(NodeContext&, const Inbox&)>;

NodeAlgorithm lambda_alg(StepFn f) {
  struct Program : NodeProgram {
    StepFn f;
    void step(NodeContext& ctx, const Inbox& in) override { f(ctx, in); }
  };
  NodeAlgorithm alg;
  alg.name = "test";
  alg.make = [f] {
    auto p = std::make_unique<Program>();
    p->f = f;
    return p;
  };
  return alg;
}

// Sends `bits` one-bits to every neighbor in round 0, then rejects.
NodeAlgorithm sender(std::size_t bits) {
  return lambda_alg([bits](NodeContext& ctx, const Inbox&) {
    if (ctx.round() == 0) {
      Message m;
      for (std::size_t i = 0; i < bits; ++i) m.put_flag(true);
      ctx.send_all_neighbors(m);
      return;
    }
    ctx.decide(false);
  });
}

std::size_t naive_bandwidth(std::size_t n) {
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < n + 1) ++bits;
  return 32 * std::max<std::size_t>(1, bits);
}

}  // namespace

TEST(Message, GammaLayout) {
  Message m;
  m.put_gamma(0);
  EXPECT_EQ(m.bits(), 1u);
  EXPECT_TRUE(m.bit(0));
  Message two;
  two.put_gamma(2);  // x = 3 = 0b11: one zero, the marker, then the low bit
  ASSERT_EQ(two.bits(), 3u);
  EXPECT_FALSE(two.bit(0));
  EXPECT_TRUE(two.bit(1));
  EXPECT_TRUE(two.bit(2));
  Message max;
  EXPECT_THROW(max.put_gamma(~std::uint64_t{0}), Error);
}

TEST(Message, GammaLengthIsTwiceLogPlusOne) {
  for (std::uint64_t v : {0ULL, 1ULL, 2ULL, 6ULL, 7ULL, 1000ULL, (1ULL << 40), (1ULL << 63) - 1}) {
    Message m;
    m.put_gamma(v);
    const std::size_t log = static_cast<std::size_t>(std::bit_width(v + 1)) - 1;
    EXPECT_EQ(m.bits(), 2 * log + 1) << v;
  }
}

TEST(Message, RandomRoundTripProperty) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 2000; ++t) {
    Message m;
    struct Item {
      int kind;
      std::uint64_t v;
      unsigned w;
    };
    std::vector<Item> items;
    const int count = 1 + static_cast<int>(rng() % 20);
    for (int i = 0; i < count; ++i) {
      const int kind = static_cast<int>(rng() % 3);
      const unsigned shift = static_cast<unsigned>(rng() % 64);
      std::uint64_t v = rng() >> shift;
      if (kind == 0) {
        if (v == ~std::uint64_t{0}) v -= 1;
        m.put_gamma(v);
        items.push_back({0, v, 0});
      } else if (kind == 1) {
        const unsigned w = 1 + static_cast<unsigned>(rng() % 64);
        if (w < 64) v &= (std::uint64_t{1} << w) - 1;
        m.put_raw(v, w);
        items.push_back({1, v, w});
      } else {
        m.put_flag(v & 1U);
        items.push_back({2, v & 1U, 0});
      }
    }
    MessageReader rd(m);
    for (const auto& it : items) {
      if (it.kind == 0) {
        ASSERT_EQ(rd.get_gamma(), it.v);
      } else if (it.kind == 1) {
        ASSERT_EQ(rd.get_raw(it.w), it.v);
      } else {
        ASSERT_EQ(rd.get_flag(), it.v == 1);
      }
    }
    EXPECT_TRUE(rd.done());

    const std::size_t from = rng() % (m.bits() + 1);
    const std::size_t len = rng() % (m.bits() - from + 1);
    auto s = m.slice(from, len);
    ASSERT_EQ(s.bits(), len);
    for (std::size_t i = 0; i < len; ++i) ASSERT_EQ(s.bit(i), m.bit(from + i));

    Message a = m.slice(0, from), b = m.slice(from, m.bits() - from);
    a.append(b);
    EXPECT_EQ(a, m);
  }
}

TEST(Message, ReadPastEndThrows) {
  Message m;
  m.put_raw(5, 3);
  MessageReader rd(m);
  EXPECT_THROW(rd.get_raw(4), Error);
  auto head = m.slice(0, 2);  // "10": a zero prefix with no marker after it
  MessageReader rd2(head);
  rd2.get_flag();
  EXPECT_THROW(rd2.get_gamma(), Error);
}

TEST(Engine, BandwidthFormula) {
  for (std::size_t n : {1, 2, 3, 7, 8, 60, 1000}) {
    EXPECT_EQ(Model{ModelKind::Congest}.bandwidth(n), naive_bandwidth(n)) << n;
    EXPECT_EQ(Model{ModelKind::Clique}.bandwidth(n), naive_bandwidth(n)) << n;
  }
  EXPECT_EQ(Model{ModelKind::Local}.bandwidth(60), 0u);
}

TEST(Engine, OversizedMessageIsRejected) {
  auto g = path_graph(8);
  const std::size_t b = naive_bandwidth(8);
  EXPECT_NO_THROW(run(Model{ModelKind::Congest}, g, sender(b), 0));
  try {
    run(Model{ModelKind::Congest}, g, sender(b + 1), 0);
    FAIL() << "no violation";
  } catch (const BandwidthViolation& e) {
    EXPECT_EQ(e.bits, b + 1);
    EXPECT_EQ(e.round, 0u);
  }
  EXPECT_THROW(run(Model{ModelKind::Clique}, g, sender(b + 1), 0), BandwidthViolation);
  auto local = run(Model{ModelKind::Local}, g, sender(10 * b), 0);
  EXPECT_EQ(local.max_message_bits, 10 * b);
}

TEST(Engine, RecipientRules) {
  auto g = path_graph(4);
  auto far = lambda_alg([](NodeContext& ctx, const Inbox&) {
    if (ctx.round() == 0 && ctx.view().id == 1) ctx.send(4, Message{});
    ctx.decide(false);
  });
  EXPECT_THROW(run(Model{ModelKind::Local}, g, far, 0), IllegalRecipient);
  EXPECT_THROW(run(Model{ModelKind::Congest}, g, far, 0), IllegalRecipient);
  EXPECT_NO_THROW(run(Model{ModelKind::Clique}, g, far, 0));
  auto self = lambda_alg([](NodeContext& ctx, const Inbox&) {
    ctx.send(ctx.view().id, Message{});
    ctx.decide(false);
  });
  EXPECT_THROW(run(Model{ModelKind::Clique}, g, self, 0), IllegalRecipient);
}

TEST(Engine, ViewContents) {
  auto g = cycle_graph(5);
  Engine clique(Model{ModelKind::Clique}, g, 3, {});
  for (const auto& v : clique.views()) {
    EXPECT_EQ(v.all_ids.size(), 5u);
    EXPECT_EQ(v.k, 3u);
    EXPECT_FALSE(v.n.has_value());
  }
  Engine local(Model{ModelKind::Local}, g, 0, {});
  for (const auto& v : local.views()) {
    EXPECT_TRUE(v.all_ids.empty());
    EXPECT_EQ(v.neighbors.size(), 2u);
  }
  Model m{ModelKind::Local};
  m.reveal_n = true;
  Engine revealed(m, g, 0, {});
  for (const auto& v : revealed.views()) EXPECT_EQ(v.n, 5u);
}

TEST(Engine, VerdictIsOrAndRoundsIsMaxDecision) {
  auto g = path_graph(6);
  auto alg = lambda_alg([](NodeContext& ctx, const Inbox&) {
    const NodeId id = ctx.view().id;
    if (ctx.round() == id) ctx.decide(id == 4);
  });
  auto res = run(Model{ModelKind::Local}, g, alg, 0);
  EXPECT_TRUE(res.verdict);
  EXPECT_EQ(res.rounds_used, 6u);
  ASSERT_EQ(res.outputs.size(), 6u);
  for (auto [id, out] : res.outputs) EXPECT_EQ(out, id == 4);
  for (std::size_t v = 0; v < 6; ++v) EXPECT_EQ(res.decision_round[v], v + 1);

  auto none = lambda_alg([](NodeContext& ctx, const Inbox&) { ctx.decide(false); });
  auto r2 = run(Model{ModelKind::Local}, g, none, 0);
  EXPECT_FALSE(r2.verdict);
  EXPECT_EQ(r2.rounds_used, 0u);
}

TEST(Engine, MessagesArriveNextRoundInSenderOrder) {
  auto g = star_graph(4);
  std::vector<NodeId> order;
  auto alg = lambda_alg([&order](NodeContext& ctx, const Inbox& in) {
    if (ctx.round() == 0) {
      if (ctx.view().id != 1) ctx.send(1, Message{});
      return;
    }
    if (ctx.view().id == 1)
      for (const auto& [from, m] : in) order.push_back(from);
    ctx.decide(false);
  });
  RunOptions opts;
  opts.order = ExecutionOrder::Descending;
  Engine(Model{ModelKind::Congest}, g, 0, opts).run(alg);
  EXPECT_EQ(order, (std::vector<NodeId>{2, 3, 4, 5}));
}

TEST(Engine, RoundCap) {
  auto forever = lambda_alg([](NodeContext&, const Inbox&) {});
  EXPECT_THROW(run(Model{ModelKind::Local}, path_graph(3), forever, 0, 20), RoundCapExceeded);
}

TEST(Engine, DeterministicAndOblivious) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    auto g = random_connected(6 + t % 10, 0.2, rng);
    for (const auto& alg : {local_fpt_independent_set(), local_fpt_dominating_set(), flood_min_id(4)}) {
      auto base = run(Model{ModelKind::Local}, g, alg, 2);
      EXPECT_EQ(run(Model{ModelKind::Local}, g, alg, 2), base);
      for (auto order : {ExecutionOrder::Descending, ExecutionOrder::Shuffled}) {
        RunOptions opts;
        opts.order = order;
        opts.shuffle_seed = static_cast<std::uint64_t>(t);
        EXPECT_EQ(Engine(Model{ModelKind::Local}, g, 2, opts).run(alg), base) << alg.name;
      }
    }
  }
}

TEST(Engine, SharedStateIsDetected) {
  auto counter = std::make_shared<int>(0);
  auto leaky = lambda_alg([counter](NodeContext& ctx, const Inbox&) { ctx.decide((++*counter + ctx.view().id) % 3 == 0); });
  RunOptions opts;
  opts.check_determinism = true;
  EXPECT_THROW(Engine(Model{ModelKind::Local}, path_graph(5), 0, opts).run(leaky), NonDeterminismDetected);
  EXPECT_NO_THROW(Engine(Model{ModelKind::Local}, path_graph(5), 2, opts).run(local_fpt_independent_set()));
}

TEST(Engine, UnseededRandomnessIsRejected) {
  auto coin = lambda_alg([](NodeContext& ctx, const Inbox&) { ctx.decide(ctx.random() & 1U); });
  EXPECT_THROW(run(Model{ModelKind::Local}, path_graph(3), coin, 0), NonDeterminismDetected);
  RunOptions opts;
  opts.seed = 9;
  auto a = Engine(Model{ModelKind::Local}, path_graph(8), 0, opts).run(coin);
  auto b = Engine(Model{ModelKind::Local}, path_graph(8), 0, opts).run(coin);
  EXPECT_EQ(a, b);
}

TEST(Engine, StepBudget) {
  auto heavy = lambda_alg([](NodeContext& ctx, const Inbox&) {
    ctx.charge(1'000'000'000);
    ctx.decide(false);
  });
  RunOptions opts;
  EXPECT_NO_THROW(Engine(Model{ModelKind::Local}, path_graph(4), 0, opts).run(heavy));
  opts.fully_polynomial = true;
  EXPECT_THROW(Engine(Model{ModelKind::Local}, path_graph(4), 0, opts).run(heavy), StepBudgetExceeded);
  auto light = lambda_alg([](NodeContext& ctx, const Inbox&) {
    ctx.charge(10);
    ctx.decide(false);
  });
  EXPECT_NO_THROW(Engine(Model{ModelKind::Local}, path_graph(4), 0, opts).run(light));
}

TEST(Engine, OutputDependsOnlyOnTheBall) {
  // Nodes whose balls agree up to the halting round answer alike on a path
  // and a cycle.
  auto alg = local_fpt_dominating_set();
  const std::size_t k = 1, r = *alg.round_bound(k);
  auto p = path_graph(30), c = cycle_graph(30);
  auto rp = run(Model{ModelKind::Local}, p, alg, k), rc = run(Model{ModelKind::Local}, c, alg, k);
  std::size_t compared = 0;
  for (std::size_t v = 0; v < 30; ++v) {
    const NodeId id = p.id(static_cast<Vertex>(v));
    if (!balls_identical(p, c, id, r)) continue;
    ++compared;
    EXPECT_EQ(rp.outputs[v], rc.outputs[c.index_of(id)]) << id;
  }
  EXPECT_GT(compared, 20u);
}

TEST(Engine, FloodMinIdRespectsBandwidth) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 10; ++t) {
    auto g = random_connected(30 + t * 3, 0.1, rng);
    for (auto kind : {ModelKind::Congest, ModelKind::Clique}) {
      auto res = run(Model{kind}, g, flood_min_id(diameter(g)), 0);
      EXPECT_LE(res.max_message_bits, res.bandwidth);
      EXPECT_EQ(res.rounds_used, diameter(g));
    }
  }
}
