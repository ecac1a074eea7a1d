#pragma once
#include <chrono>
#include <random>
#include <set>

#include "atlas.hpp"
#include "gaifman.hpp"
#include "generators.hpp"
#include "kernel.hpp"
#include "mis_circuit.hpp"
#include "reductions.hpp"
#include "sparsity.hpp"

namespace dpc {

// One assertion family of a suite: how many cases ran and how many failed.
struct CheckRecord {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string detail;  // first failure, else a measured summary

  bool pass() const { return cases > 0 && failures == 0; }
};

struct SuiteReport {
  std::string suite;
  std::string title;
  std::vector<CheckRecord> checks;
  double seconds = 0;

  bool pass() const {
    return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass(); });
  }
};

struct SuiteOptions {
  std::uint64_t seed = 0;
  // Mutation control: drops one red-blue edge from every clique_dom_to_rbds output.
  bool mutate_clique_dom = false;
};

// Pinned limits.
inline constexpr double kLocalFptSweepSeconds = 120;
inline constexpr double kReductionSweepSeconds = 15 * 60;
inline constexpr double kGaifmanSweepSeconds = 10 * 60;
inline constexpr std::size_t kCircuitCongestionLimit = 3;

namespace suite {

class Tally {
 public:
  explicit Tally(std::string name) { rec_.name = std::move(name); }

  template <class Why>
  void expect(bool ok, Why&& why) {
    ++rec_.cases;
    if (!ok && rec_.failures++ == 0) rec_.detail = why();
  }
  void expect(bool ok, const char* why) {
    expect(ok, [why] { return std::string(why); });
  }
  // Summary shown when nothing failed.
  void note(std::string s) { summary_ = std::move(s); }
  CheckRecord done() {
    if (rec_.failures == 0) rec_.detail = summary_;
    return rec_;
  }

 private:
  CheckRecord rec_;
  std::string summary_;
};

class Stopwatch {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count(); }

 private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

inline std::string fmt_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2fs", s);
  return buf;
}

inline CheckRecord time_limit(const std::string& name, double seconds, double limit) {
  Tally t(name);
  t.expect(seconds < limit, [&] { return fmt_seconds(seconds) + " >= " + fmt_seconds(limit); });
  t.note(fmt_seconds(seconds) + " < " + fmt_seconds(limit));
  return t.done();
}

inline std::string describe(const ColoredGraph& g) {
  std::string s = "n=" + std::to_string(g.order()) + " edges";
  for (auto [u, v] : g.edges()) s += " " + std::to_string(g.id(u)) + "-" + std::to_string(g.id(v));
  return s;
}

// Round-robin coloring with P1..Pk on every vertex.
inline ColoredGraph round_robin(const ColoredGraph& g, std::size_t k, std::size_t shift = 0) {
  std::vector<std::size_t> col(g.order());
  for (std::size_t i = 0; i < col.size(); ++i) col[i] = (i + shift) % k;
  return with_coloring(g, k, col);
}

// Every graph on 1..max_n vertices, connected or not, up to isomorphism.
inline std::vector<ColoredGraph> all_small_graphs(std::size_t max_n) {
  std::vector<ColoredGraph> out;
  for (std::size_t n = 1; n <= max_n; ++n) {
    std::vector<std::pair<Vertex, Vertex>> pairs;
    for (Vertex i = 0; i < n; ++i)
      for (Vertex j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    std::set<std::uint64_t> seen;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs.size()); ++mask) {
      std::vector<std::pair<Vertex, Vertex>> es;
      for (std::size_t i = 0; i < pairs.size(); ++i)
        if ((mask >> i) & 1U) es.push_back(pairs[i]);
      auto g = plain_graph(n, es);
      if (seen.insert(canonical_code(g)).second) out.push_back(std::move(g));
    }
  }
  return out;
}

// Removes the least red-blue edge of a clique_dom_to_rbds output from every store.
inline void drop_red_blue_edge(EmbeddedInstance& e) {
  auto is_blue = [](const VKey& k) { return k.size() > 1 && k[1] == 1; };
  std::optional<std::pair<VKey, VKey>> victim;
  for (const auto& [h, st] : e.stores)
    for (const auto& ed : st.incident)
      if (is_blue(ed.a) != is_blue(ed.b) && (!victim || std::tie(ed.a, ed.b) < std::tie(victim->first, victim->second)))
        victim = {ed.a, ed.b};
  if (!victim) return;
  for (auto& [h, st] : e.stores)
    std::erase_if(st.incident, [&](const VirtualEdge& ed) { return ed.a == victim->first && ed.b == victim->second; });
}

inline std::vector<std::set<std::size_t>> color_sets(std::size_t m, std::size_t max_size) {
  std::vector<std::set<std::size_t>> out;
  for (std::uint32_t mask = 1; mask < (1U << m); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) > max_size) continue;
    std::set<std::size_t> s;
    for (std::size_t i = 0; i < m; ++i)
      if ((mask >> i) & 1U) s.insert(i + 1);
    out.push_back(std::move(s));
  }
  return out;
}

// ------------------------------------------------------------------ 1

inline SuiteReport local_fpt_rounds(const SuiteOptions&) {
  SuiteReport rep;
  auto is = local_fpt_independent_set(), ds = local_fpt_dominating_set();
  const std::pair<Problem, const NodeAlgorithm*> algs[] = {{Problem::IndependentSet, &is}, {Problem::DominatingSet, &ds}};

  Tally same("rounds depend on k only (paths, cycles, n in {20,40,80})");
  std::string summary;
  for (auto [problem, alg] : algs)
    for (std::size_t k = 1; k <= 3; ++k) {
      std::set<std::size_t> rounds;
      for (std::size_t n : {20, 40, 80})
        for (const auto& g : {path_graph(n), cycle_graph(n)}) rounds.insert(run(Model{}, g, *alg, k).rounds_used);
      same.expect(rounds.size() == 1, [&] {
        return problem_name(problem) + " k=" + std::to_string(k) + " gave " + std::to_string(rounds.size()) + " distinct round counts";
      });
      summary += problem_name(problem) + " k=" + std::to_string(k) + ": " + std::to_string(*rounds.begin()) + " rounds; ";
    }
  same.note(summary);
  rep.checks.push_back(same.done());

  Tally verdicts("verdicts match oracle_solve on the n <= 9 atlas, k in 1..3");
  Stopwatch clock;
  RunOptions opts;
  opts.record_traffic = false;
  for_each_atlas_graph(9, [&](const ColoredGraph& g) {
    for (std::size_t k = 1; k <= 3; ++k) {
      ProblemInstance inst{g, k};
      for (auto [problem, alg] : algs) {
        bool got = Engine(Model{}, g, k, opts).run(*alg).verdict;
        bool want = oracle_solve(problem, inst);
        verdicts.expect(got == want, [&] { return problem_name(problem) + " k=" + std::to_string(k) + " " + describe(g); });
      }
    }
  });
  const double secs = clock.seconds();
  verdicts.note("0 mismatches");
  rep.checks.push_back(verdicts.done());
  rep.checks.push_back(time_limit("atlas sweep runtime", secs, kLocalFptSweepSeconds));
  return rep;
}

// ------------------------------------------------------------------ 2

inline SuiteReport reductions_soundness(const SuiteOptions& opt) {
  SuiteReport rep;
  Stopwatch clock;
  const std::size_t max_n = 7;

  {
    Tally eq("clique_dom_to_rbds verdicts (l=3, k<=2)"), env("clique_dom_to_rbds envelope, radius <= 1");
    auto red = clique_dom_reduction();
    for_each_atlas_graph(max_n, [&](const ColoredGraph& g) {
      for (std::size_t k = 0; k <= 2; ++k) {
        ProblemInstance in;
        in.graph = g;
        in.k = k;
        in.l = 3;
        auto e = red.apply(in);
        if (opt.mutate_clique_dom) drop_red_blue_edge(e);
        try {
          auto b = measure(e);
          auto v = violations(b, e.declared, e.model);
          env.expect(v.empty() && b.radius <= 1, [&] { return "k=" + std::to_string(k) + " " + describe(g); });
          bool want = oracle_solve(Problem::CliqueDomination, in);
          bool got = oracle_solve(Problem::RedBlueDominatingSet, target_instance(e));
          eq.expect(got == want, [&] { return "k=" + std::to_string(k) + " " + describe(g); });
        } catch (const InvalidEmbedding& ex) {
          env.expect(false, [&] { return std::string(ex.what()); });
          eq.expect(false, [&] { return std::string(ex.what()); });
        }
      }
    });
    rep.checks.push_back(eq.done());
    rep.checks.push_back(env.done());
  }

  {
    Tally eq("isi_to_mis verdicts (all H with |H| <= 4)"), env("isi_to_mis envelope, radius and rounds <= 2|H|");
    const auto patterns = all_small_graphs(4);
    for (const auto& h : patterns) {
      auto red = isi_reduction(h);
      const std::size_t cap = 2 * h.order();
      for_each_atlas_graph(max_n, [&](const ColoredGraph& g) {
        ProblemInstance in;
        in.graph = g;
        in.pattern = h;
        auto e = red.apply(in);
        auto b = measure(e);
        env.expect(violations(b, e.declared, e.model).empty() && b.radius <= cap && b.rounds <= cap,
                   [&] { return "H " + describe(h) + " G " + describe(g); });
        bool want = oracle_solve(Problem::InducedSubgraphIsomorphism, in);
        bool got = oracle_solve(Problem::MulticoloredIndependentSet, target_instance(e));
        eq.expect(got == want, [&] { return "H " + describe(h) + " G " + describe(g); });
      });
    }
    eq.note(std::to_string(patterns.size()) + " patterns");
    rep.checks.push_back(eq.done());
    rep.checks.push_back(env.done());
  }

  {
    Tally eq("union_combinator verdicts (A or B)"), env("union_combinator envelope");
    const std::vector<std::pair<ColoredGraph, ColoredGraph>> pairs{
        {complete_graph(2), plain_graph(2, {})},
        {path_graph(3), complete_graph(3)},
        {plain_graph(3, {{0, 1}}), star_graph(3)},
        {cycle_graph(4), plain_graph(4, {{0, 1}, {2, 3}})},
    };
    for (const auto& [ha, hb] : pairs) {
      auto red = union_combinator(isi_reduction(ha), isi_reduction(hb));
      for_each_atlas_graph(max_n, [&](const ColoredGraph& g) {
        ProblemInstance in;
        in.graph = g;
        auto e = red.apply(in);
        auto b = measure(e);
        env.expect(violations(b, e.declared, e.model).empty(), [&] { return red.name + " " + describe(g); });
        ProblemInstance ia = in, ib = in;
        ia.pattern = ha;
        ib.pattern = hb;
        bool want = oracle_solve(Problem::InducedSubgraphIsomorphism, ia) || oracle_solve(Problem::InducedSubgraphIsomorphism, ib);
        bool got = oracle_solve(Problem::MulticoloredIndependentSet, target_instance(e));
        eq.expect(got == want, [&] { return red.name + " " + describe(g); });
      });
    }
    rep.checks.push_back(eq.done());
    rep.checks.push_back(env.done());
  }

  {
    Tally eq("mc_sigma1_to_mis verdicts"), env("mc_sigma1_to_mis envelope");
    const std::vector<std::string> sentences{
        "exists x. P1(x)",
        "exists x. exists y. (E(x,y) & ~P1(y))",
        "exists x. exists y. exists z. ((~E(x,y) & ~x=y) | P1(z))",
        "exists x. exists y. exists z. (E(x,y) & E(y,z) & ~E(x,z) & ~x=z)",
    };
    auto red = mc_sigma1_reduction();
    for (const auto& text : sentences) {
      auto f = parse_sentence(text);
      for_each_atlas_graph(max_n, [&](const ColoredGraph& g0) {
        auto g = round_robin(g0, 2);
        ProblemInstance in;
        in.graph = g;
        in.formula = f;
        auto e = red.apply(in);
        auto b = measure(e);
        env.expect(violations(b, e.declared, e.model).empty(), [&] { return text + " on " + describe(g); });
        eq.expect(oracle_solve(Problem::MulticoloredIndependentSet, target_instance(e)) == model_check(g, f),
                  [&] { return text + " on " + describe(g); });
      });
    }
    rep.checks.push_back(eq.done());
    rep.checks.push_back(env.done());
  }

  rep.checks.push_back(time_limit("sweep runtime", clock.seconds(), kReductionSweepSeconds));
  return rep;
}

// ------------------------------------------------------------------ 3

struct SimulationCase {
  std::string label;
  EmbeddedInstance embedded;
  NodeAlgorithm target;
  Model model;
};

inline std::vector<SimulationCase> simulation_cases(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<SimulationCase> out;
  const auto query = parse_sentence("exists x. exists y. (E(x,y) & ~P1(y))");
  for (std::size_t i = 0; i < 20; ++i) {
    const std::size_t n = 4 + rng() % 5;
    auto g = random_connected(n, 0.3, rng);
    SimulationCase c;
    ProblemInstance in;
    in.graph = g;
    switch (i % 5) {
      case 0:
        in.k = 2;
        c.embedded = identity_reduction(Problem::IndependentSet).apply(in);
        c.target = flood_min_id(3);
        c.model = Model{ModelKind::Congest};
        break;
      case 1:
        in.k = 1 + rng() % 2;
        in.l = 2 + rng() % 2;
        c.embedded = clique_dom_reduction().apply(in);
        c.model = Model{ModelKind::Local};
        break;
      case 2: {
        auto pats = all_small_graphs(3);
        in.pattern = pats[rng() % pats.size()];
        c.embedded = isi_reduction().apply(in);
        c.model = Model{ModelKind::Local};
        break;
      }
      case 3:
        in.graph = round_robin(g, 2, rng() % 2);
        in.formula = query;
        c.embedded = mc_sigma1_reduction().apply(in);
        c.model = Model{ModelKind::Local};
        break;
      default:
        in.pattern = path_graph(2);
        c.embedded = isi_reduction().apply(in);
        c.target = flood_min_id(2);
        c.model = Model{ModelKind::Congest};
        break;
    }
    if (!c.target.make) {
      auto gp = target_instance(c.embedded).graph;
      c.target = gather_and_decide(c.embedded.target, diameter(gp), IncompletePolicy::Reject);
    }
    c.label = c.embedded.reduction + " + " + c.target.name + " (" + model_name(c.model.kind) + ", " + describe(g) + ")";
    out.push_back(std::move(c));
  }
  return out;
}

inline SuiteReport simulation_bound_suite(const SuiteOptions& opt) {
  SuiteReport rep;
  Tally bound("rounds <= t + F*r^2*c*s"), verdict("simulated verdict equals the direct run on G'");
  std::size_t worst_slack = kUnreachable;
  for (const auto& c : simulation_cases(opt.seed)) {
    auto b = measure(c.embedded);
    const std::size_t f = *c.target.round_bound(c.embedded.k_prime);
    const std::size_t limit = simulation_bound(b, f);
    auto res = simulate_through(c.embedded, c.target, c.model);
    bound.expect(res.rounds_used <= limit,
                 [&] { return c.label + ": " + std::to_string(res.rounds_used) + " > " + std::to_string(limit); });
    if (res.rounds_used <= limit) worst_slack = std::min(worst_slack, limit - res.rounds_used);
    auto target = target_instance(c.embedded);
    auto direct = run(c.model, target.graph, c.target, target.k);
    verdict.expect(direct.verdict == res.verdict, [&] { return c.label; });
  }
  bound.note("least slack " + std::to_string(worst_slack) + " rounds");
  rep.checks.push_back(bound.done());
  rep.checks.push_back(verdict.done());
  return rep;
}

// ------------------------------------------------------------------ 4

inline SuiteReport circuit_construction(const SuiteOptions&) {
  SuiteReport rep;
  Tally shape("weft 1 and depth 3 when there is a conflict pair"), eq("weighted_sat equals the MIS oracle"),
      cong("clique-edge congestion <= 3"), back("embedding materializes to the circuit");
  std::size_t max_cong = 0;
  for_each_atlas_graph(8, [&](const ColoredGraph& g0) {
    for (std::size_t k = 1; k <= 3; ++k) {
      if (k > g0.order()) continue;
      auto g = round_robin(g0, k);
      auto mc = mis_to_circuit(g, k);
      if (mc.conflict_pairs >= 1) {
        auto wd = weft_and_depth(mc.circuit);
        shape.expect(wd.weft == 1 && wd.depth == 3, [&] {
          return "weft " + std::to_string(wd.weft) + " depth " + std::to_string(wd.depth) + " k=" + std::to_string(k) + " " + describe(g);
        });
      }
      eq.expect(weighted_sat(mc.circuit, k) == oracle_solve(Problem::MulticoloredIndependentSet, {g, k}),
                [&] { return "k=" + std::to_string(k) + " " + describe(g); });
      auto b = measure(mc.embedding);
      max_cong = std::max(max_cong, b.path_load);
      cong.expect(b.path_load <= kCircuitCongestionLimit, [&] {
        return "congestion " + std::to_string(b.path_load) + " at k=" + std::to_string(k) + " " + describe(g);
      });
      back.expect(materialize(mc.embedding) == circuit_to_graph(mc.circuit), [&] { return describe(g); });
    }
  });
  cong.note("max congestion " + std::to_string(max_cong));
  rep.checks.push_back(shape.done());
  rep.checks.push_back(eq.done());
  auto c = cong.done();
  if (!c.pass()) c.detail += "; max congestion " + std::to_string(max_cong);
  rep.checks.push_back(c);
  rep.checks.push_back(back.done());
  return rep;
}

// ------------------------------------------------------------------ 5

inline std::vector<Formula> alpha_fixtures() {
  return {fo::pred(0, "x"), parse_formula("exists y. exists z. (~y=z & E(x,y) & E(x,z))")};
}

inline SuiteReport gaifman_negation(const SuiteOptions&) {
  SuiteReport rep;
  Stopwatch clock;
  Tally neg("g |/= sentence iff H |= OR psi'_i"), three("three conditions match the scattered-set oracle"),
      unfold("unfolded FO sentence agrees (n <= 5)");
  const auto alphas = alpha_fixtures();
  for_each_atlas_graph(7, [&](const ColoredGraph& g0) {
    auto g = round_robin(g0, 2, 1);
    for (std::size_t r : {0, 1})
      for (std::size_t s : {2, 3})
        for (std::size_t a = 0; a < alphas.size(); ++a) {
          BasicLocalSentence b{s, r, alphas[a], "x"};
          const bool sat = eval_basic_local(g, b);
          auto d = decorate_alpha(g, b);
          auto why = [&] {
            return "r=" + std::to_string(r) + " s=" + std::to_string(s) + " alpha#" + std::to_string(a) + " " + describe(g);
          };
          neg.expect(any_psi_holds(d) == !sat, why);
          three.expect(three_conditions(d.decoration, b) == !sat, why);
          if (g.order() <= 5) unfold.expect(model_check(g, unfold_basic_local(b)) == sat, why);
        }
  });
  rep.checks.push_back(neg.done());
  rep.checks.push_back(three.done());
  rep.checks.push_back(unfold.done());
  rep.checks.push_back(time_limit("sweep runtime", clock.seconds(), kGaifmanSweepSeconds));
  return rep;
}

// ------------------------------------------------------------------ 6

inline std::vector<std::string> sigma21_fixtures() {
  return {
      "exists x. forall y. (x = y | E(x,y))",
      "exists x. forall y. (~E(x,y) | P1(y))",
      "exists x. forall y. (P1(x) & (x = y | ~E(x,y) | ~P1(y)))",
      "exists x. exists z. forall y. (~x = z & (x = y | z = y | E(x,y) | E(z,y)))",
      "exists x. exists z. forall y. (E(x,z) & ~(E(x,y) & E(z,y)))",
      "exists x. exists z. forall y. (~x = z & ~E(x,z) & (~E(x,y) | ~E(z,y)))",
  };
}

inline SuiteReport gaifman_merges(const SuiteOptions&) {
  SuiteReport rep;
  Tally fixture("fixtures are Sigma(2,1)"), conj("conjunction_merge == f & h"), disj("disjunction_merge == f | h"),
      cls("merged sentences classify as SigmaT1(2)");
  std::vector<Formula> fs;
  for (const auto& text : sigma21_fixtures()) {
    auto f = parse_sentence(text);
    auto fr = classify(f);
    fixture.expect(in_sigma_t1(fr, 2) && fr.t == 2, [&] { return text + " is " + fr.to_string(); });
    fs.push_back(f);
  }
  std::vector<ColoredGraph> graphs;
  for (std::size_t n = 2; n <= 6; ++n)
    for (const auto& g : atlas(n)) graphs.push_back(round_robin(g, 2, 1));
  std::vector<std::vector<char>> truth(fs.size());
  for (std::size_t i = 0; i < fs.size(); ++i)
    for (const auto& g : graphs) truth[i].push_back(model_check(g, fs[i]));
  for (std::size_t i = 0; i < fs.size(); ++i)
    for (std::size_t j = 0; j < fs.size(); ++j) {
      auto mc = conjunction_merge(fs[i], fs[j]);
      auto md = disjunction_merge(fs[i], fs[j]);
      for (const auto& m : {mc, md}) {
        auto fr = classify(m);
        cls.expect(fr.side == Fragment::Side::Sigma && fr.t == 2 && fr.sigma_t1, [&] { return to_string(m) + " is " + fr.to_string(); });
      }
      for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
        const bool a = truth[i][gi], b = truth[j][gi];
        auto why = [&] { return "#" + std::to_string(i + 1) + ",#" + std::to_string(j + 1) + " on " + describe(graphs[gi]); };
        conj.expect(model_check(graphs[gi], mc) == (a && b), why);
        disj.expect(model_check(graphs[gi], md) == (a || b), why);
      }
    }
  conj.note(std::to_string(graphs.size()) + " graphs x " + std::to_string(fs.size() * fs.size()) + " pairs");
  rep.checks.push_back(fixture.done());
  rep.checks.push_back(conj.done());
  rep.checks.push_back(disj.done());
  rep.checks.push_back(cls.done());
  return rep;
}

// ------------------------------------------------------------------ 7

inline SuiteReport indistinguishability(const SuiteOptions&) {
  SuiteReport rep;
  const std::size_t n = 30;
  {
    Tally balls("MIS path family: middle-third balls equal for r < n/3 - 1"), verdicts("MIS path family: verdicts differ");
    auto yes = mis_path_family(n, true), no = mis_path_family(n, false);
    for (std::size_t r = 0; r + 1 < n / 3; ++r)
      for (NodeId v = n / 3 + 1; v <= 2 * n / 3; ++v)
        balls.expect(balls_identical(yes, no, v, r), [&] { return "v=" + std::to_string(v) + " r=" + std::to_string(r); });
    const bool a = oracle_solve(Problem::MulticoloredIndependentSet, {yes, 3});
    const bool b = oracle_solve(Problem::MulticoloredIndependentSet, {no, 3});
    verdicts.expect(a && !b, [&] { return "positive " + std::to_string(a) + " negative " + std::to_string(b); });
    rep.checks.push_back(balls.done());
    rep.checks.push_back(verdicts.done());
  }
  {
    Tally balls("degree family: balls at v15, v16 equal for r < n/2 - 3"), verdicts("degree family: verdicts differ (d=3)");
    const std::size_t d = 3;
    auto g0 = degree_family(n, 0);
    for (int variant = 1; variant <= 3; ++variant) {
      auto gv = degree_family(n, variant);
      for (std::size_t r = 0; r + 3 < n / 2; ++r)
        for (NodeId v : {n / 2, n / 2 + 1})
          balls.expect(balls_identical(g0, gv, v, r), [&] {
            return "variant " + std::to_string(variant) + " v=" + std::to_string(v) + " r=" + std::to_string(r);
          });
      ProblemInstance pos{gv, 0};
      pos.d = d;
      verdicts.expect(oracle_solve(Problem::DegreeGreaterThan, pos), [&] { return "variant " + std::to_string(variant) + " negative"; });
    }
    ProblemInstance neg{g0, 0};
    neg.d = d;
    verdicts.expect(!oracle_solve(Problem::DegreeGreaterThan, neg), "variant 0 positive");
    rep.checks.push_back(balls.done());
    rep.checks.push_back(verdicts.done());
  }
  return rep;
}

// ------------------------------------------------------------------ 8

inline SuiteReport sparsity_suite(const SuiteOptions& opt) {
  SuiteReport rep;
  Tally td("treedepth_exact(P4)=3, treedepth_exact(K5)=5");
  td.expect(treedepth_exact(path_graph(4)) == 3, "td(P4) != 3");
  td.expect(treedepth_exact(complete_graph(5)) == 5, "td(K5) != 5");
  rep.checks.push_back(td.done());

  const std::size_t p = 3;
  Tally forest("elimination_forest_for valid with height <= |I|"), agree("pure and distributed forests agree"),
      path("BFS frontier within 2^i - 2 hops"), cover("colorings verified centered");
  std::mt19937_64 rng(opt.seed);
  auto check = [&](const ColoredGraph& g, const CenteredColoring& c, bool distributed) {
    for (const auto& I : color_sets(c.m, p)) {
      ForestTrace trace;
      auto f = elimination_forest_for(g, c, I, &trace);
      auto sub = g.induced(color_class_vertices(g, c, I));
      forest.expect(validate_forest(sub, f) && f.height() <= I.size(),
                    [&] { return "height " + std::to_string(f.height()) + " for |I|=" + std::to_string(I.size()) + " " + describe(g); });
      path.expect(trace.within_path_bound(), [&] { return describe(g); });
      if (distributed) agree.expect(elimination_forest_distributed(g, c, I).forest == f, [&] { return describe(g); });
    }
  };
  for_each_atlas_graph(6, [&](const ColoredGraph& g) {
    std::vector<CenteredColoring> cols{distinct_coloring(g, p), centered_coloring(g, p)};
    for (int t = 0; t < 6; ++t) {
      CenteredColoring c;
      c.p = p;
      c.m = 3 + t % 2;
      for (auto v : g.ids()) c.colors[v] = 1 + rng() % c.m;
      if (verify_centered(g, c, p)) cols.push_back(c);
    }
    for (std::size_t i = 0; i < cols.size(); ++i) {
      const bool ok = verify_centered(g, cols[i], p);
      if (i < 2) cover.expect(ok, [&] { return describe(g); });
      if (ok) check(g, cols[i], g.order() <= 5);
    }
  });
  for (std::size_t n = 7; n <= 9; ++n)
    for (const auto& g : atlas(n)) {
      if (n == 9 && rng() % 16 != 0) continue;
      check(g, distinct_coloring(g, p), false);
    }
  forest.note("atlas n <= 6 with distinct, centered and random colorings; n = 7, 8 and a 1/16 sample of n = 9 distinct");
  rep.checks.push_back(cover.done());
  rep.checks.push_back(forest.done());
  rep.checks.push_back(path.done());
  rep.checks.push_back(agree.done());
  return rep;
}

// ------------------------------------------------------------------ 9

// Sends one message of B + 1 bits to every neighbor in round 0.
inline NodeAlgorithm oversized_sender() {
  struct Program : NodeProgram {
    void step(NodeContext& ctx, const Inbox&) override {
      if (ctx.round() == 0) {
        Message m;
        const std::size_t bits = ctx.view().bandwidth + 1;
        for (std::size_t i = 0; i < bits; ++i) m.put_flag(true);
        ctx.send_all_neighbors(m);
        return;
      }
      ctx.decide(false);
    }
  };
  NodeAlgorithm alg;
  alg.name = "oversized-sender";
  alg.make = [] { return std::make_unique<Program>(); };
  return alg;
}

inline SuiteReport bandwidth_suite(const SuiteOptions& opt) {
  SuiteReport rep;
  Tally over("oversized CONGEST message raises BandwidthViolation");
  for (std::size_t n : {4, 60}) {
    bool raised = false;
    try {
      run(Model{ModelKind::Congest}, path_graph(n), oversized_sender(), 0);
    } catch (const BandwidthViolation&) {
      raised = true;
    }
    over.expect(raised, [&] { return "no violation on P" + std::to_string(n); });
  }
  rep.checks.push_back(over.done());

  Tally fit("shipped CONGEST/CLIQUE algorithms stay within B (n <= 60)");
  std::mt19937_64 rng(opt.seed);
  std::vector<ColoredGraph> graphs{path_graph(60), cycle_graph(60), star_graph(59), random_connected(60, 0.05, rng),
                                   random_connected(40, 0.2, rng)};
  std::size_t widest = 0, limit = 0;
  auto record = [&](const std::string& what, const ColoredGraph& g, const std::function<RunResult()>& go) {
    try {
      auto res = go();
      widest = std::max(widest, res.max_message_bits);
      limit = res.bandwidth;
      fit.expect(res.bandwidth > 0 && res.max_message_bits <= res.bandwidth, [&] {
        return what + " on n=" + std::to_string(g.order()) + ": " + std::to_string(res.max_message_bits) + " > " + std::to_string(res.bandwidth);
      });
    } catch (const std::exception& ex) {
      fit.expect(false, [&] { return what + " on n=" + std::to_string(g.order()) + ": " + ex.what(); });
    }
  };
  ProblemInstance yes{path_graph(2), 1}, no{path_graph(3), 0};
  auto ds_kernel = clique_kernel_wrapper(Problem::DominatingSet, clique_dominating_set(), yes, no);
  for (const auto& g : graphs) {
    for (auto kind : {ModelKind::Congest, ModelKind::Clique})
      record("flood_min_id/" + model_name(kind), g, [&] { return run(Model{kind}, g, flood_min_id(6), 0); });
    record("degree_greater_than", g, [&] { return run(Model{ModelKind::Clique}, g, degree_greater_than_algorithm(3), 0); });
    record("clique_dominating_set", g, [&] { return run(Model{ModelKind::Clique}, g, clique_dominating_set(), 2); });
    record("clique_kernel_wrapper", g, [&] { return run_kernel(ds_kernel, {g, 2}).run; });
    auto c = centered_coloring(g, 3);
    std::set<std::size_t> I;
    for (std::size_t i = 1; i <= std::min<std::size_t>(3, c.m); ++i) I.insert(i);
    record("elimination_forest_distributed", g, [&] { return elimination_forest_distributed(g, c, I).run; });
    record("simulate_through/congest", g, [&] {
      auto e = identity_reduction(Problem::IndependentSet).apply({g, 1});
      return simulate_through(e, flood_min_id(3), Model{ModelKind::Congest});
    });
  }
  fit.note("widest message " + std::to_string(widest) + " bits, B = " + std::to_string(limit) + " at n = 40..60");
  rep.checks.push_back(fit.done());
  return rep;
}

// ------------------------------------------------------------------ 10

inline SuiteReport kernel_suite(const SuiteOptions&) {
  SuiteReport rep;
  ProblemInstance yes{path_graph(2), 1}, no{path_graph(3), 0};
  auto ds = clique_kernel_wrapper(Problem::DominatingSet, clique_dominating_set(), yes, no);

  Tally dsv("DominatingSet kernel verified on the n <= 7 atlas, k <= 2");
  for_each_atlas_graph(7, [&](const ColoredGraph& g) {
    for (std::size_t k = 0; k <= 2; ++k) {
      ProblemInstance in{g, k};
      dsv.expect(verify_kernel(Problem::DominatingSet, in, run_kernel(ds, in)), [&] { return "k=" + std::to_string(k) + " " + describe(g); });
    }
  });
  rep.checks.push_back(dsv.done());

  Tally deg("DegreeGreaterThan kernels verified on the n <= 7 atlas, d in 1..3");
  for (std::size_t d = 1; d <= 3; ++d) {
    ProblemInstance y{star_graph(d + 1), 0}, n0{path_graph(1), 0};
    y.d = n0.d = d;
    auto kd = clique_kernel_wrapper(Problem::DegreeGreaterThan, degree_greater_than_algorithm(d), y, n0);
    for_each_atlas_graph(7, [&](const ColoredGraph& g) {
      ProblemInstance in{g, 0};
      in.d = d;
      deg.expect(verify_kernel(Problem::DegreeGreaterThan, in, run_kernel(kd, in)), [&] { return "d=" + std::to_string(d) + " " + describe(g); });
    });
  }
  rep.checks.push_back(deg.done());

  Tally size("kernel size constant across n in {10,20,40}");
  std::set<std::size_t> sizes;
  for (std::size_t n : {10, 20, 40})
    for (const auto& g : {path_graph(n), cycle_graph(n)})
      for (std::size_t k = 1; k <= 2; ++k) {
        ProblemInstance in{g, k};
        auto out = run_kernel(ds, in);
        sizes.insert(out.declared_size_bound);
        size.expect(verify_kernel(Problem::DominatingSet, in, out), [&] { return "n=" + std::to_string(n) + " k=" + std::to_string(k); });
      }
  size.expect(sizes.size() == 1, [&] { return std::to_string(sizes.size()) + " distinct declared sizes"; });
  size.note("declared size " + std::to_string(*sizes.begin()));
  rep.checks.push_back(size.done());
  return rep;
}

}  // namespace suite

struct SuiteEntry {
  std::string name;
  int criterion = 0;
  std::string title;
  std::function<SuiteReport(const SuiteOptions&)> run;
};

inline const std::vector<SuiteEntry>& suite_registry() {
  static const std::vector<SuiteEntry> entries{
      {"local-fpt-rounds", 1, "LOCAL-FPT parameter-only rounds", suite::local_fpt_rounds},
      {"reductions-soundness", 2, "Reduction soundness sweep", suite::reductions_soundness},
      {"simulation-bound", 3, "Simulation bound", suite::simulation_bound_suite},
      {"circuit-construction", 4, "Circuit construction", suite::circuit_construction},
      {"gaifman-negation", 5, "Gaifman negation biconditional", suite::gaifman_negation},
      {"gaifman-merges", 6, "Disjunction/conjunction merges", suite::gaifman_merges},
      {"indistinguishability", 7, "Indistinguishability fixtures", suite::indistinguishability},
      {"sparsity", 8, "Sparsity", suite::sparsity_suite},
      {"bandwidth", 9, "Bandwidth enforcement", suite::bandwidth_suite},
      {"kernel", 10, "Kernel wrapper", suite::kernel_suite},
  };
  return entries;
}

inline const SuiteEntry& find_suite(std::string_view name) {
  for (const auto& e : suite_registry())
    if (e.name == name) return e;
  throw UnknownSuite(std::string(name));
}

inline SuiteReport run_suite(std::string_view name, const SuiteOptions& opt = {}) {
  const auto& entry = find_suite(name);
  suite::Stopwatch clock;
  auto rep = entry.run(opt);
  rep.suite = entry.name;
  rep.title = entry.title;
  rep.seconds = clock.seconds();
  return rep;
}

}  // namespace dpc
