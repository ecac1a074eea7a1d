// dpc: command-line front end. Exit status 0 = success or positive verdict,
// 1 = negative verdict or failed sweep, 2 = error.
#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "dpc/report.hpp"

namespace {

using namespace dpc;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void spill(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

ColoredGraph load_graph(const std::string& path) { return parse_graph(slurp(path)); }

// "id color" per line, colors 1..m.
CenteredColoring load_colors(const std::string& path, std::size_t p) {
  CenteredColoring c;
  c.p = p;
  std::istringstream in(slurp(path));
  std::size_t lineno = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    NodeId id = 0;
    std::size_t col = 0;
    if (!(ls >> id)) continue;
    if (!(ls >> col) || col == 0) throw ParseError(lineno, "expected 'id color' with color >= 1");
    c.colors[id] = col;
    c.m = std::max(c.m, col);
  }
  return c;
}

std::string format_colors(const CenteredColoring& c) {
  std::string out;
  for (auto [id, col] : c.colors) out += std::to_string(id) + " " + std::to_string(col) + "\n";
  return out;
}

std::set<std::size_t> parse_color_set(const std::string& text) {
  std::set<std::size_t> out;
  std::istringstream in(text);
  for (std::string tok; std::getline(in, tok, ',');) {
    if (tok.empty()) continue;
    std::size_t x = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || x == 0) throw Error("bad color '" + tok + "' in --I");
    out.insert(x);
  }
  return out;
}

// Basic local sentence file: `s N`, `r N`, `var NAME`, `alpha FORMULA`; the
// merge operations read Sigma(2,1) sentences from `f` and `h` lines.
struct BlsFile {
  BasicLocalSentence sentence;
  std::optional<Formula> f, h;
};

BlsFile load_bls(const std::string& path) {
  BlsFile out;
  bool have_alpha = false;
  std::istringstream in(slurp(path));
  std::size_t lineno = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    std::string rest;
    std::getline(ls, rest);
    auto number = [&] {
      std::size_t x = 0;
      std::istringstream v(rest);
      if (!(v >> x)) throw ParseError(lineno, key + " needs a number");
      return x;
    };
    if (key == "s") {
      out.sentence.s = number();
    } else if (key == "r") {
      out.sentence.r = number();
    } else if (key == "var") {
      std::istringstream v(rest);
      v >> out.sentence.var;
    } else if (key == "alpha") {
      out.sentence.alpha = parse_formula(rest);
      have_alpha = true;
    } else if (key == "f") {
      out.f = parse_sentence(rest);
    } else if (key == "h") {
      out.h = parse_sentence(rest);
    } else {
      throw ParseError(lineno, "unknown key '" + key + "'");
    }
  }
  if (!have_alpha && !(out.f && out.h)) throw ParseError(lineno, "no alpha and no f/h pair");
  return out;
}

// Algorithms addressable by name from `run` and `simulate-through`.
NodeAlgorithm named_algorithm(const std::string& name, std::size_t k, const ColoredGraph& g) {
  if (name == "is") return local_fpt_independent_set();
  if (name == "ds") return local_fpt_dominating_set();
  if (name == "flood-min-id") return flood_min_id(k);
  if (name == "degree-gt") return degree_greater_than_algorithm(k);
  if (name == "clique-ds") return clique_dominating_set();
  if (name.starts_with("gather:")) return gather_and_decide(parse_problem(name.substr(7)), diameter(g), IncompletePolicy::Reject);
  throw Error("unknown algorithm '" + name + "' (is, ds, flood-min-id, degree-gt, clique-ds, gather:PROBLEM)");
}

struct Common {
  bool json = false;
  std::uint64_t seed = 0;
};

// Source-side inputs shared by solve, reduce, simulate-through and kernel.
struct InstanceArgs {
  std::string graph, pattern, formula;
  std::size_t k = 0, l = 0, d = 0;

  void add(CLI::App* cmd, bool graph_required = true) {
    auto* o = cmd->add_option("--graph", graph, "graph file");
    if (graph_required) o->required()->check(CLI::ExistingFile);
    cmd->add_option("--k", k, "parameter k");
    cmd->add_option("--l", l, "clique size (CliqueDomination)");
    cmd->add_option("--pattern", pattern, "pattern graph file (InducedSubgraphIsomorphism)")->check(CLI::ExistingFile);
    cmd->add_option("--formula", formula, "sentence file (MC-Sigma1)")->check(CLI::ExistingFile);
    cmd->add_option("--d", d, "degree threshold (DegreeGreaterThan)");
  }

  ProblemInstance build() const {
    ProblemInstance in;
    in.graph = load_graph(graph);
    in.k = k;
    in.l = l;
    in.d = d;
    if (!pattern.empty()) in.pattern = load_graph(pattern);
    if (!formula.empty()) in.formula = parse_sentence(slurp(formula));
    return in;
  }
};

class Output {
 public:
  Output(const Common& c, std::vector<std::string> argv) : common_(c) {
    report_.command = std::move(argv);
    report_.seed = c.seed;
  }

  void record(Json j, const std::string& text) {
    if (!common_.json) std::cout << text;
    report_.records.push_back(std::move(j));
  }
  int finish(bool ok) {
    report_.pass = ok;
    report_.seconds = clock_.seconds();
    if (common_.json) std::cout << to_ndjson(report_);
    return ok ? 0 : 1;
  }

 private:
  const Common& common_;
  Report report_;
  suite::Stopwatch clock_;
};

std::string yes_no(bool b) { return b ? "true" : "false"; }

std::string run_text(const RunResult& r) {
  std::ostringstream s;
  s << "verdict " << yes_no(r.verdict) << "\nrounds " << r.rounds_used << "\nmax_message_bits " << r.max_message_bits
    << "\nbandwidth " << r.bandwidth << "\nmessages " << r.total_messages << "\n";
  return s.str();
}

std::string bounds_text(const ReductionBounds& b) {
  std::ostringstream s;
  s << "nodes " << b.nodes << " host_nodes " << b.host_nodes << " size_exponent " << b.size_exponent << " radius " << b.radius
    << " path_load " << b.path_load << " rounds " << b.rounds << " produced_k " << b.produced_k << "\n";
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed parameterized complexity toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_flag("--json", common.json, "emit NDJSON report records")->configurable(false);
  app.add_option("--seed", common.seed, "seed for randomized instance generation");
  std::vector<std::string> command(argv, argv + argc);

  // run
  auto* run_cmd = app.add_subcommand("run", "run a named node algorithm");
  std::string model = "local", alg, graph;
  std::size_t k = 0, round_cap = 100000;
  bool reveal_n = false;
  run_cmd->add_option("--model", model, "local, congest or clique");
  run_cmd->add_option("--graph", graph, "graph file")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--alg", alg, "algorithm name")->required();
  run_cmd->add_option("--k", k, "parameter");
  run_cmd->add_option("--round-cap", round_cap, "abort after this many rounds");
  run_cmd->add_flag("--reveal-n", reveal_n, "tell nodes the network size");

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "decide a problem instance");
  std::string problem;
  InstanceArgs inst;
  bool oracle = false, distributed = false;
  solve_cmd->add_option("--problem", problem, "problem name")->required();
  inst.add(solve_cmd);
  solve_cmd->add_flag("--oracle", oracle, "centralized exact solver (default)");
  solve_cmd->add_flag("--distributed", distributed, "run the distributed algorithm")->excludes("--oracle");
  solve_cmd->add_option("--model", model, "model for --distributed");

  // mc
  auto* mc_cmd = app.add_subcommand("mc", "first-order model checking");
  std::string formula_file, formula_num;
  mc_cmd->add_option("--graph", graph, "graph file")->required()->check(CLI::ExistingFile);
  auto* ff = mc_cmd->add_option("--formula", formula_file, "sentence file")->check(CLI::ExistingFile);
  mc_cmd->add_option("--formula-num", formula_num, "sentence by its numbering")->excludes(ff);

  // reduce, simulate-through
  auto* reduce_cmd = app.add_subcommand("reduce", "apply a distributed reduction");
  std::string from, to, emit;
  bool json_bounds = false;
  reduce_cmd->add_option("--from", from, "source problem")->required();
  reduce_cmd->add_option("--to", to, "target problem")->required();
  inst.add(reduce_cmd);
  reduce_cmd->add_option("--emit-materialized", emit, "write the produced graph to FILE");
  reduce_cmd->add_flag("--json-bounds", json_bounds, "print measured and declared bounds as JSON");

  auto* sim_cmd = app.add_subcommand("simulate-through", "run a target algorithm through a reduction");
  sim_cmd->add_option("--from", from, "source problem")->required();
  sim_cmd->add_option("--to", to, "target problem")->required();
  inst.add(sim_cmd);
  sim_cmd->add_option("--alg", alg, "target algorithm (default gather:TARGET)");
  sim_cmd->add_option("--model", model, "host model");
  sim_cmd->add_option("--alg-k", k, "parameter handed to named algorithms that take one");

  // circuit
  auto* circuit_cmd = app.add_subcommand("circuit", "decision circuits");
  std::string op, input_bits;
  circuit_cmd->add_option("--graph", graph, "circuit file, or a colored graph for from-mis")->required()->check(CLI::ExistingFile);
  circuit_cmd->add_option("--op", op, "eval, weft, wsat or from-mis")->required()->check(CLI::IsMember({"eval", "weft", "wsat", "from-mis"}));
  circuit_cmd->add_option("--input", input_bits, "input bits for eval, x1 first");
  circuit_cmd->add_option("--k", k, "weight (wsat) or color count (from-mis)");
  circuit_cmd->add_option("--out", emit, "write the from-mis circuit to FILE");

  // gaifman
  auto* gaifman_cmd = app.add_subcommand("gaifman", "basic local sentences and Sigma(2,1) merges");
  std::string bls;
  gaifman_cmd->add_option("--graph", graph, "graph file")->required()->check(CLI::ExistingFile);
  gaifman_cmd->add_option("--bls", bls, "sentence file")->required()->check(CLI::ExistingFile);
  gaifman_cmd->add_option("--op", op, "eval, negate, merge-and or merge-or")
      ->required()
      ->check(CLI::IsMember({"eval", "negate", "merge-and", "merge-or"}));
  gaifman_cmd->add_option("--emit", emit, "negate: write the decorated graph to FILE");

  // kernel
  auto* kernel_cmd = app.add_subcommand("kernel", "CONGESTED-CLIQUE kernelization");
  bool fully_poly = false;
  kernel_cmd->add_option("--problem", problem, "DominatingSet or DegreeGreaterThan")->required();
  inst.add(kernel_cmd);
  kernel_cmd->add_flag("--fully-poly", fully_poly, "enforce the polynomial local step budget");
  kernel_cmd->add_option("--emit", emit, "write the produced instance to FILE");

  // sparsity
  auto* sparsity_cmd = app.add_subcommand("sparsity", "centered colorings and elimination forests");
  std::string colors_file, color_set;
  std::size_t p = 3;
  sparsity_cmd->add_option("--graph", graph, "graph file")->required()->check(CLI::ExistingFile);
  sparsity_cmd->add_option("--op", op, "color, verify, forest or td")->required()->check(CLI::IsMember({"color", "verify", "forest", "td"}));
  sparsity_cmd->add_option("--p", p, "p of the (p+1)-centered coloring");
  sparsity_cmd->add_option("--colors", colors_file, "coloring file, 'id color' per line")->check(CLI::ExistingFile);
  sparsity_cmd->add_option("--I", color_set, "color set, e.g. 1,3,5");
  sparsity_cmd->add_flag("--distributed", distributed, "forest: build it with the CONGESTED-CLIQUE protocol");

  // atlas
  auto* atlas_cmd = app.add_subcommand("atlas", "connected graphs up to isomorphism, graph6");
  std::size_t max_n = 4;
  atlas_cmd->add_option("--max-n", max_n, "largest order (<= 9)");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "run named acceptance suites");
  std::vector<std::string> suites;
  bool all = false, mutate = false;
  sweep_cmd->add_option("suite", suites, "suite names");
  sweep_cmd->add_flag("--all", all, "every registered suite");
  sweep_cmd->add_flag("--mutate-clique-dom", mutate, "drop one red-blue edge from clique_dom_to_rbds (mutation control)");
  sweep_cmd->add_flag("--list", oracle, "list registered suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  Output out(common, command);
  try {
    if (*run_cmd) {
      auto g = load_graph(graph);
      Model m{parse_model(model)};
      m.reveal_n = reveal_n;
      RunOptions opts;
      opts.round_cap = round_cap;
      auto res = Engine(m, g, k, opts).run(named_algorithm(alg, k, g));
      out.record(to_json(res), run_text(res));
      return out.finish(res.verdict);
    }

    if (*solve_cmd) {
      const auto pr = parse_problem(problem);
      auto in = inst.build();
      bool verdict = false;
      if (!distributed) {
        verdict = oracle_solve(pr, in);
        out.record({{"problem", problem_name(pr)}, {"method", "oracle"}, {"verdict", verdict}}, "verdict " + yes_no(verdict) + "\n");
      } else {
        NodeAlgorithm a;
        std::size_t kk = in.k;
        switch (pr) {
          case Problem::IndependentSet: a = local_fpt_independent_set(); break;
          case Problem::DominatingSet:
            a = parse_model(model) == ModelKind::Clique ? clique_dominating_set() : local_fpt_dominating_set();
            break;
          case Problem::DegreeGreaterThan: a = degree_greater_than_algorithm(in.d); break;
          default: a = gather_and_decide(pr, diameter(in.graph), IncompletePolicy::Reject, in);
        }
        auto res = run(Model{parse_model(model)}, in.graph, a, kk);
        verdict = res.verdict;
        auto j = to_json(res);
        j["problem"] = problem_name(pr);
        j["method"] = a.name;
        out.record(j, run_text(res));
      }
      return out.finish(verdict);
    }

    if (*mc_cmd) {
      auto g = load_graph(graph);
      Formula f;
      if (!formula_file.empty()) {
        f = parse_sentence(slurp(formula_file));
      } else if (!formula_num.empty()) {
        auto dec = decode(BigNat(formula_num));
        if (!dec) throw Error("number " + formula_num + " does not encode a sentence");
        f = *dec;
        require_sentence(f);
      } else {
        throw Error("mc needs --formula or --formula-num");
      }
      const bool v = model_check(g, f);
      auto fr = classify(f);
      out.record({{"formula", to_string(f)}, {"fragment", fr.to_string()}, {"size", formula_size(f)}, {"verdict", v}},
                 to_string(f) + "\nfragment " + fr.to_string() + "\nverdict " + yes_no(v) + "\n");
      return out.finish(v);
    }

    if (*reduce_cmd || *sim_cmd) {
      auto red = reduction_between(parse_problem(from), parse_problem(to));
      auto in = inst.build();
      auto e = red.apply(in);
      auto b = measure(e);
      auto v = violations(b, e.declared, e.model);
      auto target = target_instance(e);
      Json j = {{"reduction", e.reduction}, {"source", problem_name(e.source)}, {"target", problem_name(e.target)},
                {"k_prime", e.k_prime},    {"bounds", to_json(b)},             {"declared", to_json(e.declared)},
                {"violations", v}};
      std::string text = e.reduction + "\n" + bounds_text(b);
      for (const auto& name : v) text += "violation " + name + "\n";
      bool verdict = false;
      if (*reduce_cmd) {
        verdict = oracle_solve(e.target, target);
        j["verdict"] = verdict;
        text += "produced " + std::to_string(target.graph.order()) + " nodes, k' = " + std::to_string(e.k_prime) +
                "\nverdict " + yes_no(verdict) + "\n";
        if (!emit.empty()) spill(emit, serialize(target.graph));
        if (json_bounds && !common.json) text = Json{{"bounds", to_json(b)}, {"declared", to_json(e.declared)}}.dump(2) + "\n" + text;
      } else {
        Model m{parse_model(model)};
        auto a = alg.empty() ? gather_and_decide(e.target, diameter(target.graph), IncompletePolicy::Reject)
                             : named_algorithm(alg, k, target.graph);
        auto res = simulate_through(e, a, m);
        verdict = res.verdict;
        j["run"] = to_json(res);
        if (auto f = a.round_bound(e.k_prime)) {
          j["simulation_bound"] = simulation_bound(b, *f);
          text += "simulation bound " + std::to_string(simulation_bound(b, *f)) + "\n";
        }
        text += run_text(res);
      }
      out.record(j, text);
      return out.finish(verdict);
    }

    if (*circuit_cmd) {
      auto g = load_graph(graph);
      if (op == "from-mis") {
        auto mc = mis_to_circuit(g, k);
        auto wd = weft_and_depth(mc.circuit);
        auto b = measure(mc.embedding);
        auto cg = circuit_to_graph(mc.circuit);
        if (!emit.empty()) spill(emit, serialize(cg));
        out.record({{"gates", mc.circuit.size()}, {"conflict_pairs", mc.conflict_pairs}, {"weft", wd.weft}, {"depth", wd.depth},
                    {"congestion", b.path_load}},
                   "gates " + std::to_string(mc.circuit.size()) + "\nconflict_pairs " + std::to_string(mc.conflict_pairs) +
                       "\nweft " + std::to_string(wd.weft) + "\ndepth " + std::to_string(wd.depth) + "\ncongestion " +
                       std::to_string(b.path_load) + "\n");
        return out.finish(true);
      }
      auto c = graph_to_circuit(g);
      if (op == "weft") {
        auto wd = weft_and_depth(c);
        out.record({{"weft", wd.weft}, {"depth", wd.depth}},
                   "weft " + std::to_string(wd.weft) + "\ndepth " + std::to_string(wd.depth) + "\n");
        return out.finish(true);
      }
      bool v = false;
      if (op == "eval") {
        std::vector<bool> x;
        for (char ch : input_bits) {
          if (ch != '0' && ch != '1') throw Error("--input takes a 0/1 string");
          x.push_back(ch == '1');
        }
        v = evaluate(c, x);
      } else {
        v = weighted_sat(c, k);
      }
      out.record({{"op", op}, {"verdict", v}}, "verdict " + yes_no(v) + "\n");
      return out.finish(v);
    }

    if (*gaifman_cmd) {
      auto g = load_graph(graph);
      auto file = load_bls(bls);
      if (op == "eval" || op == "negate") {
        const auto& b = file.sentence;
        if (!b.alpha) throw Error("sentence file has no alpha line");
        if (op == "eval") {
          const bool v = eval_basic_local(g, b);
          out.record({{"op", op}, {"s", b.s}, {"r", b.r}, {"alpha", to_string(b.alpha)}, {"verdict", v}}, "verdict " + yes_no(v) + "\n");
          return out.finish(v);
        }
        auto d = decorate_alpha(g, b);
        const bool v = any_psi_holds(d);
        if (!emit.empty()) spill(emit, serialize(d.h));
        Json psi = Json::array();
        for (const auto& f : d.psi) psi.push_back(to_string(f));
        std::string text = "components " + std::to_string(d.decoration.components.size()) + "\n";
        for (std::size_t i = 0; i < d.psi.size(); ++i) text += "psi'_" + std::to_string(i) + " " + to_string(d.psi[i]) + "\n";
        text += "negation holds " + yes_no(v) + "\n";
        out.record({{"op", op}, {"components", d.decoration.components.size()}, {"k_values", d.decoration.k_values},
                    {"psi", psi}, {"verdict", v}},
                   text);
        return out.finish(v);
      }
      if (!file.f || !file.h) throw Error("merge operations need f and h lines");
      auto merged = op == "merge-and" ? conjunction_merge(*file.f, *file.h) : disjunction_merge(*file.f, *file.h);
      const bool v = model_check(g, merged);
      auto fr = classify(merged);
      out.record({{"op", op}, {"formula", to_string(merged)}, {"fragment", fr.to_string()}, {"verdict", v}},
                 to_string(merged) + "\nfragment " + fr.to_string() + "\nverdict " + yes_no(v) + "\n");
      return out.finish(v);
    }

    if (*kernel_cmd) {
      const auto pr = parse_problem(problem);
      auto in = inst.build();
      KernelAlgorithm kern;
      if (pr == Problem::DominatingSet) {
        kern = clique_kernel_wrapper(pr, clique_dominating_set(), {path_graph(2), 1}, {path_graph(3), 0});
      } else if (pr == Problem::DegreeGreaterThan) {
        ProblemInstance y{star_graph(in.d + 1), 0}, n{path_graph(1), 0};
        y.d = n.d = in.d;
        kern = clique_kernel_wrapper(pr, degree_greater_than_algorithm(in.d), y, n);
      } else {
        throw UnsupportedProblem("no kernel for " + problem_name(pr));
      }
      RunOptions opts;
      opts.fully_polynomial = fully_poly;
      auto res = run_kernel(kern, in, opts);
      auto produced = target_instance(res.embedded);
      const bool verdict = oracle_solve(pr, produced);
      if (!emit.empty()) spill(emit, serialize(produced.graph));
      out.record({{"problem", problem_name(pr)}, {"rounds", res.rounds_used}, {"size_bound", res.declared_size_bound},
                  {"produced_nodes", produced.graph.order()}, {"produced_k", produced.k}, {"verdict", verdict}},
                 "rounds " + std::to_string(res.rounds_used) + "\nproduced " + std::to_string(produced.graph.order()) +
                     " nodes, k' = " + std::to_string(produced.k) + "\nverdict " + yes_no(verdict) + "\n");
      return out.finish(verdict);
    }

    if (*sparsity_cmd) {
      auto g = load_graph(graph);
      if (op == "td") {
        const auto td = treedepth_exact(g);
        out.record({{"op", op}, {"treedepth", td}}, "treedepth " + std::to_string(td) + "\n");
        return out.finish(true);
      }
      auto c = colors_file.empty() ? centered_coloring(g, p) : load_colors(colors_file, p);
      if (op == "color") {
        out.record({{"op", op}, {"p", p}, {"colors", c.m}, {"coloring", c.colors}}, format_colors(c));
        return out.finish(true);
      }
      if (op == "verify") {
        auto bad = centered_violation(g, c, p, false);
        Json j = {{"op", op}, {"p", p}, {"verdict", !bad}};
        std::string text = "verdict " + yes_no(!bad) + "\n";
        if (bad) {
          j["witness"] = *bad;
          text += "witness";
          for (auto v : *bad) text += " " + std::to_string(v);
          text += "\n";
        }
        out.record(j, text);
        return out.finish(!bad);
      }
      auto I = color_set.empty() ? std::set<std::size_t>{} : parse_color_set(color_set);
      if (color_set.empty())
        for (std::size_t i = 1; i <= c.m; ++i) I.insert(i);
      auto f = distributed ? elimination_forest_distributed(g, c, I).forest : elimination_forest_for(g, c, I);
      std::string text = "height " + std::to_string(f.height()) + "\n";
      Json parent = Json::object();
      for (auto [v, par] : f.parent) {
        text += std::to_string(v) + " " + std::to_string(par) + "\n";
        parent[std::to_string(v)] = par;
      }
      out.record({{"op", op}, {"I", I}, {"height", f.height()}, {"parent", parent}}, text);
      return out.finish(true);
    }

    if (*atlas_cmd) {
      if (max_n == 0 || max_n > kAtlasCap) throw CapExceeded("atlas supports 1 <= max-n <= " + std::to_string(kAtlasCap));
      for (std::size_t n = 1; n <= max_n; ++n)
        for (const auto& s : atlas_small(n)) {
          auto g6 = to_graph6(s);
          out.record({{"n", n}, {"graph6", g6}}, g6 + "\n");
        }
      return out.finish(true);
    }

    if (*sweep_cmd) {
      if (oracle) {
        for (const auto& e : suite_registry())
          out.record({{"suite", e.name}, {"criterion", e.criterion}, {"title", e.title}},
                     e.name + "\t" + std::to_string(e.criterion) + "\t" + e.title + "\n");
        return out.finish(true);
      }
      if (all)
        for (const auto& e : suite_registry()) suites.push_back(e.name);
      if (suites.empty()) throw Error("sweep needs suite names or --all");
      for (const auto& name : suites) find_suite(name);
      SuiteOptions so;
      so.seed = common.seed;
      so.mutate_clique_dom = mutate;
      bool ok = true;
      for (const auto& name : suites) {
        auto rep = run_suite(name, so);
        ok = ok && rep.pass();
        for (auto& j : to_records(rep)) {
          std::string text = std::string(j["pass"].get<bool>() ? "  ok   " : "  FAIL ") + j["check"].get<std::string>() + " [" +
                             std::to_string(j["cases"].get<std::size_t>()) + " cases, " +
                             std::to_string(j["failures"].get<std::size_t>()) + " failed]";
          if (!j["detail"].get<std::string>().empty()) text += " " + j["detail"].get<std::string>();
          out.record(std::move(j), text + "\n");
        }
        char secs[32];
        std::snprintf(secs, sizeof secs, "%.2f", rep.seconds);
        out.record({{"suite", rep.suite}, {"title", rep.title}, {"pass", rep.pass()}, {"seconds", rep.seconds}},
                   std::string(rep.pass() ? "PASS " : "FAIL ") + rep.suite + " (" + secs + "s)\n");
      }
      return out.finish(ok);
    }
  } catch (const std::exception& e) {
    std::cerr << "dpc: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
