#pragma once
#include <numeric>
#include <set>

#include "graph.hpp"

namespace dpc {

enum class GateKind { Input, Neg, Or, And, BigOr, BigAnd };

inline bool is_large(GateKind k) { return k == GateKind::BigOr || k == GateKind::BigAnd; }

struct Gate {
  GateKind kind = GateKind::Input;
  std::vector<std::size_t> inputs;
};

// Boolean decision circuit. Gates 0..n-1 are the inputs x_1..x_n; every
// other gate only reads earlier gates, so index order is topological.
class Circuit {
 public:
  explicit Circuit(std::size_t n_inputs = 0) : n_inputs_(n_inputs), gates_(n_inputs) {}

  std::size_t add(GateKind kind, std::vector<std::size_t> inputs) {
    for (auto i : inputs)
      if (i >= gates_.size()) throw InvalidCircuit("gate reads a later or missing gate");
    check_arity(kind, inputs.size());
    gates_.push_back(Gate{kind, std::move(inputs)});
    return gates_.size() - 1;
  }

  std::size_t n_inputs() const { return n_inputs_; }
  std::size_t size() const { return gates_.size(); }
  const Gate& gate(std::size_t i) const { return gates_[i]; }
  const std::vector<Gate>& gates() const { return gates_; }

  std::vector<std::size_t> out_degrees() const {
    std::vector<std::size_t> out(gates_.size(), 0);
    for (const auto& g : gates_)
      for (auto i : g.inputs) ++out[i];
    return out;
  }

  // The unique gate with out-degree 0.
  std::size_t output() const {
    auto out = out_degrees();
    std::optional<std::size_t> found;
    for (std::size_t i = 0; i < out.size(); ++i)
      if (out[i] == 0) {
        if (found) throw InvalidCircuit("more than one gate with out-degree 0");
        found = i;
      }
    if (!found) throw InvalidCircuit("no output gate");
    return *found;
  }

  void validate() const {
    for (std::size_t i = 0; i < gates_.size(); ++i) {
      if ((i < n_inputs_) != (gates_[i].kind == GateKind::Input)) throw InvalidCircuit("input gates must come first");
      check_arity(gates_[i].kind, gates_[i].inputs.size());
    }
    output();
  }

  static void check_arity(GateKind kind, std::size_t in) {
    bool ok = false;
    switch (kind) {
      case GateKind::Input: ok = in == 0; break;
      case GateKind::Neg: ok = in == 1; break;
      case GateKind::Or:
      case GateKind::And: ok = in == 2; break;
      case GateKind::BigOr:
      case GateKind::BigAnd: ok = in >= 3; break;
    }
    if (!ok) throw InvalidCircuit("gate arity " + std::to_string(in) + " does not match its kind");
  }

 private:
  std::size_t n_inputs_;
  std::vector<Gate> gates_;
};

inline bool evaluate(const Circuit& c, const std::vector<bool>& input) {
  if (input.size() != c.n_inputs())
    throw ArityMismatch("expected " + std::to_string(c.n_inputs()) + " inputs, got " + std::to_string(input.size()));
  std::vector<char> val(c.size(), 0);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto& g = c.gate(i);
    switch (g.kind) {
      case GateKind::Input: val[i] = input[i]; break;
      case GateKind::Neg: val[i] = !val[g.inputs[0]]; break;
      case GateKind::Or:
      case GateKind::BigOr:
        val[i] = std::any_of(g.inputs.begin(), g.inputs.end(), [&](auto j) { return val[j] != 0; });
        break;
      case GateKind::And:
      case GateKind::BigAnd:
        val[i] = std::all_of(g.inputs.begin(), g.inputs.end(), [&](auto j) { return val[j] != 0; });
        break;
    }
  }
  return val[c.output()] != 0;
}

struct WeftDepth {
  std::size_t weft = 0;
  std::size_t depth = 0;  // gates on the longest input-output path, input excluded
};

inline WeftDepth weft_and_depth(const Circuit& c) {
  std::vector<std::size_t> weft(c.size(), 0), depth(c.size(), 0);
  for (std::size_t i = c.n_inputs(); i < c.size(); ++i) {
    const auto& g = c.gate(i);
    for (auto j : g.inputs) {
      weft[i] = std::max(weft[i], weft[j]);
      depth[i] = std::max(depth[i], depth[j]);
    }
    weft[i] += is_large(g.kind) ? 1 : 0;
    depth[i] += 1;
  }
  auto out = c.output();
  return {weft[out], depth[out]};
}

inline bool weighted_sat(const Circuit& c, std::size_t k) {
  const std::size_t n = c.n_inputs();
  if (k > n) return false;
  std::vector<std::size_t> pick(k);
  std::iota(pick.begin(), pick.end(), std::size_t{0});
  std::vector<bool> input(n);
  while (true) {
    std::fill(input.begin(), input.end(), false);
    for (auto i : pick) input[i] = true;
    if (evaluate(c, input)) return true;
    std::size_t i = k;
    while (i > 0 && pick[i - 1] == n - k + i - 1) --i;
    if (i == 0) return false;
    ++pick[i - 1];
    for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
}

inline const char* gate_token(GateKind k) {
  switch (k) {
    case GateKind::Neg: return "NEG";
    case GateKind::Or: return "OR";
    case GateKind::And: return "AND";
    case GateKind::BigOr: return "BIGOR";
    case GateKind::BigAnd: return "BIGAND";
    default: return "";
  }
}

inline constexpr const char* kGateColors[] = {"NEG", "OR", "AND", "BIGOR", "BIGAND", "OUT"};

// Gate i becomes node i+1; inputs keep ids 1..n. Wires form the WIRE relation.
inline ColoredGraph circuit_to_graph(const Circuit& c) {
  GraphBuilder b;
  for (const char* t : kGateColors) b.unary(t);
  b.binary("WIRE");
  const std::size_t out = c.output();
  for (std::size_t i = 0; i < c.size(); ++i) {
    std::vector<std::string> colors;
    if (c.gate(i).kind != GateKind::Input) colors.emplace_back(gate_token(c.gate(i).kind));
    if (i == out) colors.emplace_back("OUT");
    b.node(i + 1, colors);
  }
  std::set<std::pair<std::size_t, std::size_t>> linked;
  for (std::size_t i = 0; i < c.size(); ++i)
    for (auto j : c.gate(i).inputs) {
      if (linked.insert(std::minmax(i, j)).second) b.edge(j + 1, i + 1);
      b.relation("WIRE", j + 1, i + 1);
    }
  return b.build(false);
}

inline Circuit graph_to_circuit(const ColoredGraph& g) {
  auto wire = g.binary_index("WIRE");
  auto color_of = [&](Vertex v) -> GateKind {
    std::optional<GateKind> kind;
    const std::pair<const char*, GateKind> table[] = {{"NEG", GateKind::Neg}, {"OR", GateKind::Or}, {"AND", GateKind::And},
                                                      {"BIGOR", GateKind::BigOr}, {"BIGAND", GateKind::BigAnd}};
    for (auto [name, k] : table)
      if (auto p = g.unary_index(name); p && g.has_color(v, *p)) {
        if (kind) throw InvalidCircuit("node " + std::to_string(g.id(v)) + " has two gate colors");
        kind = k;
      }
    return kind.value_or(GateKind::Input);
  };
  std::vector<std::vector<Vertex>> preds(g.order()), succs(g.order());
  if (wire)
    for (auto [u, v] : g.relation(*wire)) {
      preds[v].push_back(u);
      succs[u].push_back(v);
    }
  std::size_t n_inputs = 0;
  for (Vertex v = 0; v < g.order(); ++v)
    if (color_of(v) == GateKind::Input) {
      if (g.id(v) != n_inputs + 1) throw InvalidCircuit("input gates must have ids 1..n");
      ++n_inputs;
    }
  std::vector<std::size_t> indeg(g.order()), pos(g.order(), kUnreachable);
  std::vector<Vertex> ready;
  for (Vertex v = 0; v < g.order(); ++v) {
    indeg[v] = preds[v].size();
    if (v < n_inputs) pos[v] = v;
  }
  Circuit c(n_inputs);
  for (Vertex v = 0; v < n_inputs; ++v)
    for (Vertex w : succs[v])
      if (--indeg[w] == 0) ready.push_back(w);
  std::size_t placed = n_inputs;
  while (!ready.empty()) {
    std::sort(ready.begin(), ready.end(), std::greater<>());
    Vertex v = ready.back();
    ready.pop_back();
    std::vector<std::size_t> ins;
    for (Vertex u : preds[v]) ins.push_back(pos[u]);
    pos[v] = c.add(color_of(v), ins);
    ++placed;
    for (Vertex w : succs[v])
      if (--indeg[w] == 0) ready.push_back(w);
  }
  if (placed != g.order()) throw InvalidCircuit("wires contain a cycle or gates unreachable from inputs");
  c.validate();
  return c;
}

}  // namespace dpc
