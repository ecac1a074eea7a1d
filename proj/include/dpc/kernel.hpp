#pragma once
#include <cmath>

#include "embedding.hpp"

namespace dpc {

struct KernelOutput {
  EmbeddedInstance embedded;
  std::size_t declared_size_bound = 0;
  std::size_t rounds_used = 0;
  RunResult run;
};

// A node of the CONGESTED-CLIQUE kernelization: runs the wrapped program until
// it decides, broadcasts the answer, and once every answer is in, the least
// id places the matching hardcoded instance on itself.
class KernelProgram : public NodeProgram {
 public:
  KernelProgram(std::unique_ptr<NodeProgram> inner, std::shared_ptr<const ProblemInstance> yes,
                std::shared_ptr<const ProblemInstance> no)
      : inner_(std::move(inner)), yes_(std::move(yes)), no_(std::move(no)) {}

  void init(const NodeView& v) override {
    if (v.model != ModelKind::Clique) throw NotAvailableInModel("kernel wrapper needs CONGESTED-CLIQUE");
    view_ = v;
    inner_view_ = v;
    if (inner_view_.bandwidth) inner_view_.bandwidth = std::max<std::size_t>(1, inner_view_.bandwidth - 2);
    inner_->init(inner_view_);
  }

  void step(NodeContext& ctx, const Inbox& inbox) override {
    Inbox forwarded;
    for (const auto& [from, m] : inbox) {
      MessageReader rd(m);
      if (rd.get_flag()) {
        answers_ += 1;
        any_yes_ = any_yes_ || rd.get_flag();
      }
      if (!inner_done_) forwarded.emplace_back(from, m.slice(rd.position(), m.bits() - rd.position()));
    }
    ctx.charge(inbox.size() + 1);

    std::vector<std::pair<NodeId, Message>> out;
    bool announce = false;
    if (!inner_done_) {
      NodeContext inner_ctx;
      detail::ContextAccess::reset(inner_ctx, inner_view_, ctx.round(), detail::ContextAccess::seed(ctx));
      inner_->step(inner_ctx, forwarded);
      ctx.charge(detail::ContextAccess::steps(inner_ctx));
      out = detail::ContextAccess::take_outbox(inner_ctx);
      if (inner_ctx.decided()) {
        inner_done_ = announce = true;
        own_ = detail::ContextAccess::output(inner_ctx);
        any_yes_ = any_yes_ || own_;
        decided_at_ = ctx.round();
      }
    }
    std::map<NodeId, Message> payload;
    for (auto& [to, m] : out) payload[to].append(m);
    for (NodeId w : view_.all_ids) {
      if (w == view_.id) continue;
      auto it = payload.find(w);
      if (!announce && it == payload.end()) continue;
      Message m;
      m.put_flag(announce);
      if (announce) m.put_flag(own_);
      if (it != payload.end()) m.append(it->second);
      ctx.send(w, m);
    }
    if (inner_done_ && ctx.round() > decided_at_ && answers_ + 1 == view_.all_ids.size()) {
      answer_ = any_yes_;
      if (view_.id == view_.all_ids.front()) place(*answer_ ? *yes_ : *no_);
      ctx.decide(*answer_);
    }
  }

  std::optional<bool> answer() const { return answer_; }
  const HostStore& store() const { return store_; }

 private:
  void place(const ProblemInstance& inst) {
    const auto& h = inst.graph;
    for (Vertex v = 0; v < h.order(); ++v) {
      std::vector<std::string> colors;
      for (auto c : h.colors_of(v)) colors.push_back(h.unary_names()[c]);
      store_.hosted.push_back({{v}, view_.id, colors});
    }
    for (auto [u, w] : h.edges()) {
      std::vector<std::string> fw, bw;
      for (std::size_t r = 0; r < h.binary_count(); ++r) {
        if (h.related(r, u, w)) fw.push_back(h.binary_names()[r]);
        if (h.related(r, w, u)) bw.push_back(h.binary_names()[r]);
      }
      store_.incident.push_back(make_edge({u}, {w}, {view_.id}, fw, bw));
    }
    store_.normalize();
  }

  std::unique_ptr<NodeProgram> inner_;
  std::shared_ptr<const ProblemInstance> yes_, no_;
  NodeView view_, inner_view_;
  bool inner_done_ = false, own_ = false, any_yes_ = false;
  std::size_t answers_ = 0, decided_at_ = 0;
  std::optional<bool> answer_;
  HostStore store_;
};

struct KernelAlgorithm {
  Problem problem{};
  NodeAlgorithm fpt;
  ProblemInstance hard_yes, hard_no;

  std::size_t size_bound() const { return std::max(hard_yes.graph.order(), hard_no.graph.order()); }

  NodeAlgorithm algorithm() const {
    NodeAlgorithm alg;
    alg.name = "kernel(" + fpt.name + ")";
    auto yes = std::make_shared<const ProblemInstance>(hard_yes);
    auto no = std::make_shared<const ProblemInstance>(hard_no);
    auto make = fpt.make;
    alg.make = [make, yes, no] { return std::make_unique<KernelProgram>(make(), yes, no); };
    auto inner = fpt.round_bound;
    alg.round_bound = [inner](std::size_t k) -> std::optional<std::size_t> {
      if (auto r = inner(k)) return *r + 1;
      return std::nullopt;
    };
    return alg;
  }
};

// Throws MissingHardInstance unless hard_yes is a positive and hard_no a
// negative instance of the problem.
inline KernelAlgorithm clique_kernel_wrapper(Problem problem, NodeAlgorithm fpt, ProblemInstance hard_yes,
                                             ProblemInstance hard_no) {
  if (hard_yes.graph.order() == 0) throw MissingHardInstance("no positive hardcoded instance");
  if (hard_no.graph.order() == 0) throw MissingHardInstance("no negative hardcoded instance");
  if (!oracle_solve(problem, hard_yes)) throw MissingHardInstance("hardcoded positive instance is negative");
  if (oracle_solve(problem, hard_no)) throw MissingHardInstance("hardcoded negative instance is positive");
  return {problem, std::move(fpt), std::move(hard_yes), std::move(hard_no)};
}

inline KernelOutput run_kernel(const KernelAlgorithm& kern, const ProblemInstance& inst, RunOptions opts = {}) {
  auto alg = kern.algorithm();
  std::vector<std::unique_ptr<NodeProgram>> programs;
  for (std::size_t i = 0; i < inst.graph.order(); ++i) programs.push_back(alg.make());
  Engine engine(Model{ModelKind::Clique}, inst.graph, inst.k, opts);
  KernelOutput out;
  out.run = engine.run(programs);
  out.rounds_used = out.run.rounds_used;
  out.declared_size_bound = kern.size_bound();

  auto& e = out.embedded;
  e.reduction = alg.name;
  e.source = e.target = kern.problem;
  e.model = ModelKind::Clique;
  e.host = inst.graph;
  e.rounds = out.rounds_used;
  const ProblemInstance* chosen = nullptr;
  for (Vertex v = 0; v < inst.graph.order(); ++v) {
    const auto& p = static_cast<const KernelProgram&>(*programs[v]);
    e.stores[inst.graph.id(v)] = p.store();
    if (v == 0) chosen = *p.answer() ? &kern.hard_yes : &kern.hard_no;
  }
  e.k_prime = chosen->k;
  e.extras = *chosen;
  e.unary_names = chosen->graph.unary_names();
  e.binary_names = chosen->graph.binary_names();
  const double g = static_cast<double>(std::max<std::size_t>(out.declared_size_bound, 1));
  e.declared = {std::ceil(std::log2(g)), 0, 0, out.rounds_used, chosen->k};
  return out;
}

// Equivalence with the source instance and the size bound.
inline bool verify_kernel(Problem problem, const ProblemInstance& inst, const KernelOutput& out) {
  if (produced_order(out.embedded) > out.declared_size_bound) return false;
  try {
    return oracle_solve(problem, inst) == oracle_solve(problem, target_instance(out.embedded));
  } catch (const InvalidEmbedding&) {
    return false;
  }
}

// ------------------------------------------------------------------ fixtures

// Path v1..vn (ids 1..n) with pendants x1, x2 at v1 and y1, y2 at vn; variant 1
// adds x3, variant 2 adds y3, variant 3 adds both. Ids x1..x3 = n+1..n+3 and
// y1..y3 = n+4..n+6 in every variant.
inline ColoredGraph degree_family(std::size_t n, int variant) {
  if (n < 3) throw GraphTooSmall("degree family needs n >= 3");
  if (variant < 0 || variant > 3) throw Error("degree family variant must be 0..3");
  GraphBuilder b;
  for (NodeId i = 1; i <= n; ++i) b.node(i);
  for (NodeId i = 1; i < n; ++i) b.edge(i, i + 1);
  const NodeId x = n, y = n + 3;
  b.node(x + 1).node(x + 2).node(y + 1).node(y + 2);
  b.edge(1, x + 1).edge(1, x + 2).edge(n, y + 1).edge(n, y + 2);
  if (variant == 1 || variant == 3) b.node(x + 3).edge(1, x + 3);
  if (variant == 2 || variant == 3) b.node(y + 3).edge(n, y + 3);
  return b.build();
}

// Path v1..vn (ids 1..n) with P1 at v1 and P3 at v_{n/2}; the positive member
// also has P2 at vn. Multicolored independent set with k = 3.
inline ColoredGraph mis_path_family(std::size_t n, bool positive) {
  if (n < 5) throw GraphTooSmall("MIS path family needs n >= 5");
  GraphBuilder b;
  b.unary("P1").unary("P2").unary("P3");
  for (NodeId i = 1; i <= n; ++i) b.node(i);
  for (NodeId i = 1; i < n; ++i) b.edge(i, i + 1);
  b.color(1, "P1").color(n / 2, "P3");
  if (positive) b.color(n, "P2");
  return b.build();
}

// Every listed centre sees the same radius-r ball in both graphs.
inline bool indistinguishable(const ColoredGraph& a, const ColoredGraph& b, const std::vector<NodeId>& centers,
                              std::size_t r) {
  for (NodeId v : centers)
    if (!balls_identical(a, b, v, r)) return false;
  return true;
}

}  // namespace dpc
