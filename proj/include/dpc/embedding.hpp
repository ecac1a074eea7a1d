#pragma once
#include <cmath>
#include <deque>

#include "problems.hpp"

namespace dpc {

// Structured key of a produced-instance vertex; virtual ids are key ranks + 1.
using VKey = std::vector<std::uint64_t>;

struct VirtualNode {
  VKey key;
  NodeId host = 0;
  std::vector<std::string> colors;

  friend bool operator==(const VirtualNode&, const VirtualNode&) = default;
};

// Edge {a, b} of the produced graph with a < b. The path runs from the host
// of a to the host of b.
struct VirtualEdge {
  VKey a, b;
  std::vector<NodeId> path;
  std::vector<std::string> forward;   // relations containing (a, b)
  std::vector<std::string> backward;  // relations containing (b, a)

  friend bool operator==(const VirtualEdge&, const VirtualEdge&) = default;
};

inline VirtualEdge make_edge(VKey x, VKey y, std::vector<NodeId> path, std::vector<std::string> xy = {},
                             std::vector<std::string> yx = {}) {
  if (y < x) {
    std::reverse(path.begin(), path.end());
    return {std::move(y), std::move(x), std::move(path), std::move(yx), std::move(xy)};
  }
  return {std::move(x), std::move(y), std::move(path), std::move(xy), std::move(yx)};
}

// What one host knows: the virtual nodes it hosts and every edge incident to them.
struct HostStore {
  std::vector<VirtualNode> hosted;
  std::vector<VirtualEdge> incident;

  void normalize() {
    auto by_key = [](const auto& x, const auto& y) { return x.key < y.key; };
    std::sort(hosted.begin(), hosted.end(), by_key);
    auto ek = [](const VirtualEdge& e) { return std::tie(e.a, e.b); };
    std::sort(incident.begin(), incident.end(), [&](const auto& x, const auto& y) { return ek(x) < ek(y); });
    incident.erase(std::unique(incident.begin(), incident.end(), [&](const auto& x, const auto& y) { return ek(x) == ek(y); }),
                   incident.end());
  }
  friend bool operator==(const HostStore&, const HostStore&) = default;
};

inline constexpr std::size_t kUnbounded = kUnreachable;

// Declared (s, r, c, t, p) values at the instance's parameter.
struct Envelope {
  double s = 1;
  std::size_t r = 0;
  std::size_t c = kUnbounded;
  std::size_t t = 0;
  std::size_t p = 0;
};

struct EmbeddedInstance {
  std::string reduction;
  Problem source{};
  Problem target{};
  ModelKind model = ModelKind::Local;
  ColoredGraph host;
  std::size_t k_prime = 0;
  std::vector<std::string> unary_names;
  std::vector<std::string> binary_names;
  std::map<NodeId, HostStore> stores;
  std::size_t rounds = 0;
  Envelope declared;
  ProblemInstance extras;  // target-side extras; graph and k are unused
};

struct Produced {
  std::vector<VirtualNode> nodes;  // ascending key
  std::vector<VirtualEdge> edges;  // ascending (a, b)
  std::map<VKey, std::size_t> rank;
};

inline Produced collect(const EmbeddedInstance& e) {
  Produced out;
  for (const auto& [h, st] : e.stores) {
    for (const auto& x : st.hosted) {
      if (!out.rank.emplace(x.key, 0).second) throw InvalidEmbedding("virtual node hosted twice");
      out.nodes.push_back(x);
    }
    out.edges.insert(out.edges.end(), st.incident.begin(), st.incident.end());
  }
  std::sort(out.nodes.begin(), out.nodes.end(), [](const auto& x, const auto& y) { return x.key < y.key; });
  for (std::size_t i = 0; i < out.nodes.size(); ++i) out.rank[out.nodes[i].key] = i;
  auto ek = [](const VirtualEdge& x) { return std::tie(x.a, x.b); };
  std::sort(out.edges.begin(), out.edges.end(), [&](const auto& x, const auto& y) { return ek(x) < ek(y); });
  out.edges.erase(std::unique(out.edges.begin(), out.edges.end()), out.edges.end());
  return out;
}

inline std::size_t produced_order(const EmbeddedInstance& e) {
  std::size_t n = 0;
  for (const auto& [h, st] : e.stores) n += st.hosted.size();
  return n;
}

// Checks ownership, path endpoints, path steps, simplicity, and that both
// endpoint hosts store the same copy of every edge.
inline void validate(const EmbeddedInstance& e) {
  auto p = collect(e);
  std::map<VKey, NodeId> host_of;
  for (const auto& x : p.nodes) host_of[x.key] = x.host;
  for (const auto& [h, st] : e.stores) {
    if (!e.host.contains(h)) throw InvalidEmbedding("store at unknown host " + std::to_string(h));
    for (const auto& x : st.hosted)
      if (x.host != h) throw InvalidEmbedding("node stored at " + std::to_string(h) + " claims host " + std::to_string(x.host));
  }
  for (std::size_t i = 0; i < p.edges.size(); ++i) {
    const auto& ed = p.edges[i];
    if (i > 0 && std::tie(ed.a, ed.b) == std::tie(p.edges[i - 1].a, p.edges[i - 1].b))
      throw InvalidEmbedding("hosts disagree on an edge");
    if (!(ed.a < ed.b)) throw InvalidEmbedding("edge endpoints not ordered or equal");
    auto ha = host_of.find(ed.a), hb = host_of.find(ed.b);
    if (ha == host_of.end() || hb == host_of.end()) throw InvalidEmbedding("edge to a node no host stores");
    if (ed.path.empty() || ed.path.front() != ha->second || ed.path.back() != hb->second)
      throw InvalidEmbedding("path endpoints disagree with nu");
    std::set<NodeId> seen;
    for (std::size_t j = 0; j < ed.path.size(); ++j) {
      if (!seen.insert(ed.path[j]).second) throw InvalidEmbedding("path is not simple");
      if (j > 0) {
        auto u = e.host.index_of(ed.path[j - 1]), w = e.host.index_of(ed.path[j]);
        if (e.model != ModelKind::Clique && !e.host.adjacent(u, w)) throw InvalidEmbedding("path step is not a host edge");
      }
    }
    for (NodeId h : {ha->second, hb->second}) {
      const auto& inc = e.stores.at(h).incident;
      if (std::find(inc.begin(), inc.end(), ed) == inc.end())
        throw InvalidEmbedding("edge missing from the store of host " + std::to_string(h));
    }
  }
}

// The produced instance as a graph; only used for oracle checks.
inline ColoredGraph materialize(const EmbeddedInstance& e) {
  auto p = collect(e);
  GraphBuilder b;
  for (const auto& nm : e.unary_names) b.unary(nm);
  for (const auto& nm : e.binary_names) b.binary(nm);
  for (std::size_t i = 0; i < p.nodes.size(); ++i) b.node(i + 1, p.nodes[i].colors);
  for (const auto& ed : p.edges) {
    NodeId a = p.rank.at(ed.a) + 1, c = p.rank.at(ed.b) + 1;
    b.edge(a, c);
    for (const auto& r : ed.forward) b.relation(r, a, c);
    for (const auto& r : ed.backward) b.relation(r, c, a);
  }
  try {
    return b.build(true);
  } catch (const DisconnectedGraph&) {
    throw InvalidEmbedding("produced graph is disconnected");
  }
}

inline ProblemInstance target_instance(const EmbeddedInstance& e) {
  ProblemInstance inst = e.extras;
  inst.graph = materialize(e);
  inst.k = e.k_prime;
  return inst;
}

struct ReductionBounds {
  std::size_t nodes = 0;
  std::size_t host_nodes = 0;
  double size_exponent = 0;
  std::size_t radius = 0;
  std::size_t congestion = 0;  // kUnbounded when the reduction declares unbounded congestion
  std::size_t path_load = 0;   // measured maximum number of paths through one host edge
  std::size_t rounds = 0;
  std::size_t produced_k = 0;
};

inline std::map<std::pair<NodeId, NodeId>, std::size_t> path_loads(const EmbeddedInstance& e) {
  std::map<std::pair<NodeId, NodeId>, std::size_t> load;
  for (const auto& ed : collect(e).edges)
    for (std::size_t j = 1; j < ed.path.size(); ++j) ++load[std::minmax(ed.path[j - 1], ed.path[j])];
  return load;
}

inline ReductionBounds measure(const EmbeddedInstance& e) {
  validate(e);
  auto p = collect(e);
  ReductionBounds b;
  b.nodes = p.nodes.size();
  b.host_nodes = e.host.order();
  b.size_exponent = std::log(static_cast<double>(std::max<std::size_t>(b.nodes, 1))) /
                    std::log(static_cast<double>(std::max<std::size_t>(b.host_nodes, 2)));
  for (const auto& ed : p.edges) b.radius = std::max(b.radius, ed.path.size() - 1);
  for (const auto& [edge, c] : path_loads(e)) b.path_load = std::max(b.path_load, c);
  b.congestion = e.declared.c == kUnbounded ? kUnbounded : b.path_load;
  b.rounds = e.rounds;
  b.produced_k = e.k_prime;
  return b;
}

// Names of the envelope components the measurement exceeds.
inline std::vector<std::string> violations(const ReductionBounds& b, const Envelope& env, ModelKind model) {
  std::vector<std::string> out;
  double cap = std::pow(static_cast<double>(std::max<std::size_t>(b.host_nodes, 2)), env.s);
  if (static_cast<double>(b.nodes) > cap * (1 + 1e-12)) out.push_back("s");
  if (b.radius > env.r) out.push_back("r");
  if (env.c == kUnbounded ? model != ModelKind::Local : b.path_load > env.c) out.push_back("c");
  if (b.rounds > env.t) out.push_back("t");
  if (b.produced_k > env.p) out.push_back("p");
  return out;
}

// ---------------------------------------------------------------- local rules

// A reduction step every host computes from its radius-`radius` ball.
struct LocalRule {
  std::string name;
  std::size_t radius = 0;
  std::function<HostStore(const ColoredGraph& ball, const NodeView& view)> compute;
};

enum class RuleMode { Fast, Distributed };

inline std::map<NodeId, HostStore> apply_rule_fast(const ColoredGraph& g, const LocalRule& rule, std::size_t k) {
  auto views = make_views(Model{ModelKind::Local}, g, k);
  std::map<NodeId, HostStore> out;
  for (Vertex v = 0; v < g.order(); ++v) {
    auto st = rule.compute(ball(g, g.id(v), rule.radius).subgraph, views[v]);
    st.normalize();
    out[g.id(v)] = std::move(st);
  }
  return out;
}

// Runs the rule inside the LOCAL simulator: gather, then compute.
inline std::map<NodeId, HostStore> apply_rule_distributed(const ColoredGraph& g, const LocalRule& rule, std::size_t k,
                                                          std::size_t* rounds_used = nullptr) {
  struct Program : NodeProgram {
    const LocalRule* rule = nullptr;
    const NodeView* view = nullptr;
    BallGatherer gather;
    HostStore store;
    void init(const NodeView& v) override {
      view = &v;
      gather.init(v);
    }
    void step(NodeContext& ctx, const Inbox& inbox) override {
      gather.step(ctx, inbox);
      if (ctx.round() < rule->radius) return;
      store = rule->compute(gather.ball(rule->radius).subgraph, *view);
      store.normalize();
      ctx.decide(false);
    }
  };
  std::vector<std::unique_ptr<NodeProgram>> programs;
  for (std::size_t i = 0; i < g.order(); ++i) {
    auto p = std::make_unique<Program>();
    p->rule = &rule;
    programs.push_back(std::move(p));
  }
  Engine engine(Model{ModelKind::Local}, g, k, RunOptions{});
  auto res = engine.run(programs);
  if (rounds_used) *rounds_used = res.rounds_used;
  std::map<NodeId, HostStore> out;
  for (Vertex v = 0; v < g.order(); ++v) out[g.id(v)] = std::move(static_cast<Program&>(*programs[v]).store);
  return out;
}

inline std::map<NodeId, HostStore> apply_rule(const ColoredGraph& g, const LocalRule& rule, std::size_t k, RuleMode mode) {
  return mode == RuleMode::Fast ? apply_rule_fast(g, rule, k) : apply_rule_distributed(g, rule, k);
}

// ---------------------------------------------------------------- simulation

// Every factor as the simulator synchronises on it: r, c and s rounded up to
// positive integers.
inline std::size_t size_factor(const ReductionBounds& b) {
  return static_cast<std::size_t>(std::max(1.0, std::ceil(b.size_exponent - 1e-9)));
}

// Host rounds per simulated round: r in LOCAL, r^2 * c * s otherwise.
inline std::size_t simulation_slot(const ReductionBounds& b, ModelKind model) {
  const std::size_t r = std::max<std::size_t>(1, b.radius);
  if (model == ModelKind::Local) return r;
  return r * r * std::max<std::size_t>(1, b.path_load) * size_factor(b);
}

// t + F * r^2 * c * s with the measured quantities.
inline std::size_t simulation_bound(const ReductionBounds& b, std::size_t virtual_rounds) {
  const std::size_t r = std::max<std::size_t>(1, b.radius);
  return b.rounds + virtual_rounds * r * r * std::max<std::size_t>(1, b.path_load) * size_factor(b);
}

namespace detail {

struct SimulationPlan {
  std::size_t offset = 0;  // host rounds spent computing the embedding
  std::size_t slot = 1;
  std::size_t virtual_rounds = 0;
  std::size_t virtual_bandwidth = 0;
  ModelKind kind = ModelKind::Local;
  std::vector<NodeId> host_of;  // by virtual id - 1
  std::map<NodeId, std::vector<std::size_t>> hosted;  // host -> virtual ids
  std::vector<NodeView> views;                        // by virtual id - 1
  // Oriented paths, keyed by (sender virtual id, recipient virtual id).
  std::map<std::pair<NodeId, NodeId>, std::vector<NodeId>> routes;
  NodeAlgorithm target;
  std::optional<std::uint64_t> seed;
};

struct Packet {
  std::vector<NodeId> route;  // hosts still to visit, ending at the destination host
  NodeId dst = 0, src = 0;
  Message payload;
};

inline Message encode_packet(const Packet& p) {
  Message m;
  m.put_gamma(p.route.size());
  for (auto h : p.route) m.put_gamma(h);
  m.put_gamma(p.dst);
  m.put_gamma(p.src);
  m.put_gamma(p.payload.bits());
  m.append(p.payload);
  return m;
}

// Parses one packet starting at `pos`, or returns nullopt if incomplete.
inline std::optional<Packet> decode_packet(const Message& m, std::size_t& pos) {
  Message rest = m.slice(pos, m.bits() - pos);
  MessageReader rd(rest);
  try {
    Packet p;
    p.route.resize(rd.get_gamma());
    for (auto& h : p.route) h = rd.get_gamma();
    p.dst = rd.get_gamma();
    p.src = rd.get_gamma();
    std::size_t len = rd.get_gamma();
    if (rd.position() + len > rest.bits()) return std::nullopt;
    p.payload = rest.slice(rd.position(), len);
    pos += rd.position() + len;
    return p;
  } catch (const Error&) {
    return std::nullopt;
  }
}

class HostProgram : public NodeProgram {
 public:
  explicit HostProgram(std::shared_ptr<const SimulationPlan> plan) : plan_(std::move(plan)) {}

  void init(const NodeView& v) override {
    self_ = v.id;
    if (auto it = plan_->hosted.find(v.id); it != plan_->hosted.end()) mine_ = it->second;
    for (auto x : mine_) {
      programs_[x] = plan_->target.make();
      programs_[x]->init(plan_->views[x - 1]);
    }
  }

  void step(NodeContext& ctx, const Inbox& inbox) override {
    for (const auto& [from, frame] : inbox) {
      auto& buf = incoming_[from];
      buf.append(frame);
      std::size_t pos = 0;
      while (auto p = decode_packet(buf, pos)) accept(std::move(*p));
      buf = buf.slice(pos, buf.bits() - pos);
    }
    const std::size_t h = ctx.round();
    if (h >= plan_->offset && (h - plan_->offset) % plan_->slot == 0) {
      const std::size_t j = (h - plan_->offset) / plan_->slot;
      for (const auto& [w, q] : queues_)
        if (!q.empty()) throw CongestionDeadlock("host " + std::to_string(self_) + " still routing at simulated round " + std::to_string(j));
      for (const auto& [w, buf] : incoming_)
        if (!buf.empty()) throw CongestionDeadlock("host " + std::to_string(self_) + " has a partial packet at simulated round " + std::to_string(j));
      simulate(j);
      if (j == plan_->virtual_rounds) {
        bool out = false;
        for (auto x : mine_) {
          if (!decided_.count(x))
            throw Error("virtual node " + std::to_string(x) + " did not halt within its declared round bound");
          out = out || decided_[x];
        }
        ctx.decide(out);
        return;
      }
    }
    for (auto& [w, q] : queues_) {
      if (q.empty()) continue;
      Message frame;
      const std::size_t bw = ctx.view().bandwidth;
      while (!q.empty() && (bw == 0 || frame.bits() < bw)) {
        auto& head = q.front();
        std::size_t take = bw == 0 ? head.second.bits() - sent_[w] : std::min(bw - frame.bits(), head.second.bits() - sent_[w]);
        frame.append(head.second.slice(sent_[w], take));
        sent_[w] += take;
        if (sent_[w] == head.second.bits()) {
          q.pop_front();
          sent_[w] = 0;
        }
      }
      ctx.send(w, frame);
    }
  }

 private:
  void accept(Packet p) {
    if (p.route.empty()) {
      if (!decided_.count(p.dst)) pending_[p.dst].emplace_back(p.src, std::move(p.payload));
      return;
    }
    NodeId next = p.route.front();
    p.route.erase(p.route.begin());
    enqueue(next, p);
  }

  void enqueue(NodeId next, const Packet& p) {
    auto& q = queues_[next];
    std::pair<NodeId, NodeId> prio{std::min(p.src, p.dst), std::max(p.src, p.dst) * 2 + (p.src < p.dst ? 0 : 1)};
    auto msg = encode_packet(p);
    // The head may be partially sent; the rest is ordered by virtual edge.
    auto it = q.begin();
    if (it != q.end() && sent_[next] > 0) ++it;
    while (it != q.end() && it->first <= prio) ++it;
    q.insert(it, {prio, std::move(msg)});
  }

  void simulate(std::size_t j) {
    std::vector<std::tuple<NodeId, NodeId, Message>> local;
    for (auto x : mine_) {
      if (decided_.count(x)) continue;
      Inbox in = std::move(pending_[x]);
      pending_.erase(x);
      std::stable_sort(in.begin(), in.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      NodeContext c;
      const NodeView& view = plan_->views[x - 1];
      ContextAccess::reset(c, view, j, plan_->seed);
      programs_[x]->step(c, in);
      for (auto& [to, msg] : ContextAccess::take_outbox(c)) {
        if (to == x || to == 0 || to > plan_->host_of.size()) throw IllegalRecipient("virtual node " + std::to_string(x) + " -> " + std::to_string(to));
        auto route = plan_->routes.find({x, to});
        if (route == plan_->routes.end() && plan_->kind != ModelKind::Clique)
          throw IllegalRecipient("virtual node " + std::to_string(x) + " -> non-neighbor " + std::to_string(to));
        if (plan_->virtual_bandwidth && msg.bits() > plan_->virtual_bandwidth)
          throw BandwidthViolation(x, j, msg.bits(), plan_->virtual_bandwidth);
        std::vector<NodeId> path = route != plan_->routes.end() ? route->second : std::vector<NodeId>{self_, plan_->host_of[to - 1]};
        if (path.back() == self_ && path.size() == 2 && path.front() == self_) path.pop_back();
        if (path.size() == 1) {
          local.emplace_back(to, x, std::move(msg));
          continue;
        }
        Packet p{std::vector<NodeId>(path.begin() + 2, path.end()), to, x, std::move(msg)};
        enqueue(path[1], p);
      }
      if (c.decided()) decided_[x] = ContextAccess::output(c);
    }
    for (auto& [to, from, msg] : local)
      if (!decided_.count(to)) pending_[to].emplace_back(from, std::move(msg));
  }

  std::shared_ptr<const SimulationPlan> plan_;
  NodeId self_ = 0;
  std::vector<std::size_t> mine_;
  std::map<std::size_t, std::unique_ptr<NodeProgram>> programs_;
  std::map<std::size_t, bool> decided_;
  std::map<std::size_t, Inbox> pending_;
  std::map<NodeId, std::deque<std::pair<std::pair<NodeId, NodeId>, Message>>> queues_;
  std::map<NodeId, std::size_t> sent_;
  std::map<NodeId, Message> incoming_;
};

}  // namespace detail

// Runs `target` on the produced instance inside the host graph. Hosts spend
// the embedding's rounds first, then simulate one target round per slot,
// routing every message along its path. Each host outputs the disjunction of
// its virtual nodes' outputs.
inline RunResult simulate_through(const EmbeddedInstance& e, const NodeAlgorithm& target, const Model& model,
                                  RunOptions opts = {}) {
  auto bounds = measure(e);
  auto produced = collect(e);
  auto plan = std::make_shared<detail::SimulationPlan>();
  plan->offset = e.rounds;
  plan->slot = simulation_slot(bounds, model.kind);
  auto f = target.round_bound(e.k_prime);
  if (!f) throw Error("simulate_through needs a target algorithm with a declared round bound");
  plan->virtual_rounds = *f;
  plan->kind = model.kind;
  plan->virtual_bandwidth = model.bandwidth(e.host.order()) / 2;
  plan->target = target;
  plan->seed = opts.seed;

  const std::size_t n = produced.nodes.size();
  auto unames = std::make_shared<const std::vector<std::string>>(e.unary_names);
  auto bnames = std::make_shared<const std::vector<std::string>>(e.binary_names);
  plan->views.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& x = produced.nodes[i];
    plan->host_of.push_back(x.host);
    plan->hosted[x.host].push_back(i + 1);
    auto& view = plan->views[i];
    view.id = i + 1;
    for (const auto& c : x.colors) {
      auto it = std::find(e.unary_names.begin(), e.unary_names.end(), c);
      view.colors.push_back(static_cast<std::size_t>(it - e.unary_names.begin()));
    }
    std::sort(view.colors.begin(), view.colors.end());
    view.k = e.k_prime;
    if (model.reveal_n) view.n = n;
    if (model.kind == ModelKind::Clique)
      for (std::size_t j = 1; j <= n; ++j) view.all_ids.push_back(j);
    view.model = model.kind;
    view.bandwidth = plan->virtual_bandwidth;
    view.unary_names = unames;
    view.binary_names = bnames;
  }
  auto rel_index = [&](const std::string& r) {
    auto nm = r == "E" ? std::string("E1") : r;
    return static_cast<std::size_t>(std::find(e.binary_names.begin(), e.binary_names.end(), nm) - e.binary_names.begin());
  };
  std::vector<std::map<NodeId, IncidentLabels>> labels(n);
  for (const auto& ed : produced.edges) {
    NodeId a = produced.rank.at(ed.a) + 1, b = produced.rank.at(ed.b) + 1;
    plan->views[a - 1].neighbors.push_back(b);
    plan->views[b - 1].neighbors.push_back(a);
    plan->routes[{a, b}] = ed.path;
    plan->routes[{b, a}] = std::vector<NodeId>(ed.path.rbegin(), ed.path.rend());
    if (!e.binary_names.empty()) {
      auto& la = labels[a - 1][b];
      auto& lb = labels[b - 1][a];
      la.neighbor = b;
      lb.neighbor = a;
      for (const auto& r : ed.forward) {
        la.out.push_back(rel_index(r));
        lb.in.push_back(rel_index(r));
      }
      for (const auto& r : ed.backward) {
        la.in.push_back(rel_index(r));
        lb.out.push_back(rel_index(r));
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    auto& view = plan->views[i];
    std::sort(view.neighbors.begin(), view.neighbors.end());
    if (!e.binary_names.empty())
      for (NodeId w : view.neighbors) {
        auto l = labels[i][w];
        std::sort(l.out.begin(), l.out.end());
        std::sort(l.in.begin(), l.in.end());
        view.labels.push_back(std::move(l));
      }
  }

  std::vector<std::unique_ptr<NodeProgram>> programs;
  for (std::size_t i = 0; i < e.host.order(); ++i) programs.push_back(std::make_unique<detail::HostProgram>(plan));
  Engine engine(model, e.host, e.k_prime, opts);
  return engine.run(programs);
}

}  // namespace dpc
