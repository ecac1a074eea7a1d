#pragma once
#include <bit>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <random>
#include <unordered_map>
#include <unordered_set>

#include <boost/container/small_vector.hpp>

#include "graph.hpp"
#include "solvers.hpp"

namespace dpc {

enum class ModelKind { Local, Congest, Clique };

inline std::string model_name(ModelKind m) {
  switch (m) {
    case ModelKind::Local: return "local";
    case ModelKind::Congest: return "congest";
    case ModelKind::Clique: return "clique";
  }
  return "?";
}

inline ModelKind parse_model(std::string_view s) {
  if (s == "local" || s == "LOCAL") return ModelKind::Local;
  if (s == "congest" || s == "CONGEST") return ModelKind::Congest;
  if (s == "clique" || s == "CONGESTED_CLIQUE" || s == "congested-clique") return ModelKind::Clique;
  throw Error("unknown model '" + std::string(s) + "'");
}

// ceil(log2(x)) for x >= 1.
inline std::size_t ceil_log2(std::uint64_t x) {
  return x <= 1 ? 0 : static_cast<std::size_t>(64 - std::countl_zero(x - 1));
}

struct Model {
  ModelKind kind = ModelKind::Local;
  std::size_t bandwidth_factor = 32;
  bool reveal_n = false;

  // Bits per message per ordered pair and round; 0 means unlimited.
  std::size_t bandwidth(std::size_t n) const {
    return kind == ModelKind::Local ? 0 : bandwidth_factor * std::max<std::size_t>(1, ceil_log2(n + 1));
  }
};

// Bit string with explicit length.
class Message {
 public:
  // Appends the low `width` bits of `word`, bit 0 first.
  void put_raw(std::uint64_t word, unsigned width) {
    if (width == 0) return;
    if (width < 64) word &= (std::uint64_t{1} << width) - 1;
    const unsigned off = bits_ & 63;
    if (off == 0) words_.push_back(0);
    words_.back() |= word << off;
    if (off && off + width > 64) words_.push_back(word >> (64 - off));
    bits_ += width;
  }
  // Elias gamma code of x = value+1: floor(log2 x) zeros, a one, then the
  // remaining bits of x, least significant first.
  void put_gamma(std::uint64_t value) {
    std::uint64_t x = value + 1;
    if (x == 0) throw Error("gamma code of 2^64");
    unsigned z = static_cast<unsigned>(std::bit_width(x)) - 1;
    put_raw(0, z);
    put_raw(1 | ((x ^ (std::uint64_t{1} << z)) << 1), z + 1);
  }
  void put_flag(bool b) { put_raw(b ? 1 : 0, 1); }
  void append(const Message& other) {
    std::size_t left = other.bits_;
    for (std::size_t w = 0; left > 0; ++w) {
      unsigned take = static_cast<unsigned>(std::min<std::size_t>(64, left));
      put_raw(other.words_[w], take);
      left -= take;
    }
  }
  Message slice(std::size_t from, std::size_t len) const {
    Message m;
    len = from >= bits_ ? 0 : std::min(len, bits_ - from);
    for (std::size_t done = 0; done < len;) {
      unsigned take = static_cast<unsigned>(std::min<std::size_t>(64, len - done));
      m.put_raw(peek(from + done), take);
      done += take;
    }
    return m;
  }
  std::size_t bits() const { return bits_; }
  bool empty() const { return bits_ == 0; }
  bool bit(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }
  // Up to 64 bits starting at i, bit i first; bits past the end read as 0.
  std::uint64_t peek(std::size_t i) const {
    std::size_t w = i >> 6;
    unsigned off = i & 63;
    if (w >= words_.size()) return 0;
    std::uint64_t v = words_[w] >> off;
    if (off && w + 1 < words_.size()) v |= words_[w + 1] << (64 - off);
    return v;
  }
  friend bool operator==(const Message& a, const Message& b) { return a.bits_ == b.bits_ && a.words_ == b.words_; }

 private:
  boost::container::small_vector<std::uint64_t, 8> words_;
  std::size_t bits_ = 0;
};

class MessageReader {
 public:
  explicit MessageReader(const Message& m) : m_(m) {}
  // The next `width` bits, first bit lowest.
  std::uint64_t get_raw(unsigned width) {
    if (width == 0) return 0;
    if (pos_ + width > m_.bits()) throw Error("message read past end");
    std::uint64_t v = m_.peek(pos_);
    if (width < 64) v &= (std::uint64_t{1} << width) - 1;
    pos_ += width;
    return v;
  }
  std::uint64_t get_gamma() {
    if (pos_ >= m_.bits()) throw Error("message read past end");
    std::size_t avail = m_.bits() - pos_;
    std::uint64_t w = m_.peek(pos_);
    if (avail < 64) w &= (std::uint64_t{1} << avail) - 1;
    if (w != 0) {
      const unsigned t = static_cast<unsigned>(std::countr_zero(w));
      if (2 * t + 1 <= std::min<std::size_t>(avail, 64)) {
        pos_ += 2 * t + 1;
        const std::uint64_t low = t == 0 ? 0 : (w >> (t + 1)) & ((std::uint64_t{1} << t) - 1);
        return ((std::uint64_t{1} << t) | low) - 1;
      }
    }
    unsigned zeros = 0;
    while (true) {
      if (pos_ >= m_.bits()) throw Error("message read past end");
      avail = std::min<std::size_t>(64, m_.bits() - pos_);
      w = m_.peek(pos_);
      if (avail < 64) w &= (std::uint64_t{1} << avail) - 1;
      if (w == 0) {
        zeros += static_cast<unsigned>(avail);
        pos_ += avail;
        continue;
      }
      unsigned t = static_cast<unsigned>(std::countr_zero(w));
      zeros += t;
      pos_ += t + 1;
      break;
    }
    if (zeros > 63) throw Error("gamma code too long");
    return ((std::uint64_t{1} << zeros) | get_raw(zeros)) - 1;
  }
  bool get_flag() { return next(); }
  void skip(std::size_t bits) {
    if (pos_ + bits > m_.bits()) throw Error("message read past end");
    pos_ += bits;
  }
  bool done() const { return pos_ >= m_.bits(); }
  std::size_t position() const { return pos_; }

 private:
  bool next() {
    if (pos_ >= m_.bits()) throw Error("message read past end");
    return m_.bit(pos_++);
  }
  const Message& m_;
  std::size_t pos_ = 0;
};

struct IncidentLabels {
  NodeId neighbor = 0;
  std::vector<std::size_t> out;  // relations containing (self, neighbor)
  std::vector<std::size_t> in;   // relations containing (neighbor, self)
};

struct NodeView {
  NodeId id = 0;
  std::vector<NodeId> neighbors;
  std::vector<std::size_t> colors;
  std::vector<IncidentLabels> labels;  // parallel to neighbors; empty when t = 0
  std::size_t k = 0;
  std::optional<std::size_t> n;
  std::vector<NodeId> all_ids;  // clique model only
  ModelKind model = ModelKind::Local;
  std::size_t bandwidth = 0;
  std::shared_ptr<const std::vector<std::string>> unary_names;
  std::shared_ptr<const std::vector<std::string>> binary_names;

  bool has_color(std::size_t p) const { return std::find(colors.begin(), colors.end(), p) != colors.end(); }
  bool is_neighbor(NodeId x) const { return std::binary_search(neighbors.begin(), neighbors.end(), x); }
};

using Inbox = std::vector<std::pair<NodeId, Message>>;

namespace detail {
struct ContextAccess;
}

class NodeContext {
 public:
  const NodeView& view() const { return *view_; }
  std::size_t round() const { return round_; }

  void send(NodeId to, const Message& m) {
    for (auto& [dst, msg] : out_)
      if (dst == to) {
        msg.append(m);
        return;
      }
    out_.emplace_back(to, m);
  }
  void send_all_neighbors(const Message& m) {
    for (NodeId w : view_->neighbors) send(w, m);
  }
  void decide(bool accept) {
    decided_ = true;
    output_ = accept;
  }
  bool decided() const { return decided_; }

  // Seeded per-node randomness; without a seed the run is rejected.
  std::uint64_t random() {
    if (!seed_) throw NonDeterminismDetected("node " + std::to_string(view_->id) + " drew from an unseeded random source");
    std::uint64_t z = *seed_ + 0x9E3779B97F4A7C15ULL * (view_->id * 1315423911ULL + round_ * 2654435761ULL + ++draws_);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Local computation accounting for the step-budget mode.
  void charge(std::size_t steps) {
    steps_ += steps;
    if (budget_ && steps_ > *budget_)
      throw StepBudgetExceeded("node " + std::to_string(view_->id) + " round " + std::to_string(round_) + " used " +
                               std::to_string(steps_) + " > " + std::to_string(*budget_));
  }

 private:
  friend class Engine;
  friend struct detail::ContextAccess;
  const NodeView* view_ = nullptr;
  std::size_t round_ = 0;
  std::vector<std::pair<NodeId, Message>> out_;
  bool decided_ = false;
  bool output_ = false;
  std::optional<std::uint64_t> seed_;
  std::uint64_t draws_ = 0;
  std::size_t steps_ = 0;
  std::optional<std::size_t> budget_;
};

namespace detail {

// Lets simulators other than Engine drive programs.
struct ContextAccess {
  static void reset(NodeContext& c, const NodeView& view, std::size_t round, std::optional<std::uint64_t> seed) {
    c.view_ = &view;
    c.round_ = round;
    c.out_.clear();
    c.decided_ = false;
    c.output_ = false;
    c.seed_ = seed;
    c.draws_ = 0;
    c.steps_ = 0;
    c.budget_.reset();
  }
  static std::vector<std::pair<NodeId, Message>> take_outbox(NodeContext& c) { return std::exchange(c.out_, {}); }
  static bool output(const NodeContext& c) { return c.output_; }
  static std::size_t steps(const NodeContext& c) { return c.steps_; }
  static std::optional<std::uint64_t> seed(const NodeContext& c) { return c.seed_; }
};

}  // namespace detail

class NodeProgram {
 public:
  virtual ~NodeProgram() = default;
  virtual void init(const NodeView&) {}
  // Round 0 runs before any communication; messages sent in round r are
  // delivered in round r+1. A node halts once it calls ctx.decide().
  virtual void step(NodeContext& ctx, const Inbox& inbox) = 0;
};

struct NodeAlgorithm {
  std::string name;
  std::function<std::unique_ptr<NodeProgram>()> make;
  // Exact halting round as a function of k, when the algorithm has one.
  std::function<std::optional<std::size_t>(std::size_t)> round_bound = [](std::size_t) { return std::nullopt; };
};

enum class ExecutionOrder { Ascending, Descending, Shuffled };

struct RunOptions {
  std::size_t round_cap = 100000;
  ExecutionOrder order = ExecutionOrder::Ascending;
  std::uint64_t shuffle_seed = 0;
  std::optional<std::uint64_t> seed;
  bool fully_polynomial = false;
  bool record_traffic = true;
  bool check_determinism = false;
};

struct RunResult {
  bool verdict = false;
  std::vector<std::pair<NodeId, bool>> outputs;
  std::vector<std::size_t> decision_round;
  std::size_t rounds_used = 0;
  std::size_t max_message_bits = 0;
  std::size_t bandwidth = 0;
  std::size_t total_messages = 0;
  std::map<std::pair<NodeId, NodeId>, std::size_t> edge_congestion;
  std::vector<std::size_t> local_steps;

  friend bool operator==(const RunResult&, const RunResult&) = default;
};

inline std::vector<NodeView> make_views(const Model& model, const ColoredGraph& g, std::size_t k) {
  auto unames = std::make_shared<const std::vector<std::string>>(g.unary_names());
  auto bnames = std::make_shared<const std::vector<std::string>>(g.binary_names());
  std::vector<NodeView> views(g.order());
  const std::size_t bw = model.bandwidth(g.order());
  for (Vertex v = 0; v < g.order(); ++v) {
    auto& view = views[v];
    view.id = g.id(v);
    for (Vertex w : g.neighbors(v)) view.neighbors.push_back(g.id(w));
    view.colors = g.colors_of(v);
    if (g.binary_count() > 0)
      for (Vertex w : g.neighbors(v)) {
        IncidentLabels l{g.id(w), {}, {}};
        for (std::size_t r = 0; r < g.binary_count(); ++r) {
          if (g.related(r, v, w)) l.out.push_back(r);
          if (g.related(r, w, v)) l.in.push_back(r);
        }
        view.labels.push_back(std::move(l));
      }
    view.k = k;
    if (model.reveal_n) view.n = g.order();
    if (model.kind == ModelKind::Clique) view.all_ids.assign(g.ids().begin(), g.ids().end());
    view.model = model.kind;
    view.bandwidth = bw;
    view.unary_names = unames;
    view.binary_names = bnames;
  }
  return views;
}

// Bits needed to describe a node's input; the step budget is 64 * bits^2.
inline std::size_t view_input_bits(const NodeView& v) {
  std::size_t idbits = 1 + ceil_log2(v.id + 1);
  for (auto w : v.neighbors) idbits = std::max(idbits, 1 + ceil_log2(w + 1));
  std::size_t bits = (1 + v.neighbors.size() + v.all_ids.size()) * idbits + v.colors.size() + 1 + ceil_log2(v.k + 1) + 1;
  for (const auto& l : v.labels) bits += l.out.size() + l.in.size();
  return bits;
}

class Engine {
 public:
  Engine(Model model, const ColoredGraph& g, std::size_t k, RunOptions opts)
      : model_(model), g_(g), k_(k), opts_(opts), views_(make_views(model, g, k)) {}

  RunResult run(const NodeAlgorithm& alg) {
    std::vector<std::unique_ptr<NodeProgram>> programs;
    programs.reserve(g_.order());
    for (std::size_t i = 0; i < g_.order(); ++i) programs.push_back(alg.make());
    auto result = run(programs);
    if (opts_.check_determinism) {
      RunOptions again = opts_;
      again.check_determinism = false;
      again.order = opts_.order == ExecutionOrder::Descending ? ExecutionOrder::Ascending : ExecutionOrder::Descending;
      Engine other(model_, g_, k_, again);
      if (!(other.run(alg) == result)) throw NonDeterminismDetected("rerun with reversed execution order differs");
    }
    return result;
  }

  // Runs caller-owned programs so that their final state stays inspectable.
  RunResult run(std::vector<std::unique_ptr<NodeProgram>>& programs) {
    const std::size_t n = g_.order();
    if (programs.size() != n) throw Error("program count does not match node count");
    const std::size_t bw = model_.bandwidth(n);
    for (std::size_t v = 0; v < n; ++v) programs[v]->init(views_[v]);

    std::vector<Vertex> order(n);
    std::iota(order.begin(), order.end(), Vertex{0});
    if (opts_.order == ExecutionOrder::Descending) std::reverse(order.begin(), order.end());
    if (opts_.order == ExecutionOrder::Shuffled) {
      std::mt19937_64 rng(opts_.shuffle_seed);
      std::shuffle(order.begin(), order.end(), rng);
    }

    RunResult res;
    res.bandwidth = bw;
    res.outputs.resize(n);
    res.decision_round.assign(n, 0);
    res.local_steps.assign(n, 0);
    std::vector<char> active(n, 1);
    std::vector<Inbox> inbox(n), next(n);
    for (std::size_t v = 0; v < n; ++v) {
      const std::size_t cap = model_.kind == ModelKind::Clique ? n - 1 : g_.degree(static_cast<Vertex>(v));
      inbox[v].reserve(cap);
      next[v].reserve(cap);
    }
    std::vector<std::vector<std::pair<NodeId, Message>>> outbox(n);
    std::vector<std::uint32_t> traffic;
    const bool dense_traffic = opts_.record_traffic && n <= 4096;
    if (dense_traffic) traffic.assign(n * n, 0);
    std::size_t remaining = n;
    NodeContext ctx;

    for (std::size_t round = 0;; ++round) {
      if (round > opts_.round_cap)
        throw RoundCapExceeded(std::to_string(remaining) + " node(s) still running after round " +
                               std::to_string(opts_.round_cap));
      for (Vertex v : order) {
        if (!active[v]) continue;
        ctx.view_ = &views_[v];
        ctx.round_ = round;
        ctx.out_.clear();
        ctx.decided_ = false;
        ctx.seed_ = opts_.seed;
        ctx.draws_ = 0;
        ctx.steps_ = 0;
        ctx.budget_.reset();
        if (opts_.fully_polynomial) {
          std::size_t bits = view_input_bits(views_[v]);
          for (const auto& [from, m] : inbox[v]) bits += m.bits();
          ctx.budget_ = 64 * bits * bits;
        }
        programs[v]->step(ctx, inbox[v]);
        res.local_steps[v] += ctx.steps_;
        std::swap(outbox[v], ctx.out_);
        if (ctx.decided_) {
          active[v] = 0;
          --remaining;
          res.outputs[v] = {g_.id(v), ctx.output_};
          res.decision_round[v] = round;
          res.rounds_used = std::max(res.rounds_used, round);
        }
      }
      for (auto& box : next) box.clear();
      for (Vertex v = 0; v < n; ++v) {
        for (auto& [to, msg] : outbox[v]) {
          auto w = g_.find(to);
          if (!w || *w == v) throw IllegalRecipient("node " + std::to_string(g_.id(v)) + " -> " + std::to_string(to));
          if (model_.kind != ModelKind::Clique && !g_.adjacent(v, *w))
            throw IllegalRecipient("node " + std::to_string(g_.id(v)) + " -> non-neighbor " + std::to_string(to));
          if (bw && msg.bits() > bw) throw BandwidthViolation(g_.id(v), round, msg.bits(), bw);
          res.max_message_bits = std::max(res.max_message_bits, msg.bits());
          ++res.total_messages;
          if (dense_traffic) ++traffic[std::min<std::size_t>(v, *w) * n + std::max<std::size_t>(v, *w)];
          if (active[*w]) next[*w].emplace_back(g_.id(v), std::move(msg));
        }
        outbox[v].clear();
      }
      std::swap(inbox, next);
      if (remaining == 0) break;
    }
    res.verdict = std::any_of(res.outputs.begin(), res.outputs.end(), [](const auto& o) { return o.second; });
    if (dense_traffic)
      for (std::size_t u = 0; u < n; ++u)
        for (std::size_t w = u + 1; w < n; ++w)
          if (traffic[u * n + w]) res.edge_congestion[{g_.id(static_cast<Vertex>(u)), g_.id(static_cast<Vertex>(w))}] = traffic[u * n + w];
    return res;
  }

  const std::vector<NodeView>& views() const { return views_; }

 private:
  Model model_;
  const ColoredGraph& g_;
  std::size_t k_;
  RunOptions opts_;
  std::vector<NodeView> views_;
};

inline RunResult run(const Model& model, const ColoredGraph& g, const NodeAlgorithm& alg, std::size_t k,
                     std::size_t round_cap = 100000, RunOptions opts = {}) {
  opts.round_cap = round_cap;
  return Engine(model, g, k, opts).run(alg);
}

// ---------------------------------------------------------------- gathering

// What a node tells others about itself: id, colors, adjacency and the
// labels of its outgoing incident pairs.
struct NodeRecord {
  NodeId id = 0;
  std::vector<std::size_t> colors;
  boost::container::small_vector<NodeId, 8> neighbors;
  std::vector<std::vector<std::size_t>> out_labels;  // parallel to neighbors
};

inline void write_record(Message& m, const NodeRecord& r) {
  m.put_gamma(r.id);
  m.put_gamma(r.colors.size());
  for (auto c : r.colors) m.put_gamma(c);
  m.put_gamma(r.neighbors.size());
  m.put_flag(!r.out_labels.empty());
  for (std::size_t i = 0; i < r.neighbors.size(); ++i) {
    m.put_gamma(r.neighbors[i]);
    if (!r.out_labels.empty()) {
      m.put_gamma(r.out_labels[i].size());
      for (auto l : r.out_labels[i]) m.put_gamma(l);
    }
  }
}

inline NodeRecord read_record(MessageReader& rd) {
  NodeRecord r;
  r.id = rd.get_gamma();
  r.colors.resize(rd.get_gamma());
  for (auto& c : r.colors) c = rd.get_gamma();
  r.neighbors.resize(rd.get_gamma());
  bool labeled = rd.get_flag();
  if (labeled) r.out_labels.resize(r.neighbors.size());
  for (std::size_t i = 0; i < r.neighbors.size(); ++i) {
    r.neighbors[i] = rd.get_gamma();
    if (labeled) {
      r.out_labels[i].resize(rd.get_gamma());
      for (auto& l : r.out_labels[i]) l = rd.get_gamma();
    }
  }
  return r;
}

// Neighborhood-exchange protocol: every round each node forwards the records
// it learned in the previous round to all neighbors. After round r the
// records of all nodes within distance r are known.
class BallGatherer {
 public:
  void init(const NodeView& view) {
    if (view.model != ModelKind::Local) throw NotAvailableInModel("ball gathering needs the LOCAL model");
    view_ = &view;
    records_.reserve(16);
    encoded_.reserve(16);
    index_.reserve(16);
    pending_.reserve(16);
    NodeRecord own{view.id, view.colors, {view.neighbors.begin(), view.neighbors.end()}, {}};
    if (!view.labels.empty())
      for (const auto& l : view.labels) own.out_labels.push_back(l.out);
    add(std::move(own));
  }

  // Absorb this round's inbox and forward what is new.
  void step(NodeContext& ctx, const Inbox& inbox) {
    const std::size_t fresh = records_.size();
    for (const auto& [from, msg] : inbox) {
      MessageReader rd(msg);
      std::size_t count = rd.get_gamma();
      for (std::size_t i = 0; i < count; ++i) {
        NodeId id = rd.get_gamma();
        std::size_t len = rd.get_gamma();
        if (find_index(id)) {
          rd.skip(len);
          continue;
        }
        const std::size_t at = rd.position();
        NodeRecord r = read_record(rd);
        add(std::move(r), msg.slice(at, len));
      }
    }
    const std::size_t begin = ctx.round() == 0 ? 0 : fresh;
    if (begin == records_.size()) return;
    Message m;
    m.put_gamma(records_.size() - begin);
    for (std::size_t i = begin; i < records_.size(); ++i) {
      m.put_gamma(records_[i].id);
      m.put_gamma(encoded_[i].bits());
      m.append(encoded_[i]);
    }
    ctx.send_all_neighbors(m);
  }

  // True once the known records are closed under adjacency.
  bool complete() const { return pending_.empty(); }
  const std::vector<NodeRecord>& records() const { return records_; }

  // Known nodes within `radius` of the owner, as a dense graph in id order.
  struct Local {
    std::vector<NodeId> ids;
    BitGraph adj;
    std::vector<std::vector<std::size_t>> colors;
    std::size_t self = 0;
  };
  Local local(std::size_t radius = kUnreachable) const {
    std::vector<std::size_t> keep = within(radius);
    std::vector<std::pair<NodeId, std::size_t>> order;
    order.reserve(keep.size());
    for (auto i : keep) order.emplace_back(records_[i].id, i);
    std::sort(order.begin(), order.end());
    Local out;
    out.adj = BitGraph(order.size());
    out.ids.reserve(order.size());
    out.colors.reserve(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      out.ids.push_back(order[i].first);
      out.colors.push_back(records_[order[i].second].colors);
    }
    auto pos = [&](NodeId w) -> std::optional<std::size_t> {
      auto it = std::lower_bound(out.ids.begin(), out.ids.end(), w);
      if (it == out.ids.end() || *it != w) return std::nullopt;
      return static_cast<std::size_t>(it - out.ids.begin());
    };
    for (std::size_t i = 0; i < order.size(); ++i)
      for (NodeId w : records_[order[i].second].neighbors)
        if (auto j = pos(w); j && *j > i) out.adj.add_edge(i, *j);
    out.self = *pos(view_->id);
    return out;
  }

  // The radius-r ball as a ColoredGraph with original ids.
  Ball ball(std::size_t radius) const {
    std::vector<std::size_t> keep = within(radius);
    GraphBuilder b;
    if (view_->unary_names)
      for (const auto& nm : *view_->unary_names) b.unary(nm);
    if (view_->binary_names)
      for (const auto& nm : *view_->binary_names) b.binary(nm);
    std::unordered_set<NodeId> inside;
    for (auto i : keep) inside.insert(records_[i].id);
    for (auto i : keep) {
      const auto& r = records_[i];
      std::vector<std::string> cs;
      for (auto c : r.colors) cs.push_back((*view_->unary_names)[c]);
      b.node(r.id, cs);
      for (std::size_t j = 0; j < r.neighbors.size(); ++j) {
        NodeId w = r.neighbors[j];
        if (!inside.count(w)) continue;
        if (r.id < w) b.edge(r.id, w);
        if (!r.out_labels.empty())
          for (auto l : r.out_labels[j]) b.relation((*view_->binary_names)[l], r.id, w);
      }
    }
    return Ball{view_->id, radius, b.build(false)};
  }

 private:
  std::optional<std::size_t> find_index(NodeId id) const {
    auto it = std::lower_bound(index_.begin(), index_.end(), std::pair<NodeId, std::size_t>{id, 0});
    if (it == index_.end() || it->first != id) return std::nullopt;
    return it->second;
  }

  void add(NodeRecord r, std::optional<Message> encoded = std::nullopt) {
    if (auto it = std::lower_bound(pending_.begin(), pending_.end(), r.id); it != pending_.end() && *it == r.id)
      pending_.erase(it);
    index_.insert(std::lower_bound(index_.begin(), index_.end(), std::pair<NodeId, std::size_t>{r.id, 0}),
                  {r.id, records_.size()});
    for (NodeId w : r.neighbors)
      if (!find_index(w)) {
        auto it = std::lower_bound(pending_.begin(), pending_.end(), w);
        if (it == pending_.end() || *it != w) pending_.insert(it, w);
      }
    if (encoded) {
      encoded_.push_back(std::move(*encoded));
    } else {
      encoded_.emplace_back();
      write_record(encoded_.back(), r);
    }
    records_.push_back(std::move(r));
  }

  std::vector<std::size_t> within(std::size_t radius) const {
    if (radius == kUnreachable) {
      std::vector<std::size_t> all(records_.size());
      std::iota(all.begin(), all.end(), std::size_t{0});
      return all;
    }
    std::vector<std::size_t> dist(records_.size(), kUnreachable);
    std::size_t self = *find_index(view_->id);
    std::vector<std::size_t> queue{self};
    dist[self] = 0;
    for (std::size_t h = 0; h < queue.size(); ++h) {
      const auto& r = records_[queue[h]];
      std::size_t d = dist[queue[h]];
      if (d >= radius) continue;
      for (NodeId w : r.neighbors) {
        auto i = find_index(w);
        if (!i || dist[*i] != kUnreachable) continue;
        dist[*i] = d + 1;
        queue.push_back(*i);
      }
    }
    return queue;
  }

  const NodeView* view_ = nullptr;
  std::vector<NodeRecord> records_;
  std::vector<Message> encoded_;  // write_record of each record
  std::vector<std::pair<NodeId, std::size_t>> index_;  // sorted by id
  std::vector<NodeId> pending_;                        // sorted
};

// Gathers for `radius` rounds and hands the ball to `decide`.
inline NodeAlgorithm gather_ball_algorithm(std::string name, std::size_t radius,
                                           std::function<bool(const Ball&, const NodeView&)> decide) {
  struct Program : NodeProgram {
    std::size_t radius;
    std::function<bool(const Ball&, const NodeView&)> decide;
    BallGatherer gather;
    const NodeView* view = nullptr;
    void init(const NodeView& v) override {
      view = &v;
      gather.init(v);
    }
    void step(NodeContext& ctx, const Inbox& inbox) override {
      gather.step(ctx, inbox);
      if (ctx.round() == radius) ctx.decide(decide(gather.ball(radius), *view));
    }
  };
  NodeAlgorithm alg;
  alg.name = std::move(name);
  alg.make = [radius, decide]() {
    auto p = std::make_unique<Program>();
    p->radius = radius;
    p->decide = decide;
    return p;
  };
  alg.round_bound = [radius](std::size_t) { return std::optional<std::size_t>(radius); };
  return alg;
}

// Every node floods the minimum id it has seen for `rounds` rounds, then
// accepts iff it is the minimum and carries P1. Works in every model.
inline NodeAlgorithm flood_min_id(std::size_t rounds) {
  struct Program : NodeProgram {
    std::size_t rounds = 0;
    NodeId best = 0;
    bool colored = false;
    void init(const NodeView& v) override {
      best = v.id;
      colored = v.has_color(0);
    }
    void step(NodeContext& ctx, const Inbox& inbox) override {
      NodeId before = best;
      for (const auto& [from, m] : inbox) {
        MessageReader rd(m);
        best = std::min<NodeId>(best, rd.get_gamma());
      }
      if (ctx.round() == rounds) {
        ctx.decide(best == ctx.view().id && colored);
        return;
      }
      if (ctx.round() == 0 || best != before) {
        Message m;
        m.put_gamma(best);
        ctx.send_all_neighbors(m);
      }
    }
  };
  NodeAlgorithm alg;
  alg.name = "flood-min-id";
  alg.make = [rounds]() {
    auto p = std::make_unique<Program>();
    p->rounds = rounds;
    return p;
  };
  alg.round_bound = [rounds](std::size_t) { return std::optional<std::size_t>(rounds); };
  return alg;
}

inline NodeAlgorithm accept_immediately() {
  struct Program : NodeProgram {
    void step(NodeContext& ctx, const Inbox&) override { ctx.decide(true); }
  };
  NodeAlgorithm alg;
  alg.name = "accept";
  alg.make = [] { return std::make_unique<Program>(); };
  alg.round_bound = [](std::size_t) { return std::optional<std::size_t>(0); };
  return alg;
}

}  // namespace dpc
