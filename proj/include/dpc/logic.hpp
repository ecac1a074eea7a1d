#pragma once
#include <boost/multiprecision/cpp_int.hpp>
#include <cctype>
#include <functional>
#include <memory>
#include <set>
#include <unordered_map>

#include "graph.hpp"

namespace dpc {

using BigNat = boost::multiprecision::cpp_int;

struct FormulaNode;
using Formula = std::shared_ptr<const FormulaNode>;

enum class FormulaKind { Equal, Unary, Binary, Not, And, Or, Exists, Forall };

// Unary: pred is the 0-based index of P<pred+1>.
// Binary: rel 0 is the distinguished E, rel j >= 1 is E<j>.
struct FormulaNode {
  FormulaKind kind;
  std::string a, b;  // atom variables, or bound variable in `a`
  std::size_t index = 0;
  std::vector<Formula> kids;
};

namespace fo {

inline Formula make(FormulaKind k, std::string a = {}, std::string b = {}, std::size_t index = 0,
                    std::vector<Formula> kids = {}) {
  return std::make_shared<const FormulaNode>(FormulaNode{k, std::move(a), std::move(b), index, std::move(kids)});
}
inline Formula eq(std::string x, std::string y) { return make(FormulaKind::Equal, std::move(x), std::move(y)); }
inline Formula pred(std::size_t p, std::string x) { return make(FormulaKind::Unary, std::move(x), {}, p); }
inline Formula rel(std::size_t r, std::string x, std::string y) {
  return make(FormulaKind::Binary, std::move(x), std::move(y), r);
}
inline Formula neg(Formula f) { return make(FormulaKind::Not, {}, {}, 0, {std::move(f)}); }
inline Formula conj(Formula f, Formula g) { return make(FormulaKind::And, {}, {}, 0, {std::move(f), std::move(g)}); }
inline Formula disj(Formula f, Formula g) { return make(FormulaKind::Or, {}, {}, 0, {std::move(f), std::move(g)}); }
inline Formula exists(std::string v, Formula f) { return make(FormulaKind::Exists, std::move(v), {}, 0, {std::move(f)}); }
inline Formula forall(std::string v, Formula f) { return make(FormulaKind::Forall, std::move(v), {}, 0, {std::move(f)}); }
inline Formula implies(Formula f, Formula g) { return disj(neg(std::move(f)), std::move(g)); }

// Left-nested fold; an empty list yields `empty`.
inline Formula conj_all(const std::vector<Formula>& fs, Formula empty) {
  if (fs.empty()) return empty;
  Formula acc = fs[0];
  for (std::size_t i = 1; i < fs.size(); ++i) acc = conj(acc, fs[i]);
  return acc;
}
inline Formula disj_all(const std::vector<Formula>& fs, Formula empty) {
  if (fs.empty()) return empty;
  Formula acc = fs[0];
  for (std::size_t i = 1; i < fs.size(); ++i) acc = disj(acc, fs[i]);
  return acc;
}
inline Formula truth(const std::string& v) { return eq(v, v); }
inline Formula falsity(const std::string& v) { return neg(eq(v, v)); }

}  // namespace fo

inline bool is_quantifier(const Formula& f) { return f->kind == FormulaKind::Exists || f->kind == FormulaKind::Forall; }
inline bool is_atom(const Formula& f) { return f->kind <= FormulaKind::Binary; }

inline bool quantifier_free(const Formula& f) {
  if (is_quantifier(f)) return false;
  for (const auto& k : f->kids)
    if (!quantifier_free(k)) return false;
  return true;
}

inline bool formulas_equal(const Formula& f, const Formula& g) {
  if (f->kind != g->kind || f->a != g->a || f->b != g->b || f->index != g->index || f->kids.size() != g->kids.size())
    return false;
  for (std::size_t i = 0; i < f->kids.size(); ++i)
    if (!formulas_equal(f->kids[i], g->kids[i])) return false;
  return true;
}

inline std::set<std::string> free_vars(const Formula& f) {
  switch (f->kind) {
    case FormulaKind::Equal:
    case FormulaKind::Binary: return {f->a, f->b};
    case FormulaKind::Unary: return {f->a};
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
      auto s = free_vars(f->kids[0]);
      s.erase(f->a);
      return s;
    }
    default: {
      std::set<std::string> s;
      for (const auto& k : f->kids) {
        auto t = free_vars(k);
        s.insert(t.begin(), t.end());
      }
      return s;
    }
  }
}

inline std::size_t formula_size(const Formula& f) {
  std::size_t s = 1;
  for (const auto& k : f->kids) s += formula_size(k);
  return s;
}

inline std::string to_string(const Formula& f);

namespace detail {
inline std::string operand_string(const Formula& f) {
  return (is_quantifier(f) || f->kind == FormulaKind::Equal) ? "(" + to_string(f) + ")" : to_string(f);
}
}  // namespace detail

inline std::string to_string(const Formula& f) {
  switch (f->kind) {
    case FormulaKind::Equal: return f->a + " = " + f->b;
    case FormulaKind::Unary: return "P" + std::to_string(f->index + 1) + "(" + f->a + ")";
    case FormulaKind::Binary:
      return (f->index == 0 ? std::string("E") : "E" + std::to_string(f->index)) + "(" + f->a + "," + f->b + ")";
    case FormulaKind::Not: return "~" + detail::operand_string(f->kids[0]);
    case FormulaKind::And:
      return "(" + detail::operand_string(f->kids[0]) + " & " + detail::operand_string(f->kids[1]) + ")";
    case FormulaKind::Or:
      return "(" + detail::operand_string(f->kids[0]) + " | " + detail::operand_string(f->kids[1]) + ")";
    case FormulaKind::Exists: return "exists " + f->a + ". " + to_string(f->kids[0]);
    case FormulaKind::Forall: return "forall " + f->a + ". " + to_string(f->kids[0]);
  }
  return {};
}

// ---------------------------------------------------------------- parsing

namespace detail {

class FormulaParser {
 public:
  explicit FormulaParser(std::string_view text) : text_(text) {}

  Formula parse() {
    Formula f = parse_or();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& m) const {
    std::size_t line = 1 + static_cast<std::size_t>(std::count(text_.begin(), text_.begin() + static_cast<long>(pos_), '\n'));
    throw ParseError(line, m + " at offset " + std::to_string(pos_));
  }
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }
  std::string ident() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    if (start == pos_) fail("expected identifier");
    return std::string(text_.substr(start, pos_ - start));
  }
  std::string variable() {
    auto v = ident();
    if (v == "exists" || v == "forall" || !(std::islower(static_cast<unsigned char>(v[0])) || v[0] == '_'))
      fail("bad variable name '" + v + "'");
    return v;
  }
  bool peek_keyword(std::string_view kw) {
    skip_ws();
    if (text_.substr(pos_, kw.size()) != kw) return false;
    std::size_t end = pos_ + kw.size();
    return end == text_.size() || !(std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_');
  }

  Formula parse_or() {
    Formula f = parse_and();
    while (eat('|')) f = fo::disj(f, parse_and());
    return f;
  }
  Formula parse_and() {
    Formula f = parse_unary();
    while (eat('&')) f = fo::conj(f, parse_unary());
    return f;
  }
  Formula parse_unary() {
    if (eat('~')) return fo::neg(parse_unary());
    for (auto [kw, kind] : {std::pair{"exists", FormulaKind::Exists}, std::pair{"forall", FormulaKind::Forall}}) {
      if (peek_keyword(kw)) {
        pos_ += std::string_view(kw).size();
        std::string v = variable();
        expect('.');
        return fo::make(kind, v, {}, 0, {parse_or()});
      }
    }
    if (eat('(')) {
      Formula f = parse_or();
      expect(')');
      return f;
    }
    skip_ws();
    std::size_t save = pos_;
    std::string name = ident();
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      ++pos_;
      std::string x = variable();
      if (name[0] == 'P') {
        auto k = pinned_index(name, 'P');
        if (!k) fail("unknown predicate '" + name + "'");
        expect(')');
        return fo::pred(*k - 1, x);
      }
      if (name[0] == 'E') {
        std::size_t r = 0;
        if (name != "E") {
          auto k = pinned_index(name, 'E');
          if (!k) fail("unknown relation '" + name + "'");
          r = *k;
        }
        expect(',');
        std::string y = variable();
        expect(')');
        return fo::rel(r, x, y);
      }
      fail("unknown predicate '" + name + "'");
    }
    pos_ = save;
    std::string x = variable();
    expect('=');
    std::string y = variable();
    return fo::eq(x, y);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Formula parse_formula(std::string_view text) { return detail::FormulaParser(text).parse(); }

inline void check_vocabulary(const Formula& f, std::size_t s, std::size_t t) {
  if (f->kind == FormulaKind::Unary && f->index >= s)
    throw UnknownPredicate("P" + std::to_string(f->index + 1) + " with s=" + std::to_string(s));
  if (f->kind == FormulaKind::Binary && f->index > t)
    throw UnknownPredicate("E" + std::to_string(f->index) + " with t=" + std::to_string(t));
  for (const auto& k : f->kids) check_vocabulary(k, s, t);
}

inline Formula parse_formula(std::string_view text, const ColoredGraph& vocabulary) {
  Formula f = parse_formula(text);
  check_vocabulary(f, vocabulary.unary_count(), vocabulary.binary_count());
  return f;
}

inline void require_sentence(const Formula& f) {
  auto fv = free_vars(f);
  if (!fv.empty()) throw UnboundVariable("free variable '" + *fv.begin() + "'");
}

inline Formula parse_sentence(std::string_view text) {
  Formula f = parse_formula(text);
  require_sentence(f);
  return f;
}

// ---------------------------------------------------------------- fragments

struct Fragment {
  enum class Side { Sigma, Pi };
  Side side = Side::Sigma;
  std::size_t t = 0;  // number of quantifier blocks
  bool sigma_t1 = false;
  std::vector<std::size_t> blocks;

  std::string to_string() const {
    std::string s = (side == Side::Sigma ? "Sigma(" : "Pi(") + std::to_string(t) + ")";
    if (sigma_t1) s += ", SigmaT1(" + std::to_string(t) + ")";
    return s;
  }
};

struct Prenex {
  std::vector<std::pair<FormulaKind, std::string>> prefix;
  Formula matrix;
};

inline Prenex split_prenex(const Formula& f) {
  Prenex p;
  Formula cur = f;
  while (is_quantifier(cur)) {
    p.prefix.emplace_back(cur->kind, cur->a);
    cur = cur->kids[0];
  }
  if (!quantifier_free(cur)) throw NotPrenex("quantifier below a connective");
  p.matrix = cur;
  return p;
}

inline Formula join_prenex(const Prenex& p) {
  Formula f = p.matrix;
  for (auto it = p.prefix.rbegin(); it != p.prefix.rend(); ++it) f = fo::make(it->first, it->second, {}, 0, {f});
  return f;
}

inline Fragment classify(const Formula& f) {
  auto p = split_prenex(f);
  Fragment fr;
  for (std::size_t i = 0; i < p.prefix.size(); ++i) {
    if (i == 0 || p.prefix[i].first != p.prefix[i - 1].first)
      fr.blocks.push_back(1);
    else
      ++fr.blocks.back();
  }
  fr.t = fr.blocks.size();
  fr.side = (!p.prefix.empty() && p.prefix[0].first == FormulaKind::Forall) ? Fragment::Side::Pi : Fragment::Side::Sigma;
  fr.sigma_t1 = fr.side == Fragment::Side::Sigma &&
                std::all_of(fr.blocks.begin() + (fr.blocks.empty() ? 0 : 1), fr.blocks.end(), [](auto b) { return b <= 1; });
  return fr;
}

// Membership in Sigma_{t,1}, counting an absent leading existential block.
inline bool in_sigma_t1(const Fragment& fr, std::size_t t) {
  if (fr.side == Fragment::Side::Sigma) return fr.t <= t && fr.sigma_t1;
  return fr.t + 1 <= t && std::all_of(fr.blocks.begin(), fr.blocks.end(), [](auto b) { return b <= 1; });
}

// ---------------------------------------------------------------- normal forms

inline Formula nnf(const Formula& f, bool negate = false) {
  switch (f->kind) {
    case FormulaKind::Not: return nnf(f->kids[0], !negate);
    case FormulaKind::And:
    case FormulaKind::Or: {
      bool is_and = (f->kind == FormulaKind::And) != negate;
      auto l = nnf(f->kids[0], negate), r = nnf(f->kids[1], negate);
      return is_and ? fo::conj(l, r) : fo::disj(l, r);
    }
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
      bool ex = (f->kind == FormulaKind::Exists) != negate;
      return ex ? fo::exists(f->a, nnf(f->kids[0], negate)) : fo::forall(f->a, nnf(f->kids[0], negate));
    }
    default: return negate ? fo::neg(f) : f;
  }
}

struct Literal {
  bool positive = true;
  Formula atom;
};
using Conjunct = std::vector<Literal>;

// Disjunctive normal form of a quantifier-free formula.
inline std::vector<Conjunct> dnf(const Formula& f) {
  if (!quantifier_free(f)) throw NotPrenex("dnf needs a quantifier-free formula");
  std::function<std::vector<Conjunct>(const Formula&)> go = [&](const Formula& g) -> std::vector<Conjunct> {
    switch (g->kind) {
      case FormulaKind::Not: return {{Literal{false, g->kids[0]}}};
      case FormulaKind::Or: {
        auto l = go(g->kids[0]), r = go(g->kids[1]);
        l.insert(l.end(), r.begin(), r.end());
        return l;
      }
      case FormulaKind::And: {
        auto l = go(g->kids[0]), r = go(g->kids[1]);
        std::vector<Conjunct> out;
        for (const auto& a : l)
          for (const auto& b : r) {
            Conjunct c = a;
            c.insert(c.end(), b.begin(), b.end());
            out.push_back(std::move(c));
          }
        return out;
      }
      default: return {{Literal{true, g}}};
    }
  };
  return go(nnf(f));
}

inline Formula from_dnf(const std::vector<Conjunct>& d, const std::string& any_var) {
  std::vector<Formula> ds;
  for (const auto& c : d) {
    std::vector<Formula> ls;
    for (const auto& l : c) ls.push_back(l.positive ? l.atom : fo::neg(l.atom));
    ds.push_back(fo::conj_all(ls, fo::truth(any_var)));
  }
  return fo::disj_all(ds, fo::falsity(any_var));
}

// Negation of a prenex formula, again prenex: quantifiers dualized, matrix in NNF.
inline Formula negate_prenex(const Formula& f) {
  auto p = split_prenex(f);
  for (auto& q : p.prefix) q.first = q.first == FormulaKind::Exists ? FormulaKind::Forall : FormulaKind::Exists;
  p.matrix = nnf(p.matrix, true);
  return join_prenex(p);
}

// Rename variable occurrences according to `map` (free occurrences only).
inline Formula rename_free(const Formula& f, const std::map<std::string, std::string>& map) {
  auto sub = [&](const std::string& v) {
    auto it = map.find(v);
    return it == map.end() ? v : it->second;
  };
  switch (f->kind) {
    case FormulaKind::Equal:
    case FormulaKind::Binary:
    case FormulaKind::Unary: return fo::make(f->kind, sub(f->a), f->b.empty() ? f->b : sub(f->b), f->index);
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
      auto inner = map;
      inner.erase(f->a);
      return fo::make(f->kind, f->a, {}, 0, {rename_free(f->kids[0], inner)});
    }
    default: {
      std::vector<Formula> kids;
      for (const auto& k : f->kids) kids.push_back(rename_free(k, map));
      return fo::make(f->kind, {}, {}, 0, kids);
    }
  }
}

// ---------------------------------------------------------------- encoding

// Bound variables renamed x1, x2, ... in binding order; free names kept.
inline Formula canonical_form(const Formula& f) {
  auto fv = free_vars(f);
  std::size_t counter = 0;
  auto fresh = [&]() {
    std::string v;
    do v = "x" + std::to_string(++counter);
    while (fv.count(v));
    return v;
  };
  std::function<Formula(const Formula&, const std::map<std::string, std::string>&)> go =
      [&](const Formula& g, const std::map<std::string, std::string>& env) -> Formula {
    auto sub = [&](const std::string& v) {
      auto it = env.find(v);
      return it == env.end() ? v : it->second;
    };
    switch (g->kind) {
      case FormulaKind::Equal:
      case FormulaKind::Binary:
      case FormulaKind::Unary: return fo::make(g->kind, sub(g->a), g->b.empty() ? g->b : sub(g->b), g->index);
      case FormulaKind::Exists:
      case FormulaKind::Forall: {
        auto inner = env;
        inner[g->a] = fresh();
        auto name = inner[g->a];
        return fo::make(g->kind, name, {}, 0, {go(g->kids[0], inner)});
      }
      default: {
        std::vector<Formula> kids;
        for (const auto& k : g->kids) kids.push_back(go(k, env));
        return fo::make(g->kind, {}, {}, 0, kids);
      }
    }
  };
  return go(f, {});
}

inline std::string canonical_string(const Formula& f) { return to_string(canonical_form(f)); }

// num(w) for a bit string w: value of "1"+w in binary, minus one.
inline BigNat num_bits(std::string_view bits) {
  BigNat v = 1;
  for (char c : bits) v = (v << 1) | (c == '1' ? 1 : 0);
  return v - 1;
}

inline std::string bits_of_num(const BigNat& n) {
  BigNat v = n + 1;
  std::string bits;
  while (v > 1) {
    bits.push_back(static_cast<int>(v & 1) ? '1' : '0');
    v >>= 1;
  }
  std::reverse(bits.begin(), bits.end());
  return bits;
}

inline std::string byte_bits(std::string_view s) {
  std::string bits;
  for (unsigned char c : s)
    for (int i = 7; i >= 0; --i) bits.push_back(((c >> i) & 1) ? '1' : '0');
  return bits;
}

inline BigNat encode(const Formula& f) { return num_bits(byte_bits(canonical_string(f))); }

inline std::optional<Formula> decode(const BigNat& n) {
  if (n < 0) return std::nullopt;
  std::string bits = bits_of_num(n);
  if (bits.size() % 8 != 0 || bits.empty()) return std::nullopt;
  std::string text;
  for (std::size_t i = 0; i < bits.size(); i += 8) {
    int c = 0;
    for (std::size_t j = 0; j < 8; ++j) c = (c << 1) | (bits[i + j] == '1');
    text.push_back(static_cast<char>(c));
  }
  try {
    Formula f = parse_formula(text);
    if (canonical_string(f) != text) return std::nullopt;
    return f;
  } catch (const Error&) {
    return std::nullopt;
  }
}

// ---------------------------------------------------------------- model checking

namespace detail {

struct CompiledNode {
  FormulaKind kind;
  int a = -1, b = -1;  // variable slots
  std::size_t index = 0;
  std::vector<int> kids;
};

class CompiledFormula {
 public:
  CompiledFormula(const Formula& f, const std::vector<std::string>& free_order) {
    std::map<std::string, int> env;
    for (const auto& v : free_order) env[v] = slots_++;
    root_ = compile(f, env);
  }
  int slots() const { return slots_; }

  bool eval(const ColoredGraph& g, std::vector<Vertex>& asg) const { return eval(g, asg, root_); }

 private:
  int compile(const Formula& f, std::map<std::string, int>& env) {
    CompiledNode node{f->kind, -1, -1, f->index, {}};
    auto slot = [&](const std::string& v) {
      auto it = env.find(v);
      if (it == env.end()) throw UnboundVariable("variable '" + v + "' is not bound or assigned");
      return it->second;
    };
    switch (f->kind) {
      case FormulaKind::Equal:
      case FormulaKind::Binary:
        node.a = slot(f->a);
        node.b = slot(f->b);
        break;
      case FormulaKind::Unary: node.a = slot(f->a); break;
      case FormulaKind::Exists:
      case FormulaKind::Forall: {
        auto it = env.find(f->a);
        const bool shadowed = it != env.end();
        const int saved = shadowed ? it->second : -1;
        node.a = slots_++;
        env[f->a] = node.a;
        node.kids.push_back(compile(f->kids[0], env));
        if (shadowed)
          env[f->a] = saved;
        else
          env.erase(f->a);
        break;
      }
      default:
        for (const auto& k : f->kids) node.kids.push_back(compile(k, env));
    }
    nodes_.push_back(std::move(node));
    return static_cast<int>(nodes_.size() - 1);
  }

  bool eval(const ColoredGraph& g, std::vector<Vertex>& asg, int id) const {
    const auto& n = nodes_[id];
    switch (n.kind) {
      case FormulaKind::Equal: return asg[n.a] == asg[n.b];
      case FormulaKind::Unary: return g.has_color(asg[n.a], n.index);
      case FormulaKind::Binary:
        return n.index == 0 ? g.distinguished(asg[n.a], asg[n.b]) : g.related(n.index - 1, asg[n.a], asg[n.b]);
      case FormulaKind::Not: return !eval(g, asg, n.kids[0]);
      case FormulaKind::And: return eval(g, asg, n.kids[0]) && eval(g, asg, n.kids[1]);
      case FormulaKind::Or: return eval(g, asg, n.kids[0]) || eval(g, asg, n.kids[1]);
      case FormulaKind::Exists:
        for (Vertex v = 0; v < g.order(); ++v) {
          asg[n.a] = v;
          if (eval(g, asg, n.kids[0])) return true;
        }
        return false;
      case FormulaKind::Forall:
        for (Vertex v = 0; v < g.order(); ++v) {
          asg[n.a] = v;
          if (!eval(g, asg, n.kids[0])) return false;
        }
        return true;
    }
    return false;
  }

  std::vector<CompiledNode> nodes_;
  int root_ = -1;
  int slots_ = 0;
};

}  // namespace detail

using Assignment = std::map<std::string, NodeId>;

// Exhaustive Tarskian evaluation.
inline bool model_check(const ColoredGraph& g, const Formula& f, const Assignment& assignment = {}) {
  check_vocabulary(f, g.unary_count(), g.binary_count());
  std::vector<std::string> order;
  for (const auto& [v, id] : assignment) order.push_back(v);
  detail::CompiledFormula cf(f, order);
  std::vector<Vertex> asg(static_cast<std::size_t>(cf.slots()), 0);
  std::size_t i = 0;
  for (const auto& [v, id] : assignment) asg[i++] = g.index_of(id);
  return cf.eval(g, asg);
}

// Reusable compiled check of a formula with one free variable.
class UnaryQuery {
 public:
  UnaryQuery(Formula f, std::string var) : f_(std::move(f)), cf_(f_, {std::move(var)}) {}
  bool holds(const ColoredGraph& g, Vertex v) const {
    check_vocabulary(f_, g.unary_count(), g.binary_count());
    std::vector<Vertex> asg(static_cast<std::size_t>(cf_.slots()), 0);
    asg[0] = v;
    return cf_.eval(g, asg);
  }

 private:
  Formula f_;
  detail::CompiledFormula cf_;
};

}  // namespace dpc
