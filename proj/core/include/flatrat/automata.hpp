#pragma once

// Label-generic finite automata and rational expressions. Labels only need
// equality; a few helpers additionally need operator< (noted below).

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

namespace flatrat {

using StateId = std::uint32_t;

template <class Label>
class RatExpr {
 public:
  enum class Kind { Empty, Atom, Union, Concat, Star };

  RatExpr() = default;  // Empty

  static RatExpr empty() { return RatExpr(); }
  static RatExpr atom(Label l) { return RatExpr(Kind::Atom, std::move(l), {}); }
  static RatExpr union_of(std::vector<RatExpr> cs) {
    return RatExpr(Kind::Union, std::nullopt, std::move(cs));
  }
  static RatExpr concat(std::vector<RatExpr> cs) {
    return RatExpr(Kind::Concat, std::nullopt, std::move(cs));
  }
  static RatExpr star(RatExpr c) { return RatExpr(Kind::Star, std::nullopt, {std::move(c)}); }
  /// The expression denoting the neutral element only: Star(Empty).
  static RatExpr one() { return star(empty()); }

  Kind kind() const { return node_ ? node_->kind : Kind::Empty; }
  const Label& label() const { return *node_->label; }
  const std::vector<RatExpr>& children() const {
    static const std::vector<RatExpr> none;
    return node_ ? node_->children : none;
  }
  bool is_empty_expr() const { return kind() == Kind::Empty; }
  bool is_one() const { return kind() == Kind::Star && children()[0].is_empty_expr(); }

  /// Relabels every atom; f: Label -> Label2.
  template <class F>
  auto map(F&& f) const -> RatExpr<std::decay_t<decltype(f(std::declval<const Label&>()))>> {
    using Out = RatExpr<std::decay_t<decltype(f(std::declval<const Label&>()))>>;
    switch (kind()) {
      case Kind::Empty: return Out::empty();
      case Kind::Atom: return Out::atom(f(label()));
      case Kind::Star: return Out::star(children()[0].map(f));
      case Kind::Union:
      case Kind::Concat: {
        std::vector<Out> cs;
        cs.reserve(children().size());
        for (const auto& c : children()) cs.push_back(c.map(f));
        return kind() == Kind::Union ? Out::union_of(std::move(cs)) : Out::concat(std::move(cs));
      }
    }
    return Out::empty();
  }

  /// Replaces every atom by an expression; f: Label -> RatExpr<Label2>.
  template <class F>
  auto substitute(F&& f) const -> std::decay_t<decltype(f(std::declval<const Label&>()))> {
    using Out = std::decay_t<decltype(f(std::declval<const Label&>()))>;
    switch (kind()) {
      case Kind::Empty: return Out::empty();
      case Kind::Atom: return f(label());
      case Kind::Star: return Out::star(children()[0].substitute(f));
      case Kind::Union:
      case Kind::Concat: {
        std::vector<Out> cs;
        for (const auto& c : children()) cs.push_back(c.substitute(f));
        return kind() == Kind::Union ? Out::union_of(std::move(cs)) : Out::concat(std::move(cs));
      }
    }
    return Out::empty();
  }

  template <class F>
  void for_each_atom(F&& f) const {
    if (kind() == Kind::Atom) {
      f(label());
      return;
    }
    for (const auto& c : children()) c.for_each_atom(f);
  }

  friend bool operator==(const RatExpr& a, const RatExpr& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind()) return false;
    if (a.kind() == Kind::Atom) return a.label() == b.label();
    return a.children() == b.children();
  }

 private:
  struct Node {
    Kind kind;
    std::optional<Label> label;
    std::vector<RatExpr> children;
  };

  RatExpr(Kind k, std::optional<Label> l, std::vector<RatExpr> cs)
      : node_(std::make_shared<const Node>(Node{k, std::move(l), std::move(cs)})) {}

  std::shared_ptr<const Node> node_;
};

// Simplifying constructors used when expressions are synthesized (state
// elimination); parsed expressions keep their literal shape.
template <class Label>
RatExpr<Label> simplified_union(const RatExpr<Label>& a, const RatExpr<Label>& b) {
  if (a.is_empty_expr()) return b;
  if (b.is_empty_expr()) return a;
  if (a == b) return a;
  std::vector<RatExpr<Label>> cs;
  for (const auto* e : {&a, &b}) {
    if (e->kind() == RatExpr<Label>::Kind::Union)
      cs.insert(cs.end(), e->children().begin(), e->children().end());
    else
      cs.push_back(*e);
  }
  return RatExpr<Label>::union_of(std::move(cs));
}

template <class Label>
RatExpr<Label> simplified_concat(const RatExpr<Label>& a, const RatExpr<Label>& b) {
  if (a.is_empty_expr() || b.is_empty_expr()) return RatExpr<Label>::empty();
  if (a.is_one()) return b;
  if (b.is_one()) return a;
  std::vector<RatExpr<Label>> cs;
  for (const auto* e : {&a, &b}) {
    if (e->kind() == RatExpr<Label>::Kind::Concat)
      cs.insert(cs.end(), e->children().begin(), e->children().end());
    else
      cs.push_back(*e);
  }
  return RatExpr<Label>::concat(std::move(cs));
}

template <class Label>
RatExpr<Label> simplified_star(const RatExpr<Label>& a) {
  if (a.is_empty_expr() || a.is_one()) return RatExpr<Label>::one();
  if (a.kind() == RatExpr<Label>::Kind::Star) return a;
  return RatExpr<Label>::star(a);
}

/// A finite set B(e) with e ⊆ B(e)* and e ≠ ∅ iff B(e) ≠ ∅.
template <class Label>
std::vector<Label> basis(const RatExpr<Label>& e) {
  using K = typename RatExpr<Label>::Kind;
  auto add_all = [](std::vector<Label>& out, const std::vector<Label>& in) {
    for (const auto& l : in)
      if (std::find(out.begin(), out.end(), l) == out.end()) out.push_back(l);
  };
  switch (e.kind()) {
    case K::Empty: return {};
    case K::Atom: return {e.label()};
    case K::Star: return basis(e.children()[0]);
    case K::Union: {
      std::vector<Label> out;
      for (const auto& c : e.children()) add_all(out, basis(c));
      return out;
    }
    case K::Concat: {
      std::vector<Label> out;
      for (const auto& c : e.children()) {
        auto b = basis(c);
        if (b.empty()) return {};
        add_all(out, b);
      }
      return out;
    }
  }
  return {};
}

template <class Label>
struct Transition {
  StateId from;
  std::optional<Label> label;  // nullopt: epsilon
  StateId to;
};

template <class Label>
class Nfa {
 public:
  using label_type = Label;

  Nfa() = default;
  explicit Nfa(std::size_t states) : initial_(states, 0), final_(states, 0) {}

  StateId add_state() {
    initial_.push_back(0);
    final_.push_back(0);
    return static_cast<StateId>(initial_.size() - 1);
  }
  std::size_t num_states() const { return initial_.size(); }

  void add_transition(StateId from, Label l, StateId to) {
    check(from);
    check(to);
    transitions_.push_back({from, std::move(l), to});
  }
  void add_epsilon(StateId from, StateId to) {
    check(from);
    check(to);
    transitions_.push_back({from, std::nullopt, to});
  }

  void set_initial(StateId s, bool v = true) { initial_.at(s) = v; }
  void set_final(StateId s, bool v = true) { final_.at(s) = v; }
  bool is_initial(StateId s) const { return initial_[s]; }
  bool is_final(StateId s) const { return final_[s]; }

  std::vector<StateId> initial_states() const { return collect(initial_); }
  std::vector<StateId> final_states() const { return collect(final_); }

  const std::vector<Transition<Label>>& transitions() const { return transitions_; }
  bool has_epsilon() const {
    return std::any_of(transitions_.begin(), transitions_.end(),
                       [](const auto& t) { return !t.label; });
  }

  /// Outgoing transition indices per state.
  std::vector<std::vector<std::size_t>> out_index() const {
    std::vector<std::vector<std::size_t>> out(num_states());
    for (std::size_t i = 0; i < transitions_.size(); ++i) out[transitions_[i].from].push_back(i);
    return out;
  }

  /// Copies `other` into this automaton (initial/final flags dropped) and
  /// returns the offset of its first state.
  StateId embed(const Nfa& other) {
    StateId base = static_cast<StateId>(num_states());
    for (std::size_t i = 0; i < other.num_states(); ++i) add_state();
    for (const auto& t : other.transitions_)
      transitions_.push_back({base + t.from, t.label, base + t.to});
    return base;
  }

  template <class F>
  auto map_labels(F&& f) const -> Nfa<std::decay_t<decltype(f(std::declval<const Label&>()))>> {
    Nfa<std::decay_t<decltype(f(std::declval<const Label&>()))>> out(num_states());
    for (std::size_t s = 0; s < num_states(); ++s) {
      out.set_initial(static_cast<StateId>(s), initial_[s]);
      out.set_final(static_cast<StateId>(s), final_[s]);
    }
    for (const auto& t : transitions_) {
      if (t.label)
        out.add_transition(t.from, f(*t.label), t.to);
      else
        out.add_epsilon(t.from, t.to);
    }
    return out;
  }

 private:
  void check(StateId s) const {
    if (s >= num_states()) throw std::out_of_range("transition endpoint is not a declared state");
  }
  static std::vector<StateId> collect(const std::vector<char>& flags) {
    std::vector<StateId> out;
    for (std::size_t i = 0; i < flags.size(); ++i)
      if (flags[i]) out.push_back(static_cast<StateId>(i));
    return out;
  }

  std::vector<char> initial_;
  std::vector<char> final_;
  std::vector<Transition<Label>> transitions_;
};

namespace detail {

template <class Label>
std::pair<StateId, StateId> thompson(Nfa<Label>& a, const RatExpr<Label>& e) {
  using K = typename RatExpr<Label>::Kind;
  StateId s = a.add_state();
  StateId f = a.add_state();
  switch (e.kind()) {
    case K::Empty: break;
    case K::Atom: a.add_transition(s, e.label(), f); break;
    case K::Union:
      for (const auto& c : e.children()) {
        auto [cs, cf] = thompson(a, c);
        a.add_epsilon(s, cs);
        a.add_epsilon(cf, f);
      }
      break;
    case K::Concat: {
      StateId cur = s;
      for (const auto& c : e.children()) {
        auto [cs, cf] = thompson(a, c);
        a.add_epsilon(cur, cs);
        cur = cf;
      }
      a.add_epsilon(cur, f);
      break;
    }
    case K::Star: {
      auto [cs, cf] = thompson(a, e.children()[0]);
      a.add_epsilon(s, f);
      a.add_epsilon(s, cs);
      a.add_epsilon(cf, cs);
      a.add_epsilon(cf, f);
      break;
    }
  }
  return {s, f};
}

template <class Label>
std::vector<std::vector<StateId>> epsilon_closures(const Nfa<Label>& a) {
  std::vector<std::vector<StateId>> eps(a.num_states());
  for (const auto& t : a.transitions())
    if (!t.label) eps[t.from].push_back(t.to);
  std::vector<std::vector<StateId>> clos(a.num_states());
  std::vector<char> seen(a.num_states(), 0);
  for (StateId s = 0; s < a.num_states(); ++s) {
    std::fill(seen.begin(), seen.end(), 0);
    std::vector<StateId> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      StateId u = stack.back();
      stack.pop_back();
      clos[s].push_back(u);
      for (StateId v : eps[u])
        if (!seen[v]) {
          seen[v] = 1;
          stack.push_back(v);
        }
    }
  }
  return clos;
}

}  // namespace detail

/// Thompson construction; the result has a single initial and a single final state.
template <class Label>
Nfa<Label> expr_to_nfa(const RatExpr<Label>& e) {
  Nfa<Label> a;
  auto [s, f] = detail::thompson(a, e);
  a.set_initial(s);
  a.set_final(f);
  return a;
}

/// Language-preserving removal of epsilon transitions (state set unchanged).
template <class Label>
Nfa<Label> remove_epsilon(const Nfa<Label>& a) {
  if (!a.has_epsilon()) return a;
  auto clos = detail::epsilon_closures(a);
  auto out_idx = a.out_index();
  Nfa<Label> out(a.num_states());
  for (StateId s = 0; s < a.num_states(); ++s) {
    out.set_initial(s, a.is_initial(s));
    bool fin = false;
    for (StateId u : clos[s]) {
      fin = fin || a.is_final(u);
      for (std::size_t ti : out_idx[u]) {
        const auto& t = a.transitions()[ti];
        if (t.label) out.add_transition(s, *t.label, t.to);
      }
    }
    out.set_final(s, fin);
  }
  return out;
}

/// Reachable from an initial state (forward) and co-reachable (backward).
template <class Label>
std::vector<char> useful_states(const Nfa<Label>& a) {
  std::size_t n = a.num_states();
  std::vector<std::vector<StateId>> fwd(n), bwd(n);
  for (const auto& t : a.transitions()) {
    fwd[t.from].push_back(t.to);
    bwd[t.to].push_back(t.from);
  }
  auto sweep = [n](const std::vector<StateId>& seeds, const std::vector<std::vector<StateId>>& g) {
    std::vector<char> seen(n, 0);
    std::vector<StateId> stack;
    for (StateId s : seeds)
      if (!seen[s]) {
        seen[s] = 1;
        stack.push_back(s);
      }
    while (!stack.empty()) {
      StateId u = stack.back();
      stack.pop_back();
      for (StateId v : g[u])
        if (!seen[v]) {
          seen[v] = 1;
          stack.push_back(v);
        }
    }
    return seen;
  };
  auto f = sweep(a.initial_states(), fwd);
  auto b = sweep(a.final_states(), bwd);
  for (std::size_t i = 0; i < n; ++i) f[i] = f[i] && b[i];
  return f;
}

/// Removes every state not on some initial-to-final path (states renumbered
/// in their original order).
template <class Label>
Nfa<Label> nfa_trim(const Nfa<Label>& a) {
  auto keep = useful_states(a);
  std::vector<StateId> rename(a.num_states(), 0);
  Nfa<Label> out;
  for (StateId s = 0; s < a.num_states(); ++s)
    if (keep[s]) {
      rename[s] = out.add_state();
      out.set_initial(rename[s], a.is_initial(s));
      out.set_final(rename[s], a.is_final(s));
    }
  for (const auto& t : a.transitions()) {
    if (!keep[t.from] || !keep[t.to]) continue;
    if (t.label)
      out.add_transition(rename[t.from], *t.label, rename[t.to]);
    else
      out.add_epsilon(rename[t.from], rename[t.to]);
  }
  return out;
}

template <class Label>
bool is_empty(const Nfa<Label>& a) {
  auto keep = useful_states(a);
  return std::none_of(keep.begin(), keep.end(), [](char c) { return c != 0; });
}

template <class Label>
Nfa<Label> nfa_concat(const Nfa<Label>& a, const Nfa<Label>& b) {
  Nfa<Label> out = a;
  for (StateId s = 0; s < out.num_states(); ++s) out.set_final(s, false);
  StateId base = out.embed(b);
  for (StateId f : a.final_states())
    for (StateId i : b.initial_states()) out.add_epsilon(f, base + i);
  for (StateId f : b.final_states()) out.set_final(base + f);
  return out;
}

template <class Label>
Nfa<Label> nfa_union(const Nfa<Label>& a, const Nfa<Label>& b) {
  Nfa<Label> out = a;
  StateId base = out.embed(b);
  for (StateId i : b.initial_states()) out.set_initial(base + i);
  for (StateId f : b.final_states()) out.set_final(base + f);
  return out;
}

/// An automaton accepting exactly the one-letter word `l`.
template <class Label>
Nfa<Label> nfa_atom(Label l) {
  Nfa<Label> a(2);
  a.set_initial(0);
  a.set_final(1);
  a.add_transition(0, std::move(l), 1);
  return a;
}

/// Expression for the label sequences spelled along p -> q paths that use only
/// transitions whose label passes `filter` (epsilon transitions always pass).
/// Computed by state elimination, lowest degree first.
template <class Label, class Filter>
RatExpr<Label> between_states_expr(const Nfa<Label>& a, StateId p, StateId q, Filter&& filter) {
  using E = RatExpr<Label>;
  const std::size_t n = a.num_states();
  if (p >= n || q >= n) throw std::out_of_range("between_states_expr: unknown state");
  const std::size_t src = n, dst = n + 1;
  std::vector<std::map<std::size_t, E>> out(n + 2), in(n + 2);
  auto add_edge = [&](std::size_t i, std::size_t j, const E& e) {
    auto it = out[i].find(j);
    E merged = it == out[i].end() ? e : simplified_union(it->second, e);
    out[i][j] = merged;
    in[j][i] = merged;
  };
  for (const auto& t : a.transitions()) {
    if (t.label && !filter(*t.label)) continue;
    add_edge(t.from, t.to, t.label ? E::atom(*t.label) : E::one());
  }
  add_edge(src, p, E::one());
  add_edge(q, dst, E::one());

  std::vector<char> alive(n, 1);
  for (std::size_t round = 0; round < n; ++round) {
    std::size_t best = n;
    std::size_t best_deg = 0;
    for (std::size_t s = 0; s < n; ++s) {
      if (!alive[s]) continue;
      std::size_t deg = in[s].size() + out[s].size();
      if (best == n || deg < best_deg) {
        best = s;
        best_deg = deg;
      }
    }
    const std::size_t k = best;
    alive[k] = 0;
    E loop = E::empty();
    if (auto it = out[k].find(k); it != out[k].end()) loop = it->second;
    E mid = simplified_star(loop);
    std::vector<std::pair<std::size_t, E>> ins, outs;
    for (auto& [i, e] : in[k])
      if (i != k) ins.emplace_back(i, e);
    for (auto& [j, e] : out[k])
      if (j != k) outs.emplace_back(j, e);
    for (auto& [i, e] : ins) out[i].erase(k);
    for (auto& [j, e] : outs) in[j].erase(k);
    out[k].clear();
    in[k].clear();
    for (auto& [i, ei] : ins)
      for (auto& [j, ej] : outs) add_edge(i, j, simplified_concat(simplified_concat(ei, mid), ej));
  }
  auto it = out[src].find(dst);
  return it == out[src].end() ? E::empty() : it->second;
}

/// All accepted label sequences of length <= max_len (needs operator< on labels).
template <class Label>
std::set<std::vector<Label>> bounded_words(const Nfa<Label>& a, std::size_t max_len) {
  Nfa<Label> b = remove_epsilon(a);
  auto out_idx = b.out_index();
  std::set<std::vector<Label>> words;
  std::deque<std::pair<StateId, std::vector<Label>>> queue;
  std::set<std::pair<StateId, std::vector<Label>>> seen;
  for (StateId s : b.initial_states()) {
    queue.push_back({s, {}});
    seen.insert({s, {}});
  }
  while (!queue.empty()) {
    auto [s, w] = queue.front();
    queue.pop_front();
    if (b.is_final(s)) words.insert(w);
    if (w.size() == max_len) continue;
    for (std::size_t ti : out_idx[s]) {
      const auto& t = b.transitions()[ti];
      auto w2 = w;
      w2.push_back(*t.label);
      if (seen.insert({t.to, w2}).second) queue.push_back({t.to, std::move(w2)});
    }
  }
  return words;
}

}  // namespace flatrat
