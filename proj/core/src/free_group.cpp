#include "flatrat/free_group.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <unordered_map>
#include <unordered_set>

namespace flatrat {

char to_char(Letter l) {
  static constexpr char kChars[] = {'x', 'X', 'y', 'Y'};
  return kChars[index(l)];
}

Word parse_word(std::string_view s) {
  Word w;
  for (char c : s) {
    switch (c) {
      case 'x': w.push_back(Letter::x); break;
      case 'X': w.push_back(Letter::X); break;
      case 'y': w.push_back(Letter::y); break;
      case 'Y': w.push_back(Letter::Y); break;
      default: throw Error(ErrorKind::InvalidInput, std::string("not a free-group letter: ") + c);
    }
  }
  return w;
}

std::string to_string(const Word& w) {
  std::string s;
  for (Letter l : w) s.push_back(to_char(l));
  return s;
}

bool is_reduced(const Word& w) {
  for (std::size_t i = 1; i < w.size(); ++i)
    if (w[i] == inverse(w[i - 1])) return false;
  return true;
}

Word reduce_word(const Word& w) {
  Word out;
  for (Letter l : w) {
    if (!out.empty() && out.back() == inverse(l))
      out.pop_back();
    else
      out.push_back(l);
  }
  return out;
}

Word inverse(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (auto& l : out) l = inverse(l);
  return out;
}

Mat2 phi(Letter l) {
  switch (l) {
    case Letter::x: return Mat2(1, 2, 0, 1);
    case Letter::X: return Mat2(1, -2, 0, 1);
    case Letter::y: return Mat2(1, 0, 2, 1);
    case Letter::Y: return Mat2(1, 0, -2, 1);
  }
  return Mat2::identity();
}

Mat2 phi(const Word& w) {
  Mat2 out = Mat2::identity();
  for (Letter l : w) out = out * phi(l);
  return out;
}

StateId WordNfa::add_state(Mask accept) {
  accept_.push_back(accept);
  delta_.emplace_back();
  eps_.emplace_back();
  return static_cast<StateId>(accept_.size() - 1);
}

bool WordNfa::has_epsilon() const {
  return std::any_of(eps_.begin(), eps_.end(), [](const auto& v) { return !v.empty(); });
}

std::size_t WordNfa::num_transitions() const {
  std::size_t n = 0;
  for (std::size_t s = 0; s < num_states(); ++s) {
    n += eps_[s].size();
    for (const auto& v : delta_[s]) n += v.size();
  }
  return n;
}

WordNfa word_nfa_from(const Nfa<Letter>& a) {
  WordNfa out;
  for (StateId s = 0; s < a.num_states(); ++s) out.add_state(a.is_final(s) ? 1U : 0U);
  for (StateId s : a.initial_states()) out.set_initial(s);
  for (const auto& t : a.transitions()) {
    if (t.label)
      out.add_transition(t.from, *t.label, t.to);
    else
      out.add_epsilon(t.from, t.to);
  }
  return out;
}

Nfa<Letter> to_letter_nfa(const WordNfa& a, Mask channels) {
  Nfa<Letter> out(a.num_states());
  for (StateId s : a.initial()) out.set_initial(s);
  for (StateId s = 0; s < a.num_states(); ++s) {
    out.set_final(s, (a.accept(s) & channels) != 0);
    for (Letter l : kLetters)
      for (StateId t : a.next(s, l)) out.add_transition(s, l, t);
    for (StateId t : a.epsilon(s)) out.add_epsilon(s, t);
  }
  return out;
}

namespace {

std::vector<char> forward_reach(const WordNfa& a) {
  std::vector<char> seen(a.num_states(), 0);
  std::vector<StateId> stack;
  for (StateId s : a.initial())
    if (!seen[s]) {
      seen[s] = 1;
      stack.push_back(s);
    }
  auto visit = [&](StateId t) {
    if (!seen[t]) {
      seen[t] = 1;
      stack.push_back(t);
    }
  };
  while (!stack.empty()) {
    StateId s = stack.back();
    stack.pop_back();
    for (Letter l : kLetters)
      for (StateId t : a.next(s, l)) visit(t);
    for (StateId t : a.epsilon(s)) visit(t);
  }
  return seen;
}

std::vector<std::vector<StateId>> eps_closures(const WordNfa& a) {
  const std::size_t n = a.num_states();
  std::vector<std::vector<StateId>> clos(n);
  std::vector<std::uint32_t> mark(n, 0);
  std::uint32_t stamp = 0;
  std::vector<StateId> stack;
  for (StateId s = 0; s < n; ++s) {
    ++stamp;
    stack.assign(1, s);
    mark[s] = stamp;
    while (!stack.empty()) {
      StateId u = stack.back();
      stack.pop_back();
      clos[s].push_back(u);
      for (StateId v : a.epsilon(u))
        if (mark[v] != stamp) {
          mark[v] = stamp;
          stack.push_back(v);
        }
    }
    std::sort(clos[s].begin(), clos[s].end());
  }
  return clos;
}

void check_budget(std::size_t states, const Limits& limits, const char* what) {
  if (states > limits.max_states)
    throw ResourceLimit(std::string(what) + ": state budget of " +
                        std::to_string(limits.max_states) + " exceeded");
}

void sort_unique(std::vector<StateId>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

WordNfa fg_trim(const WordNfa& a) {
  const std::size_t n = a.num_states();
  auto fwd = forward_reach(a);
  std::vector<std::vector<StateId>> rev(n);
  for (StateId s = 0; s < n; ++s) {
    for (Letter l : kLetters)
      for (StateId t : a.next(s, l)) rev[t].push_back(s);
    for (StateId t : a.epsilon(s)) rev[t].push_back(s);
  }
  std::vector<char> bwd(n, 0);
  std::vector<StateId> stack;
  for (StateId s = 0; s < n; ++s)
    if (a.accept(s)) {
      bwd[s] = 1;
      stack.push_back(s);
    }
  while (!stack.empty()) {
    StateId s = stack.back();
    stack.pop_back();
    for (StateId t : rev[s])
      if (!bwd[t]) {
        bwd[t] = 1;
        stack.push_back(t);
      }
  }
  std::vector<StateId> rename(n, 0);
  std::vector<char> keep(n, 0);
  WordNfa out;
  for (StateId s = 0; s < n; ++s)
    if (fwd[s] && bwd[s]) {
      keep[s] = 1;
      rename[s] = out.add_state(a.accept(s));
    }
  for (StateId s : a.initial())
    if (keep[s]) out.set_initial(rename[s]);
  for (StateId s = 0; s < n; ++s) {
    if (!keep[s]) continue;
    for (Letter l : kLetters)
      for (StateId t : a.next(s, l))
        if (keep[t]) out.add_transition(rename[s], l, rename[t]);
    for (StateId t : a.epsilon(s))
      if (keep[t]) out.add_epsilon(rename[s], rename[t]);
  }
  out.saturated = a.saturated;
  out.reduced_language = a.reduced_language;
  return out;
}

WordNfa fg_remove_epsilon(const WordNfa& a) {
  if (!a.has_epsilon()) return a;
  auto clos = eps_closures(a);
  WordNfa out;
  for (StateId s = 0; s < a.num_states(); ++s) {
    Mask m = 0;
    for (StateId u : clos[s]) m |= a.accept(u);
    out.add_state(m);
  }
  for (StateId s : a.initial()) out.set_initial(s);
  for (StateId s = 0; s < a.num_states(); ++s)
    for (Letter l : kLetters) {
      std::vector<StateId> targets;
      for (StateId u : clos[s]) {
        const auto& nx = a.next(u, l);
        targets.insert(targets.end(), nx.begin(), nx.end());
      }
      sort_unique(targets);
      for (StateId t : targets) out.add_transition(s, l, t);
    }
  out.saturated = a.saturated;
  out.reduced_language = a.reduced_language;
  return out;
}

WordNfa benois_saturate(const WordNfa& input, const Limits& limits) {
  if (input.saturated && !input.has_epsilon()) return input;
  WordNfa a = fg_trim(input);
  const std::size_t n = a.num_states();
  check_budget(n, limits, "benois_saturate");

  std::vector<std::array<std::vector<StateId>, 4>> pred(n);
  for (StateId s = 0; s < n; ++s)
    for (Letter l : kLetters)
      for (StateId t : a.next(s, l)) pred[t][index(l)].push_back(s);

  std::unordered_set<std::uint64_t> eps_edges;
  for (StateId s = 0; s < n; ++s)
    for (StateId t : a.epsilon(s)) eps_edges.insert((std::uint64_t{s} << 32) | t);

  // Add p1 -eps-> q1 whenever p1 -l-> r1 =eps=> r2 -l^-1-> q1, until closed.
  for (;;) {
    auto clos = eps_closures(a);
    bool changed = false;
    for (StateId r1 = 0; r1 < n; ++r1)
      for (Letter l : kLetters) {
        const auto& preds = pred[r1][index(l)];
        if (preds.empty()) continue;
        for (StateId r2 : clos[r1])
          for (StateId q1 : a.next(r2, inverse(l)))
            for (StateId p1 : preds) {
              if (std::binary_search(clos[p1].begin(), clos[p1].end(), q1)) continue;
              if (eps_edges.insert((std::uint64_t{p1} << 32) | q1).second) {
                a.add_epsilon(p1, q1);
                changed = true;
              }
            }
      }
    if (eps_edges.size() > limits.max_states * 16)
      throw ResourceLimit("benois_saturate: transition budget exceeded");
    if (!changed) break;
  }
  WordNfa out = fg_remove_epsilon(a);
  out.saturated = true;
  out.reduced_language = false;
  return out;
}

WordNfa fg_restrict_reduced(const WordNfa& a) {
  const WordNfa& b = a.has_epsilon() ? fg_remove_epsilon(a) : a;
  // Product with the "last letter" automaton; 4 marks the empty prefix.
  constexpr std::uint32_t kNone = 4;
  std::unordered_map<std::uint64_t, StateId> ids;
  std::deque<std::pair<StateId, std::uint32_t>> queue;
  WordNfa out;
  auto intern = [&](StateId s, std::uint32_t last) {
    std::uint64_t key = (std::uint64_t{s} << 3) | last;
    auto [it, fresh] = ids.emplace(key, 0);
    if (fresh) {
      it->second = out.add_state(b.accept(s));
      queue.emplace_back(s, last);
    }
    return it->second;
  };
  for (StateId s : b.initial()) out.set_initial(intern(s, kNone));
  while (!queue.empty()) {
    auto [s, last] = queue.front();
    queue.pop_front();
    StateId from = ids.at((std::uint64_t{s} << 3) | last);
    for (Letter l : kLetters) {
      if (last != kNone && l == inverse(static_cast<Letter>(last))) continue;
      for (StateId t : b.next(s, l)) {
        StateId to = intern(t, static_cast<std::uint32_t>(index(l)));
        out.add_transition(from, l, to);
      }
    }
  }
  out.saturated = true;
  out.reduced_language = true;
  return fg_trim(out);
}

WordNfa fg_normalize(const WordNfa& a, const Limits& limits) {
  if (a.reduced_language && !a.has_epsilon()) return a;
  return fg_restrict_reduced(benois_saturate(a, limits));
}

WordNfa fg_minimize(const WordNfa& a0, std::size_t max_dfa_states) {
  if (!a0.reduced_language) throw Error(ErrorKind::InvalidInput, "fg_minimize needs a reduced-word automaton");
  const WordNfa a = fg_trim(a0.has_epsilon() ? fg_remove_epsilon(a0) : a0);
  constexpr std::uint32_t kDead = std::numeric_limits<std::uint32_t>::max();

  // Subset construction; only nonempty subsets are kept, so the DFA is partial.
  std::map<std::vector<StateId>, std::uint32_t> ids;
  std::vector<const std::vector<StateId>*> subsets;
  std::vector<Mask> mask;
  std::vector<std::array<std::uint32_t, 4>> delta;
  auto intern = [&](std::vector<StateId> s) -> std::uint32_t {
    sort_unique(s);
    if (s.empty()) return kDead;
    auto [it, fresh] = ids.emplace(std::move(s), static_cast<std::uint32_t>(subsets.size()));
    if (fresh) {
      Mask m = 0;
      for (StateId q : it->first) m |= a.accept(q);
      subsets.push_back(&it->first);
      mask.push_back(m);
      delta.push_back({kDead, kDead, kDead, kDead});
    }
    return it->second;
  };
  std::uint32_t start = intern(a.initial());
  if (start == kDead) {
    WordNfa out;
    out.saturated = out.reduced_language = true;
    return out;
  }
  for (std::uint32_t d = 0; d < subsets.size(); ++d) {
    if (subsets.size() > max_dfa_states) return a0;
    for (Letter l : kLetters) {
      std::vector<StateId> succ;
      for (StateId q : *subsets[d]) {
        const auto& qn = a.next(q, l);
        succ.insert(succ.end(), qn.begin(), qn.end());
      }
      std::uint32_t to = intern(std::move(succ));
      delta[d][index(l)] = to;
    }
  }

  // Moore refinement: start from the accept masks, split by successor classes.
  const std::size_t n = subsets.size();
  std::vector<std::uint32_t> cls(n);
  std::size_t num_classes = 0;
  {
    std::map<Mask, std::uint32_t> by_mask;
    for (std::size_t d = 0; d < n; ++d)
      cls[d] = by_mask.emplace(mask[d], static_cast<std::uint32_t>(by_mask.size())).first->second;
    num_classes = by_mask.size();
  }
  for (;;) {
    using Sig = std::array<std::uint32_t, 5>;
    std::map<Sig, std::uint32_t> sigs;
    std::vector<std::uint32_t> next(n);
    for (std::size_t d = 0; d < n; ++d) {
      Sig sig{cls[d], kDead, kDead, kDead, kDead};
      for (std::size_t l = 0; l < 4; ++l)
        if (delta[d][l] != kDead) sig[l + 1] = cls[delta[d][l]];
      next[d] = sigs.emplace(sig, static_cast<std::uint32_t>(sigs.size())).first->second;
    }
    cls = std::move(next);
    if (sigs.size() == num_classes) break;
    num_classes = sigs.size();
  }

  WordNfa out;
  std::vector<char> done(num_classes, 0);
  for (std::size_t c = 0; c < num_classes; ++c) out.add_state();
  for (std::size_t d = 0; d < n; ++d) {
    if (done[cls[d]]) continue;
    done[cls[d]] = 1;
    out.set_accept(cls[d], mask[d]);
    for (Letter l : kLetters)
      if (delta[d][index(l)] != kDead) out.add_transition(cls[d], l, cls[delta[d][index(l)]]);
  }
  out.set_initial(cls[start]);
  out.saturated = out.reduced_language = true;
  return out;
}

std::string_view to_string(BoolOp op) {
  switch (op) {
    case BoolOp::Union: return "union";
    case BoolOp::Intersection: return "intersection";
    case BoolOp::Difference: return "difference";
  }
  return "unknown";
}

namespace {

WordNfa disjoint_union(const WordNfa& a, const WordNfa& b) {
  WordNfa out = a;
  StateId base = static_cast<StateId>(a.num_states());
  for (StateId s = 0; s < b.num_states(); ++s) out.add_state(b.accept(s));
  for (StateId s : b.initial()) out.set_initial(base + s);
  for (StateId s = 0; s < b.num_states(); ++s) {
    for (Letter l : kLetters)
      for (StateId t : b.next(s, l)) out.add_transition(base + s, l, base + t);
    for (StateId t : b.epsilon(s)) out.add_epsilon(base + s, base + t);
  }
  out.saturated = a.saturated && b.saturated;
  out.reduced_language = a.reduced_language && b.reduced_language;
  return out;
}

WordNfa product(const WordNfa& a, const WordNfa& b, const Limits& limits) {
  std::unordered_map<std::uint64_t, StateId> ids;
  std::deque<std::pair<StateId, StateId>> queue;
  WordNfa out;
  auto intern = [&](StateId p, StateId q) {
    auto [it, fresh] = ids.emplace((std::uint64_t{p} << 32) | q, 0);
    if (fresh) {
      check_budget(out.num_states() + 1, limits, "intersection");
      it->second = out.add_state(a.accept(p) & b.accept(q));
      queue.emplace_back(p, q);
    }
    return it->second;
  };
  for (StateId p : a.initial())
    for (StateId q : b.initial()) out.set_initial(intern(p, q));
  while (!queue.empty()) {
    auto [p, q] = queue.front();
    queue.pop_front();
    StateId from = ids.at((std::uint64_t{p} << 32) | q);
    for (Letter l : kLetters)
      for (StateId p2 : a.next(p, l))
        for (StateId q2 : b.next(q, l)) out.add_transition(from, l, intern(p2, q2));
  }
  return out;
}

// a minus b, with b determinized on the fly.
WordNfa difference(const WordNfa& a, const WordNfa& b, const Limits& limits) {
  std::map<std::vector<StateId>, std::uint32_t> subset_ids;
  std::vector<const std::vector<StateId>*> subsets;
  std::vector<Mask> subset_mask;
  auto subset_id = [&](std::vector<StateId> s) {
    sort_unique(s);
    auto [it, fresh] = subset_ids.emplace(std::move(s), static_cast<std::uint32_t>(subsets.size()));
    if (fresh) {
      Mask m = 0;
      for (StateId q : it->first) m |= b.accept(q);
      subsets.push_back(&it->first);
      subset_mask.push_back(m);
    }
    return it->second;
  };
  std::unordered_map<std::uint64_t, StateId> ids;
  std::deque<std::pair<StateId, std::uint32_t>> queue;
  WordNfa out;
  auto intern = [&](StateId p, std::uint32_t sid) {
    auto [it, fresh] = ids.emplace((std::uint64_t{p} << 32) | sid, 0);
    if (fresh) {
      check_budget(out.num_states() + 1, limits, "difference");
      it->second = out.add_state(a.accept(p) & ~subset_mask[sid]);
      queue.emplace_back(p, sid);
    }
    return it->second;
  };
  std::uint32_t start = subset_id(b.initial());
  for (StateId p : a.initial()) out.set_initial(intern(p, start));
  while (!queue.empty()) {
    auto [p, sid] = queue.front();
    queue.pop_front();
    StateId from = ids.at((std::uint64_t{p} << 32) | sid);
    for (Letter l : kLetters) {
      const auto& pn = a.next(p, l);
      if (pn.empty()) continue;
      std::vector<StateId> succ;
      for (StateId q : *subsets[sid]) {
        const auto& qn = b.next(q, l);
        succ.insert(succ.end(), qn.begin(), qn.end());
      }
      std::uint32_t sid2 = subset_id(std::move(succ));
      for (StateId p2 : pn) out.add_transition(from, l, intern(p2, sid2));
    }
  }
  return out;
}

}  // namespace

WordNfa fg_boolean(BoolOp op, const WordNfa& a0, const WordNfa& b0, const Limits& limits) {
  WordNfa a = fg_normalize(a0, limits);
  WordNfa b = fg_normalize(b0, limits);
  WordNfa out;
  switch (op) {
    case BoolOp::Union: out = disjoint_union(a, b); break;
    case BoolOp::Intersection: out = product(a, b, limits); break;
    case BoolOp::Difference: out = difference(a, b, limits); break;
  }
  out.saturated = true;
  out.reduced_language = true;
  return fg_trim(out);
}

Mask fg_accept_mask(const Word& w, const WordNfa& a0, const Limits& limits) {
  WordNfa tmp;
  const WordNfa* ap = &a0;
  if (!a0.saturated && !a0.reduced_language) {
    tmp = benois_saturate(a0, limits);
    ap = &tmp;
  } else if (a0.has_epsilon()) {
    tmp = fg_remove_epsilon(a0);
    ap = &tmp;
  }
  const WordNfa& a = *ap;
  std::vector<StateId> cur = a.initial();
  sort_unique(cur);
  for (Letter l : reduce_word(w)) {
    std::vector<StateId> nxt;
    for (StateId s : cur) {
      const auto& v = a.next(s, l);
      nxt.insert(nxt.end(), v.begin(), v.end());
    }
    sort_unique(nxt);
    cur = std::move(nxt);
    if (cur.empty()) return 0;
  }
  Mask m = 0;
  for (StateId s : cur) m |= a.accept(s);
  return m;
}

bool fg_member(const Word& w, const WordNfa& a, const Limits& limits) {
  return fg_accept_mask(w, a, limits) != 0;
}

Mask fg_nonempty_mask(const WordNfa& a) {
  auto fwd = forward_reach(a);
  Mask m = 0;
  for (StateId s = 0; s < a.num_states(); ++s)
    if (fwd[s]) m |= a.accept(s);
  return m;
}

std::map<Word, Mask> fg_words(const WordNfa& a0, std::size_t max_len) {
  const WordNfa a = fg_remove_epsilon(a0);
  std::map<Word, Mask> out;
  Word w;
  std::function<void(const std::vector<StateId>&)> walk = [&](const std::vector<StateId>& cur) {
    Mask m = 0;
    for (StateId s : cur) m |= a.accept(s);
    if (m) out[w] |= m;
    if (w.size() == max_len) return;
    for (Letter l : kLetters) {
      std::vector<StateId> nxt;
      for (StateId s : cur) {
        const auto& v = a.next(s, l);
        nxt.insert(nxt.end(), v.begin(), v.end());
      }
      if (nxt.empty()) continue;
      sort_unique(nxt);
      w.push_back(l);
      walk(nxt);
      w.pop_back();
    }
  };
  std::vector<StateId> start = a.initial();
  sort_unique(start);
  walk(start);
  return out;
}

}  // namespace flatrat
