#include "flatrat/glz.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <mutex>
#include <tuple>
#include <unordered_map>

namespace flatrat {

namespace {

constexpr std::size_t npos = static_cast<std::size_t>(-1);

Integer entry(const Mat2& g, int i, int j) { return g(i, j).get_num(); }

Integer abs_sum(const Integer& a, const Integer& b, const Integer& c, const Integer& d) {
  return abs(a) + abs(b) + abs(c) + abs(d);
}

}  // namespace

bool in_sanov(const Mat2& g) {
  if (!g.is_integral() || g.det() != 1) return false;
  auto mod = [&](int i, int j, unsigned long m) {
    return mpz_fdiv_ui(g(i, j).get_num_mpz_t(), m);
  };
  return mod(1, 2, 2) == 0 && mod(2, 1, 2) == 0 && mod(1, 1, 4) == 1 && mod(2, 2, 4) == 1;
}

const CosetTable& sanov_table() {
  static const CosetTable table(in_sanov, 24, 4);
  return table;
}

Word sanov_word(const Mat2& g) {
  if (!in_sanov(g)) throw Error(ErrorKind::NotInSubgroup, to_string(g) + " is not in <x, y>");
  Integer a = entry(g, 1, 1), b = entry(g, 1, 2), c = entry(g, 2, 1), d = entry(g, 2, 2);
  Word w;
  // Peel the first letter: the one whose removal shrinks the entries most.
  for (;;) {
    Integer size = abs_sum(a, b, c, d);
    if (size == 2 && a == 1 && d == 1) break;
    Integer best = size;
    int choice = -1;
    Integer na, nb, nc, nd;
    for (int k = 0; k < 4; ++k) {
      Integer ta = a, tb = b, tc = c, td = d;
      switch (static_cast<Letter>(k)) {
        case Letter::x: ta = a - 2 * c; tb = b - 2 * d; break;
        case Letter::X: ta = a + 2 * c; tb = b + 2 * d; break;
        case Letter::y: tc = c - 2 * a; td = d - 2 * b; break;
        case Letter::Y: tc = c + 2 * a; td = d + 2 * b; break;
      }
      Integer s = abs_sum(ta, tb, tc, td);
      if (s < best) {
        best = s;
        choice = k;
        na = ta;
        nb = tb;
        nc = tc;
        nd = td;
      }
    }
    if (choice < 0) throw Error(ErrorKind::NotInSubgroup, "ping-pong reduction stalled on " + to_string(g));
    w.push_back(static_cast<Letter>(choice));
    a = na;
    b = nb;
    c = nc;
    d = nd;
  }
  return reduce_word(w);
}

Mat2 GlzElement::reconstruct() const { return sanov_table().rep(coset_index) * phi(word); }

GlzElement sanov_decompose(const Mat2& g) {
  const auto& tab = sanov_table();
  std::size_t i = tab.left_index(g);
  return {i, sanov_word(tab.rep_inverse(i) * g)};
}

GlzRat glz_empty() {
  GlzRat l;
  l.words.saturated = true;
  l.words.reduced_language = true;
  return l;
}

GlzRat glz_singleton(const Mat2& g) {
  const auto& tab = sanov_table();
  std::size_t j = tab.right_index(g);
  Word w = sanov_word(g * tab.rep(j));
  GlzRat l;
  StateId cur = l.words.add_state();
  l.words.set_initial(cur);
  for (Letter x : w) {
    StateId nxt = l.words.add_state();
    l.words.add_transition(cur, x, nxt);
    cur = nxt;
  }
  l.words.set_accept(cur, Mask{1} << j);
  l.words.saturated = true;
  l.words.reduced_language = true;
  return l;
}

GlzRat glz_identity() { return glz_singleton(Mat2::identity()); }

GlzRat glz_universe() {
  WordNfa a;
  StateId s = a.add_state(kAllCosets);
  a.set_initial(s);
  for (Letter l : kLetters) a.add_transition(s, l, s);
  return {fg_normalize(a)};
}

GlzRat glz_from_nfa(const Nfa<Mat2>& a, const Limits& limits) {
  const auto& tab = sanov_table();
  const std::size_t n = tab.size();

  std::unordered_map<Mat2, std::size_t, Mat2Hash> label_ids;
  std::vector<const Mat2*> labels;
  std::vector<std::size_t> tlabel(a.transitions().size(), npos);
  for (std::size_t ti = 0; ti < a.transitions().size(); ++ti) {
    const auto& t = a.transitions()[ti];
    if (!t.label) continue;
    auto [it, fresh] = label_ids.emplace(*t.label, labels.size());
    if (fresh) {
      if (!in_gl2z(*t.label))
        throw Error(ErrorKind::NotInGL2Z, "label " + to_string(*t.label) + " is not in GL(2,Z)");
      labels.push_back(&it->first);
    }
    tlabel[ti] = it->second;
  }

  // Reading h from coset i: u_i^-1 h = f u_j^-1 with f in F.
  struct Step {
    std::size_t to = npos;
    Word word;
  };
  std::vector<Step> steps(labels.size() * n);
  auto step = [&](std::size_t lid, std::size_t i) -> const Step& {
    Step& s = steps[lid * n + i];
    if (s.to == npos) {
      Mat2 x = tab.rep_inverse(i) * *labels[lid];
      s.to = tab.right_index(x);
      s.word = sanov_word(x * tab.rep(s.to));
    }
    return s;
  };

  auto out_idx = a.out_index();
  WordNfa w;
  std::unordered_map<std::uint64_t, StateId> ids;
  std::deque<std::pair<StateId, std::size_t>> queue;
  auto intern = [&](StateId p, std::size_t i) {
    auto [it, fresh] = ids.emplace(std::uint64_t{p} * n + i, 0);
    if (fresh) {
      it->second = w.add_state(a.is_final(p) ? Mask{1} << i : 0);
      queue.emplace_back(p, i);
    }
    return it->second;
  };
  for (StateId p : a.initial_states()) w.set_initial(intern(p, 0));
  while (!queue.empty()) {
    auto [p, i] = queue.front();
    queue.pop_front();
    StateId from = ids.at(std::uint64_t{p} * n + i);
    for (std::size_t ti : out_idx[p]) {
      const auto& t = a.transitions()[ti];
      if (!t.label) {
        w.add_epsilon(from, intern(t.to, i));
        continue;
      }
      const Step& s = step(tlabel[ti], i);
      StateId target = intern(t.to, s.to);
      if (s.word.empty()) {
        w.add_epsilon(from, target);
        continue;
      }
      StateId cur = from;
      for (std::size_t k = 0; k + 1 < s.word.size(); ++k) {
        StateId nxt = w.add_state();
        w.add_transition(cur, s.word[k], nxt);
        cur = nxt;
      }
      w.add_transition(cur, s.word.back(), target);
    }
    if (w.num_states() > limits.max_states)
      throw ResourceLimit("glz_from_nfa: state budget of " + std::to_string(limits.max_states) +
                          " exceeded");
  }
  WordNfa norm = fg_normalize(w, limits);
  // The subset construction is only worth it while it stays near NFA size.
  return {fg_minimize(norm, std::min(limits.max_states, 4 * norm.num_states() + 4096))};
}

GlzRat glz_from_expr(const RatExpr<Mat2>& e, const Limits& limits) {
  return glz_from_nfa(expr_to_nfa(e), limits);
}

Nfa<Mat2> glz_to_nfa(const GlzRat& l) {
  const auto& tab = sanov_table();
  const WordNfa& w = l.words;
  Nfa<Mat2> out(w.num_states() + 1);
  const StateId fin = static_cast<StateId>(w.num_states());
  out.set_final(fin);
  for (StateId s : w.initial()) out.set_initial(s);
  for (StateId s = 0; s < w.num_states(); ++s) {
    for (Letter x : kLetters)
      for (StateId t : w.next(s, x)) out.add_transition(s, phi(x), t);
    for (StateId t : w.epsilon(s)) out.add_epsilon(s, t);
    for (std::size_t c = 0; c < tab.size(); ++c)
      if (w.accept(s) >> c & 1U) out.add_transition(s, tab.rep_inverse(c), fin);
  }
  return out;
}

GlzRat glz_boolean(BoolOp op, const GlzRat& a, const GlzRat& b, const Limits& limits) {
  return {fg_boolean(op, a.words, b.words, limits)};
}

GlzRat glz_union(const GlzRat& a, const GlzRat& b) {
  return {fg_boolean(BoolOp::Union, a.words, b.words)};
}

GlzRat glz_concat(const GlzRat& a, const GlzRat& b, const Limits& limits) {
  return glz_from_nfa(nfa_concat(glz_to_nfa(a), glz_to_nfa(b)), limits);
}

GlzRat glz_translate(const Mat2& left, const GlzRat& l, const Mat2& right, const Limits& limits) {
  if (left == Mat2::identity() && right == Mat2::identity()) return l;
  return glz_from_nfa(nfa_concat(nfa_concat(nfa_atom(left), glz_to_nfa(l)), nfa_atom(right)), limits);
}

bool glz_member(const Mat2& g, const GlzRat& l, const Limits& limits) {
  const auto& tab = sanov_table();
  std::size_t j = tab.right_index(g);
  Word w = sanov_word(g * tab.rep(j));
  return (fg_accept_mask(w, l.words, limits) >> j) & 1U;
}

bool glz_is_empty(const GlzRat& l) { return fg_is_empty(l.words); }

std::vector<Mat2> glz_sample(const GlzRat& l, std::size_t max_word_len) {
  const auto& tab = sanov_table();
  std::vector<Mat2> out;
  for (const auto& [w, m] : fg_words(l.words, max_word_len)) {
    Mat2 base = phi(w);
    for (std::size_t c = 0; c < tab.size(); ++c)
      if (m >> c & 1U) out.push_back(base * tab.rep_inverse(c));
  }
  return out;
}

namespace {

using E = RatExpr<Mat2>;

E z_powers(const Mat2& g) {
  return E::concat({E::star(E::atom(g)), E::star(E::atom(mat_inverse(g)))});
}

E signs() {
  return E::union_of({E::atom(Mat2::diag(1, 1)), E::atom(Mat2::diag(1, -1)),
                      E::atom(Mat2::diag(-1, 1)), E::atom(Mat2::diag(-1, -1))});
}

// Entry (1,1) equal to a != 0: L^Z * [[a,b0],[c0,d']] * T^Z with b0, c0 in
// [0,|a|) and d' fixed by det = +-1.
E m11_nonzero(const Integer& a) {
  Integer m = abs(a);
  std::vector<E> centers;
  for (Integer b0 = 0; b0 < m; ++b0)
    for (Integer c0 = 0; c0 < m; ++c0)
      for (int det : {1, -1}) {
        Integer num = b0 * c0 + det;
        if (!mpz_divisible_p(num.get_mpz_t(), a.get_mpz_t())) continue;
        Integer d = num / a;
        centers.push_back(E::atom(Mat2(Rational(a), Rational(b0), Rational(c0), Rational(d))));
      }
  return E::concat({z_powers(mats::L()), E::union_of(std::move(centers)), z_powers(mats::T())});
}

}  // namespace

RatExpr<Mat2> entry_set_expr(int i, int j, const Integer& a) {
  if (i < 1 || i > 2 || j < 1 || j > 2)
    throw Error(ErrorKind::InvalidInput, "entry position must be in {1,2} x {1,2}");
  const E w = E::atom(mats::W());
  if (a == 0) {
    E m21 = E::concat({signs(), z_powers(mats::T())});
    E m12 = E::concat({signs(), z_powers(mats::L())});
    if (i == 2 && j == 1) return m21;
    if (i == 1 && j == 2) return m12;
    if (i == 1 && j == 1) return E::concat({w, m21});
    return E::concat({m21, w});
  }
  E m11 = m11_nonzero(a);
  if (i == 1 && j == 1) return m11;
  if (i == 1 && j == 2) return E::concat({m11, w});
  if (i == 2 && j == 1) return E::concat({w, m11});
  return E::concat({w, m11, w});
}

GlzRat entry_set(int i, int j, const Integer& a, const Limits& limits) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, std::string>, GlzRat> cache;
  auto key = std::make_tuple(i, j, a.get_str());
  {
    std::lock_guard lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  GlzRat l = glz_from_expr(entry_set_expr(i, j, a), limits);
  std::lock_guard lock(mu);
  cache.emplace(key, l);
  return l;
}

Nfa<Mat2> silva_restrict(const Nfa<Mat2>& a, const CosetTable& sub, std::size_t start,
                         const Limits& limits) {
  const std::size_t n = sub.size();
  auto out_idx = a.out_index();
  Nfa<Mat2> out;
  std::unordered_map<std::uint64_t, StateId> ids;
  std::deque<std::pair<StateId, std::size_t>> queue;
  auto intern = [&](StateId p, std::size_t i) {
    auto [it, fresh] = ids.emplace(std::uint64_t{p} * n + i, 0);
    if (fresh) {
      if (out.num_states() >= limits.max_states)
        throw ResourceLimit("silva_restrict: state budget exceeded");
      it->second = out.add_state();
      out.set_final(it->second, i == 0 && a.is_final(p));
      queue.emplace_back(p, i);
    }
    return it->second;
  };
  for (StateId p : a.initial_states()) out.set_initial(intern(p, start));
  // State (p, i) means: prefix product lies in u_start^-1 ... = K u_i^-1.
  while (!queue.empty()) {
    auto [p, i] = queue.front();
    queue.pop_front();
    StateId from = ids.at(std::uint64_t{p} * n + i);
    for (std::size_t ti : out_idx[p]) {
      const auto& t = a.transitions()[ti];
      if (!t.label) {
        out.add_epsilon(from, intern(t.to, i));
        continue;
      }
      Mat2 x = sub.rep_inverse(i) * *t.label;
      std::size_t j = sub.right_index(x);
      out.add_transition(from, x * sub.rep(j), intern(t.to, j));
    }
  }
  return nfa_trim(out);
}

Nfa<Mat2> silva_rewrite(const Nfa<Mat2>& a, const CosetTable& sub, const Limits& limits) {
  // Any accepted product outside K shows up as a reachable (final, i != 0).
  Nfa<Mat2> probe = silva_restrict(a, sub, 0, limits);
  const std::size_t n = sub.size();
  auto keep = useful_states(a);
  auto out_idx = a.out_index();
  std::vector<std::vector<char>> seen(a.num_states(), std::vector<char>(n, 0));
  std::vector<std::pair<StateId, std::size_t>> stack;
  for (StateId p : a.initial_states()) {
    seen[p][0] = 1;
    stack.emplace_back(p, 0);
  }
  while (!stack.empty()) {
    auto [p, i] = stack.back();
    stack.pop_back();
    if (a.is_final(p) && i != 0)
      throw Error(ErrorKind::NotInSubgroup, "an accepted product lies outside the subgroup");
    for (std::size_t ti : out_idx[p]) {
      const auto& t = a.transitions()[ti];
      if (!keep[t.to]) continue;
      std::size_t j = t.label ? sub.right_index(sub.rep_inverse(i) * *t.label) : i;
      if (!seen[t.to][j]) {
        seen[t.to][j] = 1;
        stack.emplace_back(t.to, j);
      }
    }
  }
  return probe;
}

}  // namespace flatrat
