// Acceptance run: one PASS/FAIL line per criterion. All checks are exact;
// each criterion also has a wall-clock budget.

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "flatrat/commensurator.hpp"
#include "flatrat/dichotomy.hpp"
#include "flatrat/flat.hpp"
#include "flatrat/free_group.hpp"
#include "flatrat/glz.hpp"
#include "flatrat/oracle.hpp"
#include "flatrat/singular.hpp"
#include "support.hpp"

using namespace flatrat;
using testing_support::Rng;
using testing_support::uniform;
using E = RatExpr<Mat2>;

namespace {

struct Outcome {
  long failures = 0;
  std::string detail;
};

struct Tally {
  long checks = 0;
  long failures = 0;
  void expect(bool ok) {
    ++checks;
    if (!ok) ++failures;
  }
};

E atom(const Mat2& g) { return E::atom(g); }
E star(const Mat2& g) { return E::star(E::atom(g)); }

FlatExpr single(FlatBranch b) {
  FlatExpr e;
  e.branches.push_back(std::move(b));
  return e;
}

template <class Map>
auto pick(Rng& rng, const Map& m) {
  auto it = m.begin();
  std::advance(it, uniform(rng, 0, static_cast<long>(m.size()) - 1));
  return it;
}

// --- 1 -----------------------------------------------------------------

Outcome snf_suite() {
  Rng rng(1);
  Tally t;
  for (int i = 0; i < 1000; ++i) {
    Mat2 g = testing_support::random_rational_mat(rng);
    SmithForm s = smith_normal_form(g);
    t.expect(s.reconstruct() == g);
    t.expect(in_sl2z(s.e) && in_sl2z(s.f));
    t.expect(s.r > 0);
    Mat2 a = testing_support::random_sl2z(rng, 8), b = testing_support::random_sl2z(rng, 8);
    for (const Mat2& x : {a * g, g * b, a * g * b}) {
      SmithForm u = smith_normal_form(x);
      t.expect(u.r == s.r && u.q == s.q);
    }
  }
  return {t.failures, "1000 matrices, " + std::to_string(t.checks) + " checks"};
}

// --- 2 -----------------------------------------------------------------

std::vector<Word> all_reduced(std::size_t max_len) {
  std::vector<Word> out{{}};
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i].size() == max_len) continue;
    for (Letter l : kLetters) {
      if (!out[i].empty() && out[i].back() == inverse(l)) continue;
      Word w = out[i];
      w.push_back(l);
      out.push_back(w);
    }
  }
  return out;
}

// Pairs of states joined by a path whose word reduces to the identity,
// as the least fixpoint of: reflexive, epsilon, a N a^-1, N N.
std::vector<std::vector<char>> null_pairs(const WordNfa& a) {
  const std::size_t n = a.num_states();
  std::vector<std::vector<char>> r(n, std::vector<char>(n, 0));
  for (StateId p = 0; p < n; ++p) {
    r[p][p] = 1;
    for (StateId q : a.epsilon(p)) r[p][q] = 1;
  }
  for (bool changed = true; changed;) {
    changed = false;
    auto set = [&](StateId p, StateId q) {
      if (!r[p][q]) r[p][q] = changed = true;
    };
    for (StateId p = 0; p < n; ++p)
      for (Letter l : kLetters)
        for (StateId p1 : a.next(p, l))
          for (StateId q1 = 0; q1 < n; ++q1)
            if (r[p1][q1])
              for (StateId q : a.next(q1, inverse(l))) set(p, q);
    for (StateId p = 0; p < n; ++p)
      for (StateId m = 0; m < n; ++m)
        if (r[p][m])
          for (StateId q = 0; q < n; ++q)
            if (r[m][q]) set(p, q);
  }
  return r;
}

// A reduced word is in the image iff some path reads it with null segments
// between its letters.
bool reduction_oracle(const Word& w, const WordNfa& a, const std::vector<std::vector<char>>& null) {
  const std::size_t n = a.num_states();
  auto close = [&](const std::set<StateId>& s) {
    std::set<StateId> out;
    for (StateId p : s)
      for (StateId q = 0; q < n; ++q)
        if (null[p][q]) out.insert(q);
    return out;
  };
  std::set<StateId> cur = close({a.initial().begin(), a.initial().end()});
  for (Letter l : w) {
    std::set<StateId> next;
    for (StateId p : cur)
      for (StateId q : a.next(p, l)) next.insert(q);
    cur = close(next);
  }
  for (StateId p : cur)
    if (a.accept(p) & 1U) return true;
  return false;
}

Outcome free_group_suite() {
  Rng rng(2);
  Tally t;
  const std::vector<Letter> letters(kLetters.begin(), kLetters.end());
  const auto words = all_reduced(4);
  long members = 0;
  for (int i = 0; i < 200; ++i) {
    WordNfa a = word_nfa_from(testing_support::random_nfa(rng, static_cast<int>(uniform(rng, 1, 5)),
                                                          static_cast<int>(uniform(rng, 1, 9)), letters));
    auto null = null_pairs(a);
    WordNfa norm = fg_normalize(a);
    for (const Word& w : words) {
      bool expect = reduction_oracle(w, a, null);
      members += expect;
      t.expect(fg_member(w, a) == expect);
      t.expect(fg_member(w, norm) == expect);
    }
    t.expect(fg_is_empty(fg_boolean(BoolOp::Difference, norm, norm)));
  }
  return {t.failures, "200 automata x " + std::to_string(words.size()) + " words, " + std::to_string(members) +
                          " memberships"};
}

// --- 3 -----------------------------------------------------------------

using Mod4 = std::array<long, 4>;

Mod4 mul4(const Mod4& x, const Mat2& h) {
  auto e = [&](int i, int j) {
    Integer r;
    mpz_fdiv_r_ui(r.get_mpz_t(), h(i, j).get_num_mpz_t(), 4);
    return r.get_si();
  };
  return {(x[0] * e(1, 1) + x[1] * e(2, 1)) % 4, (x[0] * e(1, 2) + x[1] * e(2, 2)) % 4,
          (x[2] * e(1, 1) + x[3] * e(2, 1)) % 4, (x[2] * e(1, 2) + x[3] * e(2, 2)) % 4};
}

// Membership in the free subgroup is decided by the entries mod 4.
bool sanov_mod4(const Mod4& x) { return x[0] == 1 && x[3] == 1 && x[1] % 2 == 0 && x[2] % 2 == 0; }

// Product with the image in GL(2, Z/4): finals only where the product lies
// in the free subgroup.
Nfa<Mat2> restrict_to_free(const Nfa<Mat2>& a) {
  Nfa<Mat2> out;
  std::map<std::pair<StateId, Mod4>, StateId> ids;
  std::vector<std::pair<StateId, Mod4>> todo;
  auto intern = [&](StateId p, const Mod4& m) {
    auto [it, fresh] = ids.emplace(std::make_pair(p, m), 0);
    if (fresh) {
      it->second = out.add_state();
      out.set_final(it->second, a.is_final(p) && sanov_mod4(m));
      todo.emplace_back(p, m);
    }
    return it->second;
  };
  for (StateId p : a.initial_states()) out.set_initial(intern(p, {1, 0, 0, 1}));
  while (!todo.empty()) {
    auto [p, m] = todo.back();
    todo.pop_back();
    StateId from = ids.at({p, m});
    for (const auto& tr : a.transitions()) {
      if (tr.from != p) continue;
      if (tr.label)
        out.add_transition(from, *tr.label, intern(tr.to, mul4(m, *tr.label)));
      else
        out.add_epsilon(from, intern(tr.to, m));
    }
  }
  return out;
}

std::set<Mat2> product_set(const Nfa<Mat2>& a, std::size_t len) {
  std::set<Mat2> out;
  for (const auto& [m, w] : enumerate_products(a, len)) out.insert(m);
  return out;
}

Outcome silva_suite() {
  Rng rng(3);
  Tally t;
  long nonempty = 0;
  for (int i = 0; i < 100; ++i) {
    auto raw = testing_support::random_nfa(rng, static_cast<int>(uniform(rng, 1, 5)),
                                           static_cast<int>(uniform(rng, 2, 10)), testing_support::glz_gens());
    Nfa<Mat2> a = restrict_to_free(raw);
    std::set<Mat2> before = product_set(a, 4);
    for (const Mat2& m : before) t.expect(in_sanov(m));
    Nfa<Mat2> r;
    try {
      r = silva_rewrite(a, sanov_table());
    } catch (const Error&) {
      t.expect(false);
      continue;
    }
    for (const auto& tr : r.transitions())
      if (tr.label) t.expect(in_sanov(*tr.label));
    t.expect(product_set(r, 4) == before);
    nonempty += before.size() > 0;
  }
  return {t.failures, "100 automata, " + std::to_string(nonempty) + " with short products"};
}

// --- 4 -----------------------------------------------------------------

// Coset enumeration of H = {h : g^-1 h g integral} ∩ SL(2,Z) under S and T.
std::size_t bfs_index(const Mat2& g) {
  const Mat2 gi = mat_inverse(g);
  auto in_h = [&](const Mat2& h) { return (gi * h * g).is_integral(); };
  std::vector<Mat2> reps{Mat2::identity()};
  std::vector<Mat2> inv{Mat2::identity()};
  for (std::size_t i = 0; i < reps.size(); ++i)
    for (const Mat2& s : {mats::S(), mats::T(), mats::T_inv()}) {
      Mat2 x = s * reps[i];
      bool known = false;
      for (const Mat2& u : inv)
        if (in_h(u * x)) {
          known = true;
          break;
        }
      if (!known) {
        reps.push_back(x);
        inv.push_back(mat_inverse(x));
      }
    }
  return reps.size();
}

Outcome commensurator_suite() {
  Tally t;
  const std::map<long, std::size_t> expected{{2, 3}, {3, 4}, {4, 6}, {5, 6}, {6, 12}};
  std::ostringstream got;
  for (const auto& [q, idx] : expected) {
    // q * prod_{p | q} (1 + 1/p)
    Rational formula(q);
    for (long p = 2; p <= q; ++p) {
      bool prime = true;
      for (long d = 2; d * d <= p; ++d) prime = prime && p % d != 0;
      if (prime && q % p == 0) formula *= Rational(p + 1, p);
    }
    formula.canonicalize();
    std::size_t lib = hg_coset_reps(Mat2::diag(1, q)).size();
    std::size_t bfs = bfs_index(Mat2::diag(1, q));
    t.expect(formula == Rational(static_cast<long>(idx)));
    t.expect(lib == idx);
    t.expect(bfs == idx);
    got << (got.tellp() ? "," : "") << lib;
  }
  return {t.failures, "indices {" + got.str() + "}"};
}

// --- 5 -----------------------------------------------------------------

const std::vector<Mat2>& flat_connectors() {
  static const std::vector<Mat2> c{Mat2::diag(1, 2), Mat2::diag(2, 1), Mat2(1, 1, 0, 3),
                                   Mat2(Rational(1, 2), 0, 1, 1), Mat2::diag(Rational(1, 3), 1)};
  return c;
}

FlatExpr random_flat(Rng& rng, const std::vector<Mat2>& atoms) {
  FlatExpr e;
  int connectors = static_cast<int>(uniform(rng, 0, 2));
  int branches = static_cast<int>(uniform(rng, 1, 2));
  for (int b = 0; b < branches; ++b) {
    FlatBranch br = FlatBranch::of(testing_support::random_expr(rng, static_cast<int>(uniform(rng, 1, 3)), 1, atoms));
    int here = b + 1 == branches ? connectors : static_cast<int>(uniform(rng, 0, connectors));
    connectors -= here;
    for (int c = 0; c < here; ++c)
      br.then(flat_connectors()[uniform(rng, 0, static_cast<long>(flat_connectors().size()) - 1)],
              testing_support::random_expr(rng, static_cast<int>(uniform(rng, 1, 3)), 1, atoms));
    e.branches.push_back(br);
  }
  return e;
}

Outcome flat_boolean_suite() {
  Rng rng(5);
  Tally t;
  const std::vector<Mat2> atoms{mats::S(), mats::T(), mats::T_inv(), mats::J(), Mat2(1, 2, 0, 1), mats::L()};
  long points = 0;
  for (int i = 0; i < 50; ++i) {
    FlatExpr el = random_flat(rng, atoms), ek = random_flat(rng, atoms);
    NormalFlat l = normalize_flat(el), k = normalize_flat(ek);
    NormalFlat diff = flat_difference(l, k), inter = flat_intersection(l, k);
    std::set<Mat2> in_l = product_set(expr_to_nfa(el.as_expr()), 6);
    std::set<Mat2> in_k = product_set(expr_to_nfa(ek.as_expr()), 6);
    std::set<Mat2> sample;
    for (const auto* s : {&in_l, &in_k})
      for (int j = 0; j < 150 && !s->empty(); ++j) {
        Mat2 x = *pick(rng, *s);
        sample.insert(x);
        sample.insert(x * mats::T());
      }
    for (const Mat2& x : sample) {
      ++points;
      bool a = flat_member(x, l), b = flat_member(x, k);
      if (in_l.count(x)) t.expect(a);
      if (in_k.count(x)) t.expect(b);
      t.expect(flat_member(x, diff) == (a && !b));
      t.expect(flat_member(x, inter) == (a && b));
    }
  }
  return {t.failures, "50 pairs, " + std::to_string(points) + " sampled points"};
}

// --- 6 -----------------------------------------------------------------

Outcome flo_suite() {
  Rng rng(6);
  Tally t;
  const std::vector<Mat2> labels{mats::S(), mats::T(), Mat2::diag(1, 2), Mat2(1, 1, 0, 2), Mat2(2, 1, 0, -1),
                                 Mat2::diag(3, 1)};
  long with_connector = 0;
  for (int i = 0; i < 50; ++i) {
    FlatBranch b = FlatBranch::of(testing_support::random_expr(rng, static_cast<int>(uniform(rng, 2, 4)), 1, labels));
    if (uniform(rng, 0, 1)) {
      ++with_connector;
      b.then(flat_connectors()[uniform(rng, 0, static_cast<long>(flat_connectors().size()) - 1)],
             testing_support::random_expr(rng, 2, 1, labels));
    }
    FlatExpr e = single(b);
    auto prods = enumerate_products(expr_to_nfa(e.as_expr()), 5);
    auto [target, witness] = *pick(rng, prods);
    t.expect(witness.size() <= 5);
    t.expect(product(witness) == target);
    t.expect(flo_member(target, e));
  }
  FlatExpr halves = single(FlatBranch::of(star(Mat2::diag(1, 2))));
  for (long j = 1, p = 3; j <= 5; ++j, p *= 3) t.expect(!flo_member(Mat2::diag(1, p), halves));
  t.expect(counter_bound(2, Mat2::diag(4, 4).det()) == 4);
  t.expect(flo_decide(Mat2::diag(4, 4), halves).counter_bound == 4);
  return {t.failures, "50 planted (" + std::to_string(with_connector) + " with a connector), 5 obstructions, k = 4"};
}

// --- 7 -----------------------------------------------------------------

Outcome singular_suite() {
  Rng rng(7);
  Tally t;
  const Mat2 s0 = mats::s0();
  const std::vector<Mat2> labels{mats::S(), mats::T(), s0, Mat2(1, 2, 0, 0), Mat2::scalar(3), mats::L(),
                                 Mat2(0, 0, 1, 1), mats::W()};
  long planted = 0, zeros = 0;
  for (int round = 0; round < 500 && planted < 100; ++round) {
    E e = testing_support::random_expr(rng, static_cast<int>(uniform(rng, 2, 5)), 1, labels);
    FlatExpr fe = single(FlatBranch::of(e));
    auto prods = enumerate_products(expr_to_nfa(e), 5);
    bool has_zero = prods.count(Mat2::zero()) > 0;
    if (has_zero) {
      ++zeros;
      t.expect(zero_member(fe));
    }
    std::vector<Mat2> singular;
    for (const auto& [m, w] : prods)
      if (m.det() == 0 && !m.is_zero()) singular.push_back(m);
    if (singular.empty()) continue;
    const Mat2& m = singular[uniform(rng, 0, static_cast<long>(singular.size()) - 1)];
    t.expect(product(prods.at(m)) == m);
    t.expect(singular_member(m, fe));
    ++planted;
  }
  t.expect(planted == 100);

  // No singular label: no singular product.
  const std::vector<Mat2> invertible{mats::S(), mats::T(), mats::J(), Mat2::scalar(2), mats::L()};
  for (int i = 0; i < 30; ++i) {
    FlatExpr fe = single(FlatBranch::of(testing_support::random_expr(rng, 3, 1, invertible)));
    t.expect(!zero_member(fe));
    long u1 = uniform(rng, -5, 5), u2 = uniform(rng, -5, 5), v1 = uniform(rng, -5, 5), v2 = uniform(rng, -5, 5);
    Mat2 g(u1 * v1, u1 * v2, u2 * v1, u2 * v2);
    if (!g.is_zero()) t.expect(!singular_member(g, fe));
  }
  // Scalars of (2)* s0 T*: content must be a power of two.
  FlatExpr pow2 = single(FlatBranch::of(E::concat({star(Mat2::scalar(2)), atom(s0), star(mats::T())})));
  for (long c : {3, 5, 6, 7, 9, 12})
    for (long k = 0; k <= 3; ++k) t.expect(!singular_member(Rational(c) * Mat2(1, k, 0, 0), pow2));
  for (long c : {1, 2, 4, 8})
    for (long k = 0; k <= 3; ++k) t.expect(singular_member(Rational(c) * Mat2(1, k, 0, 0), pow2));
  FlatExpr doubled = single(FlatBranch::of(E::concat({atom(Mat2::scalar(2)), atom(s0)})));
  t.expect(!singular_member(s0, doubled));
  t.expect(singular_member(Rational(2) * s0, doubled));

  long identities = 0;
  for (int i = 0; i < 1000; ++i) {
    Rational r = testing_support::random_rational(rng, -30, 30, 9);
    Mat2 m = testing_support::random_rational_mat(rng);
    t.expect(s0 * (r * m) * s0 == (r * m(1, 1)) * s0);
    ++identities;
  }
  return {t.failures, std::to_string(planted) + " planted, " + std::to_string(zeros) + " zero instances, " +
                          std::to_string(identities) + " identities"};
}

// --- 8 -----------------------------------------------------------------

std::set<Mat2> bs_ball(const Mat2& b, const Mat2& t, int n) {
  const Mat2 gens[] = {b, mat_inverse(b), t, mat_inverse(t)};
  std::set<Mat2> all{Mat2::identity()}, frontier{Mat2::identity()};
  for (int len = 0; len < n; ++len) {
    std::set<Mat2> next;
    for (const auto& m : frontier)
      for (const auto& g : gens) {
        Mat2 x = m * g;
        if (all.insert(x).second) next.insert(x);
      }
    frontier = std::move(next);
  }
  return all;
}

Outcome dichotomy_suite() {
  Tally t;
  using Case = DichotomyResult::Case;
  auto one = classify_extension({Mat2::diag(2, 2)});
  t.expect(one.kind == Case::DirectProduct && one.k == 1);
  auto two = classify_extension({Mat2::diag(2, 2), Mat2::diag(3, 3)});
  t.expect(two.kind == Case::DirectProduct && two.k == 2);
  auto bs = classify_extension({Mat2::diag(1, 2)});
  t.expect(bs.kind == Case::ContainsBS && bs.q == 2);
  t.expect(bs.t * bs.b * mat_inverse(bs.t) == bs.b * bs.b);
  long exceptions = 0, checked = 0;
  std::set<Mat2> powers;
  for (long k = -64; k <= 64; ++k) powers.insert(mat_pow(bs.b, k));
  for (const Mat2& m : bs_ball(bs.b, bs.t, 6))
    if (in_sl2z(m)) {
      ++checked;
      if (!powers.count(m)) ++exceptions;
    }
  t.expect(exceptions == 0);
  return {t.failures, std::to_string(checked) + " SL(2,Z) elements in the ball, " + std::to_string(exceptions) +
                          " exceptions"};
}

// --- 9 -----------------------------------------------------------------

Outcome entry_set_suite() {
  Tally t;
  std::vector<Mat2> box;
  const long n = 20;
  for (long a = -n; a <= n; ++a)
    for (long b = -n; b <= n; ++b)
      for (long c = -n; c <= n; ++c)
        for (long d = -n; d <= n; ++d) {
          long det = a * d - b * c;
          if (det == 1 || det == -1) box.emplace_back(a, b, c, d);
        }
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 2; ++j)
      for (long a = -2; a <= 2; ++a) {
        GlzRat m = entry_set(i, j, a);
        for (const Mat2& g : box) t.expect(glz_member(g, m) == (g(i, j) == a));
      }
  return {t.failures, std::to_string(box.size()) + " matrices x 20 sets"};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"smith-normal-form", 5, snf_suite},
      {"free-group-boolean", 60, free_group_suite},
      {"subgroup-rewrite", 120, silva_suite},
      {"commensurator-indices", 10, commensurator_suite},
      {"flat-relative-boolean", 600, flat_boolean_suite},
      {"flat-membership", 300, flo_suite},
      {"singular-membership", 600, singular_suite},
      {"dichotomy", 30, dichotomy_suite},
      {"entry-sets", 60, entry_set_suite},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& c = criteria[i];
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& ex) {
      o = {1, std::string("exception: ") + ex.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool pass = o.failures == 0 && secs <= c.budget_s;
    failed += !pass;
    std::printf("%s %zu %s: %s; %ld failed checks; %.2fs (budget %.0fs)\n", pass ? "PASS" : "FAIL", i + 1, c.name,
                o.detail.c_str(), o.failures, secs, c.budget_s);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
