#pragma once

#include <random>
#include <vector>

#include "flatrat/automata.hpp"
#include "flatrat/exact_linear.hpp"

namespace testing_support {

using flatrat::Mat2;
using flatrat::Rational;
using Rng = std::mt19937_64;

inline long uniform(Rng& rng, long lo, long hi) {
  return std::uniform_int_distribution<long>(lo, hi)(rng);
}

inline Rational random_rational(Rng& rng, long num_lo, long num_hi, long den_hi) {
  Rational r(uniform(rng, num_lo, num_hi), uniform(rng, 1, den_hi));
  r.canonicalize();
  return r;
}

inline Mat2 random_rational_mat(Rng& rng) {
  for (;;) {
    Mat2 m(random_rational(rng, -30, 30, 9), random_rational(rng, -30, 30, 9),
           random_rational(rng, -30, 30, 9), random_rational(rng, -30, 30, 9));
    if (!m.is_zero()) return m;
  }
}

inline const std::vector<Mat2>& glz_gens() {
  static const std::vector<Mat2> g{flatrat::mats::S(), flatrat::mats::T(), flatrat::mats::J(),
                                   flatrat::mats::T_inv()};
  return g;
}

inline Mat2 random_glz(Rng& rng, int max_len) {
  Mat2 m = Mat2::identity();
  int len = static_cast<int>(uniform(rng, 0, max_len));
  for (int i = 0; i < len; ++i) m = m * glz_gens()[uniform(rng, 0, 3)];
  return m;
}

inline Mat2 random_sl2z(Rng& rng, int max_len) {
  Mat2 m = Mat2::identity();
  const Mat2 gens[] = {flatrat::mats::S(), flatrat::mats::T(), flatrat::mats::T_inv()};
  int len = static_cast<int>(uniform(rng, 0, max_len));
  for (int i = 0; i < len; ++i) m = m * gens[uniform(rng, 0, 2)];
  return m;
}

/// Random NFA with `states` states and `edges` transitions over `labels`.
template <class Label>
flatrat::Nfa<Label> random_nfa(Rng& rng, int states, int edges, const std::vector<Label>& labels) {
  flatrat::Nfa<Label> a(static_cast<std::size_t>(states));
  a.set_initial(0);
  a.set_final(static_cast<flatrat::StateId>(uniform(rng, 0, states - 1)));
  if (uniform(rng, 0, 2) == 0) a.set_final(static_cast<flatrat::StateId>(uniform(rng, 0, states - 1)));
  for (int i = 0; i < edges; ++i)
    a.add_transition(static_cast<flatrat::StateId>(uniform(rng, 0, states - 1)),
                     labels[uniform(rng, 0, static_cast<long>(labels.size()) - 1)],
                     static_cast<flatrat::StateId>(uniform(rng, 0, states - 1)));
  return a;
}

/// Random expression with at most `atoms` atoms and star depth <= `depth`.
template <class Label>
flatrat::RatExpr<Label> random_expr(Rng& rng, int atoms, int depth, const std::vector<Label>& labels) {
  using E = flatrat::RatExpr<Label>;
  if (atoms <= 1) {
    E leaf = E::atom(labels[uniform(rng, 0, static_cast<long>(labels.size()) - 1)]);
    if (depth > 0 && uniform(rng, 0, 2) == 0) return E::star(leaf);
    return leaf;
  }
  int left = static_cast<int>(uniform(rng, 1, atoms - 1));
  E l = random_expr(rng, left, depth, labels);
  E r = random_expr(rng, atoms - left, depth, labels);
  E node = uniform(rng, 0, 1) ? E::union_of({l, r}) : E::concat({l, r});
  if (depth > 0 && uniform(rng, 0, 3) == 0) return E::star(random_expr(rng, atoms, depth - 1, labels));
  return node;
}

}  // namespace testing_support
