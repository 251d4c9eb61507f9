#pragma once

// Flat rational sets L0 g1 L1 ... gt Lt over GL(2,Z) and over P(2,Q)
// (GL(2,Z) together with |det| > 1).

#include <cstddef>
#include <memory>
#include <vector>

#include "flatrat/automata.hpp"
#include "flatrat/error.hpp"
#include "flatrat/exact_linear.hpp"
#include "flatrat/glz.hpp"

namespace flatrat {

struct FlatBranch {
  std::vector<RatExpr<Mat2>> factors;  // connectors.size() + 1 entries
  std::vector<Mat2> connectors;

  /// A branch made of a single factor.
  static FlatBranch of(RatExpr<Mat2> factor);
  /// Appends `g` followed by `factor`.
  FlatBranch& then(const Mat2& g, RatExpr<Mat2> factor);
  /// The whole branch as one expression (connectors become atoms).
  RatExpr<Mat2> as_expr() const;
};

struct FlatExpr {
  std::vector<FlatBranch> branches;

  static FlatExpr of(FlatBranch b) { return FlatExpr{{std::move(b)}}; }
  RatExpr<Mat2> as_expr() const;
};

struct NormalPart {
  Mat2 rep;  // coset_canonical form
  GlzRat set;
};

/// Union of rep_i * L_i with pairwise distinct canonical representatives.
struct NormalFlat {
  std::vector<NormalPart> parts;
};

NormalFlat normalize_flat(const FlatExpr& e, const Limits& limits = {});

/// (v * g) * k: pushes g through every part and appends k.
NormalFlat flat_extend(const NormalFlat& v, const Mat2& g, const GlzRat& k, const Limits& limits = {});

NormalFlat flat_union(const NormalFlat& a, const NormalFlat& b);
NormalFlat flat_difference(const NormalFlat& a, const NormalFlat& b, const Limits& limits = {});
NormalFlat flat_intersection(const NormalFlat& a, const NormalFlat& b, const Limits& limits = {});
bool flat_is_empty(const NormalFlat& a);
bool flat_member(const Mat2& g, const NormalFlat& a, const Limits& limits = {});

struct BoolComb {
  enum class Op { Leaf, Union, Intersection, Difference };
  Op op = Op::Leaf;
  FlatExpr leaf;
  std::shared_ptr<const BoolComb> lhs, rhs;

  static BoolComb of(FlatExpr e);
  static BoolComb combine(Op op, BoolComb l, BoolComb r);
};

NormalFlat bool_comb_eval(const BoolComb& c, const Limits& limits = {});
bool bool_comb_empty(const BoolComb& c, const Limits& limits = {});

/// Largest k with t_min^k <= det_bound (t_min > 1, det_bound >= 1).
std::size_t counter_bound(const Rational& t_min, const Rational& det_bound);

struct FloResult {
  bool member = false;
  std::size_t branch = 0;          // branch that produced the answer (member only)
  std::size_t level = 0;           // labels with |det| > 1 used (member only)
  std::size_t counter_bound = 0;   // largest k over the branches examined
};

/// Membership of an invertible g in a flat set whose factors use labels from
/// P(2,Q); connectors may be any invertible rational matrices.
FloResult flo_decide(const Mat2& g, const FlatExpr& e, const Limits& limits = {});
inline bool flo_member(const Mat2& g, const FlatExpr& e, const Limits& limits = {}) {
  return flo_decide(g, e, limits).member;
}

}  // namespace flatrat
