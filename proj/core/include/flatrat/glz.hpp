#pragma once

// Rational subsets of GL(2,Z) through its free subgroup F = <x, y> of index
// 24, x = [[1,2],[0,1]], y = [[1,0],[2,1]]. A GlzRat is a 24-channel word
// automaton; channel c holds the words w with phi(w) * u_c^-1 in the set,
// where u_c are the left coset representatives of F from sanov_table().

#include <cstddef>
#include <vector>

#include "flatrat/automata.hpp"
#include "flatrat/coset_table.hpp"
#include "flatrat/error.hpp"
#include "flatrat/exact_linear.hpp"
#include "flatrat/free_group.hpp"

namespace flatrat {

/// det 1, off-diagonal entries even, diagonal entries = 1 mod 4.
bool in_sanov(const Mat2& g);
const CosetTable& sanov_table();

/// The reduced word w with phi(w) = g. Throws Error(NotInSubgroup).
Word sanov_word(const Mat2& g);

struct GlzElement {
  std::size_t coset_index;
  Word word;
  /// rep(coset_index) * phi(word)
  Mat2 reconstruct() const;
};

/// g = u_i * phi(w). Throws Error(NotInGL2Z).
GlzElement sanov_decompose(const Mat2& g);

struct GlzRat {
  WordNfa words;
};

constexpr Mask kAllCosets = (Mask{1} << 24) - 1;

GlzRat glz_empty();
GlzRat glz_identity();
GlzRat glz_universe();
GlzRat glz_singleton(const Mat2& g);

/// Labels must lie in GL(2,Z) (Error(NotInGL2Z) otherwise).
GlzRat glz_from_nfa(const Nfa<Mat2>& a, const Limits& limits = {});
GlzRat glz_from_expr(const RatExpr<Mat2>& e, const Limits& limits = {});
/// A matrix automaton for the same set (letters become their matrices).
Nfa<Mat2> glz_to_nfa(const GlzRat& l);

GlzRat glz_boolean(BoolOp op, const GlzRat& a, const GlzRat& b, const Limits& limits = {});
GlzRat glz_union(const GlzRat& a, const GlzRat& b);
GlzRat glz_concat(const GlzRat& a, const GlzRat& b, const Limits& limits = {});
/// left * l * right for left, right in GL(2,Z).
GlzRat glz_translate(const Mat2& left, const GlzRat& l, const Mat2& right, const Limits& limits = {});

bool glz_member(const Mat2& g, const GlzRat& l, const Limits& limits = {});
bool glz_is_empty(const GlzRat& l);
/// Elements phi(w) u_c^-1 for accepted words of length <= max_word_len.
std::vector<Mat2> glz_sample(const GlzRat& l, std::size_t max_word_len);

/// {g in GL(2,Z) : g_ij = a}, i, j in {1, 2}.
RatExpr<Mat2> entry_set_expr(int i, int j, const Integer& a);
GlzRat entry_set(int i, int j, const Integer& a, const Limits& limits = {});

/// Restriction of a GL(2,Z)-labelled automaton to the subgroup K of `sub`,
/// read from the coset u_start^-1: the result denotes u_start^-1 L ∩ K and
/// all its labels lie in K.
Nfa<Mat2> silva_restrict(const Nfa<Mat2>& a, const CosetTable& sub, std::size_t start,
                         const Limits& limits = {});
/// Same language, labels in K. Throws Error(NotInSubgroup) if some accepted
/// product lies outside K.
Nfa<Mat2> silva_rewrite(const Nfa<Mat2>& a, const CosetTable& sub, const Limits& limits = {});

}  // namespace flatrat
