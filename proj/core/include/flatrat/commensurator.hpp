#pragma once

// H_g = {h in GL(2,Z) : g^-1 h g in GL(2,Z)} and the rewrites built on it.

#include <utility>
#include <vector>

#include "flatrat/coset_table.hpp"
#include "flatrat/error.hpp"
#include "flatrat/exact_linear.hpp"
#include "flatrat/glz.hpp"

namespace flatrat {

/// True iff g^-1 h g lies in GL(2,Z). Throws NotInGL2Z / SingularMatrix.
bool hg_test(const Mat2& h, const Mat2& g);

/// |SL(2,Z/qZ)| = q^3 * prod_{p | q} (1 - 1/p^2).
Integer sl2_mod_order(const Integer& q);

/// Left coset representatives of H_g in GL(2,Z). The default budget is
/// 4 * |SL(2,Z/qZ)| for the Smith form q of g.
CosetTable hg_coset_reps(const Mat2& g, const Limits& limits = {});

/// g^-1 (L ∩ H_g) g.
GlzRat conjugate_rat(const GlzRat& l, const Mat2& g, const Limits& limits = {});

struct PushedPart {
  Mat2 left;  // u g
  GlzRat set;
};

/// K g as a finite union of (u g) K' with K' = g^-1 (u^-1 K ∩ H_g) g, u
/// ranging over the representatives of H_g. Empty parts are dropped.
std::vector<PushedPart> push_right(const GlzRat& k, const Mat2& g, const Limits& limits = {});

}  // namespace flatrat
