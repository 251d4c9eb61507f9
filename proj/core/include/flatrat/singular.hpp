#pragma once

// Membership of singular matrices in flat rational sets whose labels are
// central, in GL(2,Z), or integer matrices of determinant 0.

#include <map>
#include <utility>
#include <vector>

#include "flatrat/flat.hpp"
#include "flatrat/glz.hpp"

namespace flatrat {

struct S0Edge {
  StateId from;
  Integer r;  // the edge reads r * s0
  StateId to;
};

/// Automaton shape used by the flooding rounds. `gl` holds the GL(2,Z)
/// transitions, epsilon moves and the initial/final flags; s0 edges are kept
/// apart. scale[s] is the natural scalar collected on every path reaching s
/// (all 1 when scalars are not tracked).
struct SingularNfa {
  Nfa<Mat2> gl;
  std::vector<S0Edge> s0;
  std::vector<Integer> scale;
  /// GL(2,Z)-paths p -> q; filled by flood_h_transitions, empty sets omitted.
  std::map<std::pair<StateId, StateId>, GlzRat> flooded;

  std::size_t num_states() const { return gl.num_states(); }
};

/// Adds L(p,q) for every pair (p,q) where p is initial or entered by an s0
/// edge and q is final or leaves by one.
SingularNfa flood_h_transitions(SingularNfa a, const Limits& limits = {});

/// Saturates with shortcuts q' -(r z r' s0)-> p' over q' -(r s0)-> p -L-> q
/// -(r' s0)-> p' whenever L meets M11(z). For t != 0, z ranges over nonzero
/// z with |r z r'| * scale(p') dividing t; for t = 0 only z = 0 is used.
SingularNfa flood_shortcuts(SingularNfa a, const Integer& t, const Limits& limits = {});

/// Is g = f1 * (r s0) * f2 for some f1 in l1, f2 in l2?
bool final_test(const Integer& r, const GlzRat& l1, const GlzRat& l2, const Mat2& g,
                const Limits& limits = {});

/// 0 in e, for e flat over the monoid P.
bool zero_member(const FlatExpr& e, const Limits& limits = {});

/// g in e for singular g and e flat over P' with connectors in P.
bool singular_member(const Mat2& g, const FlatExpr& e, const Limits& limits = {});

/// Positive divisors in increasing order (t != 0).
std::vector<Integer> divisors(const Integer& t);

}  // namespace flatrat
