#include "flatrat/flat.hpp"

#include <map>

#include "flatrat/commensurator.hpp"

namespace flatrat {

namespace {

using E = RatExpr<Mat2>;

void add_part(NormalFlat& v, const Mat2& rep, GlzRat set) {
  if (glz_is_empty(set)) return;
  for (auto& p : v.parts)
    if (p.rep == rep) {
      p.set = glz_union(p.set, set);
      return;
    }
  v.parts.push_back({rep, std::move(set)});
}

bool is_identity_set(const GlzRat& k) {
  // Cheap syntactic check for the automaton built by glz_identity().
  const WordNfa& w = k.words;
  return w.num_states() == 1 && w.accept(0) == 1U && w.num_transitions() == 0;
}

}  // namespace

FlatBranch FlatBranch::of(RatExpr<Mat2> factor) {
  FlatBranch b;
  b.factors.push_back(std::move(factor));
  return b;
}

FlatBranch& FlatBranch::then(const Mat2& g, RatExpr<Mat2> factor) {
  connectors.push_back(g);
  factors.push_back(std::move(factor));
  return *this;
}

RatExpr<Mat2> FlatBranch::as_expr() const {
  std::vector<E> seq{factors.at(0)};
  for (std::size_t i = 0; i < connectors.size(); ++i) {
    seq.push_back(E::atom(connectors[i]));
    seq.push_back(factors.at(i + 1));
  }
  return E::concat(std::move(seq));
}

RatExpr<Mat2> FlatExpr::as_expr() const {
  std::vector<E> alts;
  for (const auto& b : branches) alts.push_back(b.as_expr());
  return E::union_of(std::move(alts));
}

NormalFlat flat_extend(const NormalFlat& v, const Mat2& g, const GlzRat& k, const Limits& limits) {
  NormalFlat out;
  const bool plain = is_identity_set(k);
  for (const auto& part : v.parts)
    for (auto& pushed : push_right(part.set, g, limits)) {
      Mat2 full = part.rep * pushed.left;
      Mat2 c = coset_canonical(full);
      Mat2 h = mat_inverse(c) * full;  // in GL(2,Z)
      GlzRat set = plain ? glz_translate(h, pushed.set, Mat2::identity(), limits)
                         : glz_from_nfa(nfa_concat(nfa_concat(nfa_atom(h), glz_to_nfa(pushed.set)),
                                                   glz_to_nfa(k)),
                                        limits);
      add_part(out, c, std::move(set));
    }
  return out;
}

NormalFlat normalize_flat(const FlatExpr& e, const Limits& limits) {
  NormalFlat out;
  for (const auto& b : e.branches) {
    if (b.factors.size() != b.connectors.size() + 1)
      throw Error(ErrorKind::InvalidInput, "flat branch needs one more factor than connectors");
    NormalFlat v;
    add_part(v, Mat2::identity(), glz_from_expr(b.factors[0], limits));
    for (std::size_t i = 0; i < b.connectors.size() && !v.parts.empty(); ++i) {
      if (b.connectors[i].det() == 0)
        throw Error(ErrorKind::SingularMatrix, "connector " + to_string(b.connectors[i]) + " is singular");
      v = flat_extend(v, b.connectors[i], glz_from_expr(b.factors[i + 1], limits), limits);
    }
    out = flat_union(out, v);
  }
  return out;
}

NormalFlat flat_union(const NormalFlat& a, const NormalFlat& b) {
  NormalFlat out = a;
  for (const auto& p : b.parts) add_part(out, p.rep, p.set);
  return out;
}

NormalFlat flat_difference(const NormalFlat& a, const NormalFlat& b, const Limits& limits) {
  NormalFlat out;
  for (const auto& p : a.parts) {
    const NormalPart* match = nullptr;
    for (const auto& q : b.parts)
      if (q.rep == p.rep) match = &q;
    if (!match) {
      out.parts.push_back(p);
      continue;
    }
    GlzRat d = glz_boolean(BoolOp::Difference, p.set, match->set, limits);
    if (!glz_is_empty(d)) out.parts.push_back({p.rep, std::move(d)});
  }
  return out;
}

NormalFlat flat_intersection(const NormalFlat& a, const NormalFlat& b, const Limits& limits) {
  return flat_difference(a, flat_difference(a, b, limits), limits);
}

bool flat_is_empty(const NormalFlat& a) {
  for (const auto& p : a.parts)
    if (!glz_is_empty(p.set)) return false;
  return true;
}

bool flat_member(const Mat2& g, const NormalFlat& a, const Limits& limits) {
  if (g.det() == 0) return false;
  Mat2 c = coset_canonical(g);
  for (const auto& p : a.parts)
    if (p.rep == c) return glz_member(mat_inverse(c) * g, p.set, limits);
  return false;
}

BoolComb BoolComb::of(FlatExpr e) {
  BoolComb c;
  c.leaf = std::move(e);
  return c;
}

BoolComb BoolComb::combine(Op op, BoolComb l, BoolComb r) {
  BoolComb c;
  c.op = op;
  c.lhs = std::make_shared<const BoolComb>(std::move(l));
  c.rhs = std::make_shared<const BoolComb>(std::move(r));
  return c;
}

NormalFlat bool_comb_eval(const BoolComb& c, const Limits& limits) {
  switch (c.op) {
    case BoolComb::Op::Leaf: return normalize_flat(c.leaf, limits);
    case BoolComb::Op::Union: return flat_union(bool_comb_eval(*c.lhs, limits), bool_comb_eval(*c.rhs, limits));
    case BoolComb::Op::Intersection:
      return flat_intersection(bool_comb_eval(*c.lhs, limits), bool_comb_eval(*c.rhs, limits), limits);
    case BoolComb::Op::Difference:
      return flat_difference(bool_comb_eval(*c.lhs, limits), bool_comb_eval(*c.rhs, limits), limits);
  }
  return {};
}

bool bool_comb_empty(const BoolComb& c, const Limits& limits) {
  return flat_is_empty(bool_comb_eval(c, limits));
}

std::size_t counter_bound(const Rational& t_min, const Rational& det_bound) {
  if (t_min <= 1) throw Error(ErrorKind::InvalidInput, "counter bound needs t_min > 1");
  std::size_t k = 0;
  Rational power = t_min;
  while (power <= det_bound) {
    ++k;
    power *= t_min;
  }
  return k;
}

namespace {

// Smallest natural z with z*c in GL(2,Z) or |det(z*c)| > 1.
Integer minimal_lift(const Mat2& c) {
  for (Integer z = 1;; ++z) {
    Mat2 m = Rational(z) * c;
    if (in_gl2z(m) || abs(m.det()) > 1) return z;
  }
}

struct ReducedBranch {
  E expr;      // over P(2,Q)
  Mat2 target; // diag(m, n) with m, n > 0
};

// Moves the target to diagonal form with natural entries and folds every
// connector into the expression (scalars pulled out front).
ReducedBranch reduce_branch(const FlatBranch& b, const SmithForm& snf) {
  std::vector<E> seq;
  Integer zprod = 1;
  auto absorb = [&](const Mat2& c) {
    if (c.det() == 0) throw Error(ErrorKind::SingularMatrix, "connector " + to_string(c) + " is singular");
    Integer z = minimal_lift(c);
    zprod *= z;
    seq.push_back(E::atom(Rational(z) * c));
  };
  absorb((1 / snf.r) * mat_inverse(snf.e));
  seq.push_back(b.factors.at(0));
  for (std::size_t i = 0; i < b.connectors.size(); ++i) {
    absorb(b.connectors[i]);
    seq.push_back(b.factors.at(i + 1));
  }
  absorb(mat_inverse(snf.f));
  Integer n = snf.q;
  if (n < 0) {
    seq.push_back(E::atom(mats::J()));
    n = -n;
  }
  return {E::concat(std::move(seq)), Mat2::diag(Rational(zprod), Rational(zprod * n))};
}

class GlPaths {
 public:
  GlPaths(const Nfa<Mat2>& a, const Limits& limits) : a_(a), limits_(limits) {
    for (const auto& t : a.transitions())
      if (!t.label || in_gl2z(*t.label)) gl_.push_back(t);
  }

  // GL(2,Z)-labelled paths p -> q.
  const GlzRat& get(StateId p, StateId q) {
    auto key = std::make_pair(p, q);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    Nfa<Mat2> sub(a_.num_states());
    sub.set_initial(p);
    sub.set_final(q);
    for (const auto& t : gl_) {
      if (t.label)
        sub.add_transition(t.from, *t.label, t.to);
      else
        sub.add_epsilon(t.from, t.to);
    }
    return cache_.emplace(key, glz_from_nfa(nfa_trim(sub), limits_)).first->second;
  }

 private:
  const Nfa<Mat2>& a_;
  const Limits& limits_;
  std::vector<Transition<Mat2>> gl_;
  std::map<std::pair<StateId, StateId>, GlzRat> cache_;
};

}  // namespace

FloResult flo_decide(const Mat2& g, const FlatExpr& e, const Limits& limits) {
  if (g.det() == 0) throw Error(ErrorKind::SingularMatrix, "target must be invertible");
  for (const auto& b : e.branches)
    for (const auto& f : b.factors)
      f.for_each_atom([](const Mat2& h) {
        if (!in_monoid(Monoid::P2Q, h))
          throw Error(ErrorKind::InvalidInput, "label " + to_string(h) + " is outside P(2,Q)");
      });
  const SmithForm snf = smith_normal_form(g);
  FloResult result;
  for (std::size_t bi = 0; bi < e.branches.size(); ++bi) {
    ReducedBranch rb = reduce_branch(e.branches[bi], snf);
    const Rational target_det = rb.target.det();
    const Mat2 target_rep = coset_canonical(rb.target);

    Nfa<Mat2> a = nfa_trim(remove_epsilon(expr_to_nfa(rb.expr)));
    if (a.num_states() == 0) continue;
    std::vector<std::size_t> big;  // transitions with |det| > 1
    Rational t_min = 0;
    for (std::size_t ti = 0; ti < a.transitions().size(); ++ti) {
      const Mat2& h = *a.transitions()[ti].label;
      if (in_gl2z(h)) continue;
      big.push_back(ti);
      Rational d = abs(h.det());
      if (t_min == 0 || d < t_min) t_min = d;
    }
    const std::size_t k = big.empty() ? 0 : counter_bound(t_min, target_det);
    result.counter_bound = std::max(result.counter_bound, k);

    GlPaths paths(a, limits);
    std::vector<StateId> finals = a.final_states();
    std::vector<StateId> sources;
    for (std::size_t ti : big) sources.push_back(a.transitions()[ti].from);
    std::sort(sources.begin(), sources.end());
    sources.erase(std::unique(sources.begin(), sources.end()), sources.end());

    // level[q]: products of accepted prefixes ending in q after exactly l
    // labels with |det| > 1, as normal forms.
    std::map<StateId, NormalFlat> level;
    auto keep_small = [&](NormalFlat v) {
      NormalFlat out;
      for (auto& p : v.parts)
        if (abs(p.rep.det()) <= target_det) out.parts.push_back(std::move(p));
      return out;
    };
    auto collect = [&](std::map<StateId, NormalFlat>& into, StateId from_state, const NormalFlat& v) {
      std::vector<StateId> wanted = sources;
      wanted.insert(wanted.end(), finals.begin(), finals.end());
      std::sort(wanted.begin(), wanted.end());
      wanted.erase(std::unique(wanted.begin(), wanted.end()), wanted.end());
      for (StateId q : wanted) {
        const GlzRat& gl = paths.get(from_state, q);
        if (glz_is_empty(gl)) continue;
        NormalFlat ext;
        for (const auto& p : v.parts)
          add_part(ext, p.rep, glz_concat(p.set, gl, limits));
        into[q] = flat_union(into[q], ext);
      }
    };
    for (StateId p0 : a.initial_states()) {
      NormalFlat start;
      add_part(start, Mat2::identity(), glz_identity());
      collect(level, p0, start);
    }
    for (std::size_t l = 0;; ++l) {
      for (StateId f : finals) {
        auto it = level.find(f);
        if (it == level.end()) continue;
        for (const auto& p : it->second.parts)
          if (p.rep == target_rep && glz_member(mat_inverse(target_rep) * rb.target, p.set, limits)) {
            result.member = true;
            result.branch = bi;
            result.level = l;
            return result;
          }
      }
      if (l == k) break;
      std::map<StateId, NormalFlat> next;
      for (std::size_t ti : big) {
        const auto& t = a.transitions()[ti];
        auto it = level.find(t.from);
        if (it == level.end() || it->second.parts.empty()) continue;
        NormalFlat moved = keep_small(flat_extend(it->second, *t.label, glz_identity(), limits));
        if (!moved.parts.empty()) collect(next, t.to, moved);
      }
      level = std::move(next);
      if (level.empty()) break;
    }
  }
  return result;
}

}  // namespace flatrat
