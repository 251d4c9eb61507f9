#include "flatrat/commensurator.hpp"

#include <map>
#include <mutex>

namespace flatrat {

bool hg_test(const Mat2& h, const Mat2& g) {
  if (!in_gl2z(h)) throw Error(ErrorKind::NotInGL2Z, to_string(h) + " is not in GL(2,Z)");
  return in_gl2z(mat_inverse(g) * h * g);
}

Integer sl2_mod_order(const Integer& q0) {
  Integer q = abs(q0);
  if (q == 0) throw Error(ErrorKind::InvalidInput, "modulus must be nonzero");
  // q^3 prod (1 - 1/p^2) = prod p^(3k-3) (p^3 - p) over prime powers p^k.
  Integer order = 1, rest = q;
  for (Integer p = 2; p * p <= rest; ++p) {
    if (!mpz_divisible_p(rest.get_mpz_t(), p.get_mpz_t())) continue;
    Integer pk = 1;
    while (mpz_divisible_p(rest.get_mpz_t(), p.get_mpz_t())) {
      rest /= p;
      pk *= p;
    }
    order *= pk * pk * pk / (p * p * p) * (p * p * p - p);
  }
  if (rest > 1) order *= rest * rest * rest - rest;
  return order;
}

CosetTable hg_coset_reps(const Mat2& g, const Limits& limits) {
  if (g.det() == 0) throw Error(ErrorKind::SingularMatrix, "H_g needs an invertible g");
  SmithForm snf = smith_normal_form(g);
  Integer q = abs(snf.q);
  std::size_t budget = limits.max_coset_reps;
  if (budget == 0) {
    Integer b = sl2_mod_order(q) * 4;
    budget = b.fits_ulong_p() ? b.get_ui() : static_cast<std::size_t>(-1);
  }
  Mat2 ginv = mat_inverse(g);
  long modulus = q.fits_slong_p() ? q.get_si() : 0;
  // H_g contains the principal congruence subgroup of level |q|.
  return CosetTable([g, ginv](const Mat2& h) { return in_gl2z(ginv * h * g); }, budget, modulus);
}

namespace {

GlzRat conjugate_labels(const Nfa<Mat2>& sub, const Mat2& g, const Limits& limits) {
  Mat2 ginv = mat_inverse(g);
  return glz_from_nfa(sub.map_labels([&](const Mat2& h) { return ginv * h * g; }), limits);
}

}  // namespace

GlzRat conjugate_rat(const GlzRat& l, const Mat2& g, const Limits& limits) {
  CosetTable tab = hg_coset_reps(g, limits);
  return conjugate_labels(silva_restrict(glz_to_nfa(l), tab, 0, limits), g, limits);
}

std::vector<PushedPart> push_right(const GlzRat& k, const Mat2& g, const Limits& limits) {
  std::vector<PushedPart> out;
  if (glz_is_empty(k)) return out;
  CosetTable tab = hg_coset_reps(g, limits);
  Nfa<Mat2> a = glz_to_nfa(k);
  for (std::size_t i = 0; i < tab.size(); ++i) {
    Nfa<Mat2> part = silva_restrict(a, tab, i, limits);
    if (is_empty(part)) continue;
    GlzRat conj = conjugate_labels(part, g, limits);
    if (glz_is_empty(conj)) continue;
    out.push_back({tab.rep(i) * g, std::move(conj)});
  }
  return out;
}

}  // namespace flatrat
