#include <numeric>

#include "doctest.h"
#include "flatrat/commensurator.hpp"
#include "flatrat/oracle.hpp"
#include "support.hpp"

using namespace flatrat;
using testing_support::Rng;
using E = RatExpr<Mat2>;

namespace {

// |P^1(Z/q)|: primitive pairs mod q up to units, counted directly.
long projective_line_size(long q) {
  long primitive = 0, units = 0;
  for (long x = 0; x < q; ++x) {
    if (std::gcd(x, q) == 1) ++units;
    for (long y = 0; y < q; ++y)
      if (std::gcd(std::gcd(x, y), q) == 1) ++primitive;
  }
  return primitive / units;
}

bool in_union(const Mat2& x, const std::vector<PushedPart>& parts) {
  for (const auto& p : parts) {
    Mat2 rest = mat_inverse(p.left) * x;
    if (in_gl2z(rest) && glz_member(rest, p.set)) return true;
  }
  return false;
}

}  // namespace

TEST_SUITE("commensurator") {
  TEST_CASE("H_g membership") {
    CHECK(hg_test(Mat2::identity(), Mat2::diag(Rational(1, 3), 7)));
    // diag(2,1)^-1 T diag(2,1) = [[1,1/2],[0,1]].
    CHECK_FALSE(hg_test(mats::T(), Mat2::diag(2, 1)));
    CHECK(hg_test(Mat2(1, 2, 0, 1), Mat2::diag(2, 1)));
    // For diag(1,2) the conjugate of T is T^2.
    CHECK(hg_test(mats::T(), Mat2::diag(1, 2)));
    CHECK_THROWS_AS(hg_test(Mat2::diag(1, 2), Mat2::identity()), Error);
    CHECK_THROWS_AS(hg_test(mats::T(), mats::s0()), Error);
  }

  TEST_CASE("coset counts match the projective line") {
    CHECK(hg_coset_reps(mats::S()).size() == 1);
    CHECK(hg_coset_reps(Mat2::diag(1, 2)).size() == 3);
    const long expected[] = {3, 4, 6, 6, 12};
    for (long q = 2; q <= 6; ++q) {
      CHECK(projective_line_size(q) == expected[q - 2]);
      CHECK(static_cast<long>(hg_coset_reps(Mat2::diag(1, q)).size()) == expected[q - 2]);
    }
    CHECK(sl2_mod_order(2) == 6);
    CHECK(sl2_mod_order(6) == 144);
    // A conjugated, scaled version has the same index.
    Mat2 g = Mat2::scalar(Rational(2, 3)) * mats::S() * Mat2::diag(1, 6) * mats::T();
    CHECK(hg_coset_reps(g).size() == 12);
  }

  TEST_CASE("representatives partition GL(2,Z)") {
    Rng rng(31);
    for (const Mat2& g : {Mat2::diag(1, 2), Mat2::diag(1, 6), Mat2(2, 1, 0, 3), Mat2(Rational(1, 2), 0, 1, 4)}) {
      CosetTable tab = hg_coset_reps(g);
      for (int i = 0; i < 200; ++i) {
        Mat2 h = testing_support::random_glz(rng, 10);
        int hits = 0;
        for (std::size_t k = 0; k < tab.size(); ++k) hits += hg_test(tab.rep_inverse(k) * h, g);
        CHECK(hits == 1);
        CHECK(hg_test(tab.rep_inverse(tab.left_index(h)) * h, g));
      }
    }
  }

  TEST_CASE("conjugation") {
    Mat2 g = Mat2::diag(2, 1);
    GlzRat id = conjugate_rat(glz_identity(), g);
    CHECK(glz_member(Mat2::identity(), id));
    CHECK_FALSE(glz_member(mats::T(), id));

    GlzRat t2 = glz_from_expr(E::star(E::atom(mat_pow(mats::T(), 2))));
    GlzRat c = conjugate_rat(t2, g);
    for (long k = -2; k <= 6; ++k) CHECK(glz_member(mat_pow(mats::T(), k), c) == (k >= 0));

    CHECK(glz_is_empty(conjugate_rat(glz_from_expr(E::atom(mats::T())), g)));

    Rng rng(6);
    for (int i = 0; i < 10; ++i) {
      auto a = testing_support::random_nfa(rng, 3, 5, testing_support::glz_gens());
      GlzRat l = glz_from_nfa(a);
      Mat2 h = (i % 2) ? Mat2(2, 1, 0, 1) : Mat2::diag(Rational(1, 3), 1);
      GlzRat r = conjugate_rat(l, h);
      for (const Mat2& m : glz_sample(glz_universe(), 2)) {
        Mat2 back = h * m * mat_inverse(h);
        bool expected = in_gl2z(back) && glz_member(back, l);
        CHECK(glz_member(m, r) == expected);
      }
    }
  }

  TEST_CASE("pushing a connector to the left") {
    CHECK(push_right(glz_empty(), Mat2::diag(1, 2)).empty());
    auto one = push_right(glz_identity(), Mat2::diag(1, 3));
    REQUIRE(one.size() == 1);
    CHECK(one[0].left == Mat2::diag(1, 3));
    CHECK(glz_member(Mat2::identity(), one[0].set));

    Rng rng(12);
    for (int i = 0; i < 12; ++i) {
      auto e = testing_support::random_expr(rng, 3, 1, testing_support::glz_gens());
      GlzRat k = glz_from_expr(e);
      Mat2 g = (i % 3 == 0) ? Mat2::diag(1, 2) : (i % 3 == 1) ? Mat2(3, 1, 0, 1) : mats::T();
      auto parts = push_right(k, g);
      auto prods = enumerate_products(expr_to_nfa(e), 6);
      for (const auto& [x, w] : prods) CHECK(in_union(x * g, parts));
      for (const auto& p : parts)
        for (const Mat2& m : glz_sample(p.set, 3)) {
          Mat2 x = p.left * m * mat_inverse(g);
          CHECK(in_gl2z(x));
          CHECK(glz_member(x, k));
        }
    }
  }
}
