#include "doctest.h"
#include "flatrat/oracle.hpp"
#include "support.hpp"

using namespace flatrat;
using E = RatExpr<Mat2>;

TEST_SUITE("oracle") {
  TEST_CASE("enumeration") {
    auto star = expr_to_nfa(E::star(E::atom(mats::T())));
    auto p = enumerate_products(star, 3);
    CHECK(p.size() == 4);
    for (int k = 0; k <= 3; ++k) CHECK(p.count(mat_pow(mats::T(), k)));
    CHECK(enumerate_products(expr_to_nfa(E::empty()), 3).empty());
    auto zero = enumerate_products(
        expr_to_nfa(E::concat({E::atom(mats::s0()), E::atom(Mat2::diag(0, 1))})), 2);
    CHECK(zero.size() == 1);
    CHECK(zero.count(Mat2::zero()));
  }

  TEST_CASE("membership and witnesses") {
    auto star = expr_to_nfa(E::star(E::atom(mats::T())));
    auto a = oracle_member(mat_pow(mats::T(), 2), star, 3);
    CHECK(a.member);
    CHECK(a.witness == std::vector<Mat2>{mats::T(), mats::T()});
    auto d = oracle_member(Mat2::diag(1, 3), expr_to_nfa(E::star(E::atom(Mat2::diag(1, 2)))), 5);
    CHECK_FALSE(d.member);
    CHECK(d.bound == 5);
    CHECK_FALSE(oracle_member(Mat2::zero(), star, 5).member);
  }

  TEST_CASE("soundness and monotonicity") {
    testing_support::Rng rng(4);
    for (int i = 0; i < 40; ++i) {
      auto a = testing_support::random_nfa(rng, 4, 7, testing_support::glz_gens());
      auto prods = enumerate_products(a, 4);
      for (const auto& [g, w] : prods) {
        CHECK(product(w) == g);
        CHECK(oracle_member(g, a, w.size()).member);
        CHECK(oracle_member(g, a, w.size() + 1).member);
      }
    }
  }

  TEST_CASE("budget") {
    Limits tight;
    tight.max_oracle_products = 10;
    auto a = expr_to_nfa(E::star(E::union_of({E::atom(mats::S()), E::atom(mats::T())})));
    CHECK_THROWS_AS(enumerate_products(a, 8, tight), ResourceLimit);
  }
}
