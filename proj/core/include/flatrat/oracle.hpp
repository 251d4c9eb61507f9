#pragma once

// Brute-force ground truth: bounded-length enumeration of label products.
// A semi-decision tool; it never asserts non-membership.

#include <cstddef>
#include <unordered_map>
#include <vector>

#include "flatrat/automata.hpp"
#include "flatrat/error.hpp"
#include "flatrat/exact_linear.hpp"

namespace flatrat {

struct OracleAnswer {
  bool member = false;
  std::vector<Mat2> witness;  // labels whose product is the query (member only)
  std::size_t bound = 0;
};

/// Every product of an accepted label sequence of length <= max_len, each with
/// a shortest witness sequence. Throws ResourceLimit past max_oracle_products.
std::unordered_map<Mat2, std::vector<Mat2>, Mat2Hash> enumerate_products(
    const Nfa<Mat2>& a, std::size_t max_len, const Limits& limits = {});

OracleAnswer oracle_member(const Mat2& g, const Nfa<Mat2>& a, std::size_t max_len,
                           const Limits& limits = {});

Mat2 product(const std::vector<Mat2>& labels);

}  // namespace flatrat
