#pragma once

// Groups GL(2,Z) < G <= GL(2,Q) generated by GL(2,Z) and finitely many
// extra matrices: either G = GL(2,Z) x Z^k, or G contains BS(1,q).

#include <cstddef>
#include <vector>

#include "flatrat/error.hpp"
#include "flatrat/exact_linear.hpp"

namespace flatrat {

struct DichotomyResult {
  enum class Case { DirectProduct, ContainsBS };
  Case kind = Case::DirectProduct;
  std::size_t k = 0;  // DirectProduct
  Integer q;          // ContainsBS: t b t^-1 = b^q
  Mat2 b, t;
};

/// Prime factorization by trial division up to `trial_bound`; throws
/// ResourceLimit if a cofactor above trial_bound^2 remains.
std::vector<std::pair<Integer, long>> factorize(const Integer& n, const Integer& trial_bound);

/// Rank of the lattice of prime-exponent vectors of positive rationals.
std::size_t lattice_rank(const std::vector<Rational>& scalars, const Integer& trial_bound = 1'000'000);

/// Throws SingularMatrix for a singular generator and NotAnExtension when
/// every generator lies in GL(2,Z).
DichotomyResult classify_extension(const std::vector<Mat2>& generators,
                                   const Integer& trial_bound = 1'000'000);

}  // namespace flatrat
