#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "flatrat/error.hpp"
#include "flatrat/exact_linear.hpp"

namespace flatrat {

/// Left cosets u_i K of a finite-index subgroup K of GL(2,Z), found by BFS
/// from I under left multiplication by S, T, J (in that order). reps[0] = I.
/// The inverses u_i^-1 are then right coset representatives: K u_i^-1.
class CosetTable {
 public:
  using Predicate = std::function<bool(const Mat2&)>;

  static const std::array<Mat2, 3>& generators();

  /// `modulus` N > 0 promises that the principal congruence subgroup of
  /// level N lies in K, so cosets can be looked up by entries mod N.
  CosetTable(Predicate in_subgroup, std::size_t budget, long modulus = 0);

  std::size_t size() const { return reps_.size(); }
  const Mat2& rep(std::size_t i) const { return reps_[i]; }
  const Mat2& rep_inverse(std::size_t i) const { return inverses_[i]; }
  const std::vector<Mat2>& reps() const { return reps_; }
  bool in_subgroup(const Mat2& g) const { return pred_(g); }

  /// i with g in u_i K. Throws Error(NotInGL2Z) for g outside GL(2,Z).
  std::size_t left_index(const Mat2& g) const;
  /// j with g in K u_j^-1, i.e. g u_j in K.
  std::size_t right_index(const Mat2& g) const;
  /// Index of the coset containing generators()[gen] * u_i.
  std::size_t action(std::size_t i, std::size_t gen) const { return action_[i][gen]; }

 private:
  using Key = std::array<long, 4>;
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
      std::size_t h = 0;
      for (long v : k) h = h * 1000003U + static_cast<std::size_t>(v);
      return h;
    }
  };
  Key key(const Mat2& g) const;
  std::size_t find_left(const Mat2& g) const;  // size() when not found

  Predicate pred_;
  long modulus_;
  std::vector<Mat2> reps_;
  std::vector<Mat2> inverses_;
  std::vector<std::array<std::size_t, 3>> action_;
  // Lookup caches; guarded so a shared table can be queried concurrently.
  std::shared_ptr<std::mutex> cache_mutex_ = std::make_shared<std::mutex>();
  mutable std::unordered_map<Key, std::size_t, KeyHash> left_cache_;
  mutable std::unordered_map<Key, std::size_t, KeyHash> right_cache_;
};

}  // namespace flatrat
