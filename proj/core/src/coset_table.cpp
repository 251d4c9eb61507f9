#include "flatrat/coset_table.hpp"

#include <deque>

namespace flatrat {

const std::array<Mat2, 3>& CosetTable::generators() {
  static const std::array<Mat2, 3> gens{mats::S(), mats::T(), mats::J()};
  return gens;
}

CosetTable::CosetTable(Predicate in_subgroup, std::size_t budget, long modulus)
    : pred_(std::move(in_subgroup)), modulus_(modulus) {
  reps_.push_back(Mat2::identity());
  inverses_.push_back(Mat2::identity());
  std::deque<std::size_t> queue{0};
  while (!queue.empty()) {
    std::size_t i = queue.front();
    queue.pop_front();
    for (const Mat2& s : generators()) {
      Mat2 v = s * reps_[i];
      if (find_left(v) != size()) continue;
      if (size() >= budget)
        throw ResourceLimit("coset enumeration exceeded " + std::to_string(budget) +
                            " representatives");
      reps_.push_back(v);
      inverses_.push_back(mat_inverse(v));
      queue.push_back(size() - 1);
    }
  }
  action_.resize(size());
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t g = 0; g < 3; ++g) action_[i][g] = left_index(generators()[g] * reps_[i]);
}

CosetTable::Key CosetTable::key(const Mat2& g) const {
  Key k{};
  for (int i = 0; i < 4; ++i) {
    Integer r;
    mpz_fdiv_r_ui(r.get_mpz_t(), g.entries()[i].get_num_mpz_t(), static_cast<unsigned long>(modulus_));
    k[i] = r.get_si();
  }
  return k;
}

std::size_t CosetTable::find_left(const Mat2& g) const {
  if (modulus_ > 0) {
    std::lock_guard lock(*cache_mutex_);
    auto it = left_cache_.find(key(g));
    if (it != left_cache_.end()) return it->second;
  }
  for (std::size_t i = 0; i < size(); ++i)
    if (pred_(inverses_[i] * g)) {
      if (modulus_ > 0) {
        std::lock_guard lock(*cache_mutex_);
        left_cache_.emplace(key(g), i);
      }
      return i;
    }
  return size();
}

std::size_t CosetTable::left_index(const Mat2& g) const {
  if (!in_gl2z(g)) throw Error(ErrorKind::NotInGL2Z, to_string(g) + " is not in GL(2,Z)");
  std::size_t i = find_left(g);
  if (i == size()) throw Error(ErrorKind::NotInSubgroup, "no coset contains " + to_string(g));
  return i;
}

std::size_t CosetTable::right_index(const Mat2& g) const {
  if (!in_gl2z(g)) throw Error(ErrorKind::NotInGL2Z, to_string(g) + " is not in GL(2,Z)");
  if (modulus_ > 0) {
    std::lock_guard lock(*cache_mutex_);
    auto it = right_cache_.find(key(g));
    if (it != right_cache_.end()) return it->second;
  }
  for (std::size_t j = 0; j < size(); ++j)
    if (pred_(g * reps_[j])) {
      if (modulus_ > 0) {
        std::lock_guard lock(*cache_mutex_);
        right_cache_.emplace(key(g), j);
      }
      return j;
    }
  throw Error(ErrorKind::NotInSubgroup, "no right coset contains " + to_string(g));
}

}  // namespace flatrat
