#include "flatrat/dichotomy.hpp"

#include <map>

#include "flatrat/error.hpp"

namespace flatrat {

std::vector<std::pair<Integer, long>> factorize(const Integer& n, const Integer& trial_bound) {
  if (n <= 0) throw Error(ErrorKind::InvalidInput, "factorize expects a positive integer");
  std::vector<std::pair<Integer, long>> out;
  Integer m = n;
  for (Integer p = 2; p * p <= m; ++p) {
    if (p > trial_bound)
      throw ResourceLimit("cofactor " + m.get_str() + " exceeds the trial division bound");
    long e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    if (e) out.emplace_back(p, e);
  }
  if (m > 1) out.emplace_back(m, 1);
  return out;
}

std::size_t lattice_rank(const std::vector<Rational>& scalars, const Integer& trial_bound) {
  std::map<Integer, std::size_t> column;
  std::vector<std::map<std::size_t, Rational>> rows;
  for (const auto& r : scalars) {
    if (r <= 0) throw Error(ErrorKind::InvalidInput, "lattice_rank expects positive scalars");
    std::map<std::size_t, Rational> row;
    for (auto [p, e] : factorize(r.get_num(), trial_bound)) row[column.emplace(p, column.size()).first->second] += e;
    for (auto [p, e] : factorize(r.get_den(), trial_bound)) row[column.emplace(p, column.size()).first->second] -= e;
    rows.push_back(std::move(row));
  }
  // Gaussian elimination over Q.
  std::vector<std::vector<Rational>> m;
  for (const auto& row : rows) {
    std::vector<Rational> dense(column.size());
    for (const auto& [c, v] : row) dense[c] = v;
    m.push_back(std::move(dense));
  }
  std::size_t rank = 0;
  for (std::size_t c = 0; c < column.size() && rank < m.size(); ++c) {
    std::size_t pivot = rank;
    while (pivot < m.size() && m[pivot][c] == 0) ++pivot;
    if (pivot == m.size()) continue;
    std::swap(m[rank], m[pivot]);
    for (std::size_t i = rank + 1; i < m.size(); ++i) {
      if (m[i][c] == 0) continue;
      Rational f = m[i][c] / m[rank][c];
      for (std::size_t j = c; j < column.size(); ++j) m[i][j] -= f * m[rank][j];
    }
    ++rank;
  }
  return rank;
}

DichotomyResult classify_extension(const std::vector<Mat2>& generators, const Integer& trial_bound) {
  std::vector<Rational> scalars;
  bool proper = false;
  for (const auto& g : generators) {
    if (g.det() == 0) throw Error(ErrorKind::SingularMatrix, "generator " + to_string(g) + " is singular");
    if (in_gl2z(g)) continue;
    proper = true;
    SmithForm snf = smith_normal_form(g);
    // r * diag(1, |q|) lies in G: fold diag(1,-1) into the GL(2,Z) part.
    Integer q = abs(snf.q);
    if (q >= 2) {
      DichotomyResult res;
      res.kind = DichotomyResult::Case::ContainsBS;
      res.q = q;
      res.b = mats::L();
      res.t = Mat2::diag(snf.r, snf.r * q);
      const Mat2 b_q(Rational(1), Rational(0), Rational(q), Rational(1));
      if (res.t * res.b * mat_inverse(res.t) != b_q)
        throw Error(ErrorKind::InvalidInput, "Baumslag-Solitar relation failed for " + to_string(g));
      return res;
    }
    scalars.push_back(snf.r);
  }
  if (!proper) throw Error(ErrorKind::NotAnExtension, "all generators lie in GL(2,Z)");
  DichotomyResult res;
  res.k = lattice_rank(scalars, trial_bound);
  return res;
}

}  // namespace flatrat
