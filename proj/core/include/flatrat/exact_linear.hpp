#pragma once

#include <gmpxx.h>

#include <array>
#include <compare>
#include <cstddef>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

namespace flatrat {

using Integer = mpz_class;
using Rational = mpq_class;

Rational make_rational(const Integer& num, const Integer& den);

/// A 2x2 matrix over Q, stored row-major. All arithmetic is exact.
class Mat2 {
 public:
  Mat2() = default;
  Mat2(Rational a11, Rational a12, Rational a21, Rational a22);
  Mat2(long a11, long a12, long a21, long a22);

  static Mat2 identity() { return Mat2(1, 0, 0, 1); }
  static Mat2 zero() { return Mat2(0, 0, 0, 0); }
  static Mat2 diag(const Rational& a, const Rational& b) { return Mat2(a, 0, 0, b); }
  static Mat2 scalar(const Rational& r) { return Mat2(r, 0, 0, r); }

  /// 1-based entry access, (1,1) is the top-left entry.
  const Rational& operator()(int i, int j) const { return e_[(i - 1) * 2 + (j - 1)]; }
  Rational& operator()(int i, int j) { return e_[(i - 1) * 2 + (j - 1)]; }
  const std::array<Rational, 4>& entries() const { return e_; }

  Rational det() const { return e_[0] * e_[3] - e_[1] * e_[2]; }
  bool is_zero() const;
  bool is_integral() const;
  bool is_central() const { return e_[1] == 0 && e_[2] == 0 && e_[0] == e_[3]; }

  friend bool operator==(const Mat2& a, const Mat2& b) { return a.e_ == b.e_; }
  friend std::strong_ordering operator<=>(const Mat2& a, const Mat2& b);

 private:
  std::array<Rational, 4> e_{};
};

Mat2 operator*(const Mat2& a, const Mat2& b);
Mat2 operator*(const Rational& r, const Mat2& a);
Mat2 operator-(const Mat2& a);

Mat2 mat_mul(const Mat2& a, const Mat2& b);
/// Throws Error(SingularMatrix) when det(a) = 0.
Mat2 mat_inverse(const Mat2& a);
Mat2 mat_pow(const Mat2& a, long n);

bool in_gl2z(const Mat2& g);
bool in_sl2z(const Mat2& g);

/// Positive generator of the Z-module spanned by the entries (0 for the zero
/// matrix); g / content(g) is a primitive integer matrix.
Rational content(const Mat2& g);

/// g = r * e * diag(1, q) * f with r > 0 and e, f in SL(2,Z).
struct SmithForm {
  Rational r;
  Mat2 e;
  Integer q;
  Mat2 f;

  Mat2 s_q() const { return Mat2::diag(1, Rational(q)); }
  Mat2 reconstruct() const;
};

/// Throws Error(ZeroMatrix) for g = 0.
SmithForm smith_normal_form(const Mat2& g);

enum class LabelClass {
  Identity,
  GL2Z,
  CentralNatural,
  CentralRational,
  ZeroMatrix,
  SingularInteger,
  DetAbsGreaterOne,
  OtherGL2Q,
  SingularRational,
};

std::string_view to_string(LabelClass c);
LabelClass classify_label(const Mat2& g);

/// Submonoids of M(2,Q) that label alphabets are drawn from.
enum class Monoid {
  GL2Z,    // GL(2,Z)
  P2Q,     // GL(2,Z) together with |det| > 1
  P,       // central matrices, GL(2,Z), integer singular matrices
  Pprime,  // natural central matrices, GL(2,Z), integer singular matrices
};

std::string_view to_string(Monoid m);
bool in_monoid(Monoid m, const Mat2& g);

/// Canonical representative of the coset g*GL(2,Z): s * [[a,0],[c,d]] with
/// s = content(g), a,d > 0 and 0 <= c < d. Throws Error(SingularMatrix).
Mat2 coset_canonical(const Mat2& g);
bool same_left_coset(const Mat2& g1, const Mat2& g2);

std::string to_string(const Rational& r);
/// Matrix literal `[[a,b],[c,d]]`.
std::string to_string(const Mat2& g);
std::ostream& operator<<(std::ostream& os, const Mat2& g);

struct Mat2Hash {
  std::size_t operator()(const Mat2& g) const noexcept;
};

// Named matrices used throughout.
namespace mats {
inline Mat2 S() { return Mat2(0, -1, 1, 0); }
inline Mat2 T() { return Mat2(1, 1, 0, 1); }
inline Mat2 T_inv() { return Mat2(1, -1, 0, 1); }
inline Mat2 L() { return Mat2(1, 0, 1, 1); }
inline Mat2 J() { return Mat2(1, 0, 0, -1); }
inline Mat2 W() { return Mat2(0, 1, 1, 0); }
inline Mat2 s0() { return Mat2(1, 0, 0, 0); }
}  // namespace mats

}  // namespace flatrat

template <>
struct std::hash<flatrat::Mat2> : flatrat::Mat2Hash {};
