#include "flatrat/exact_linear.hpp"

#include <utility>

#include "flatrat/error.hpp"

namespace flatrat {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::ZeroMatrix: return "ZeroMatrix";
    case ErrorKind::NotInGL2Z: return "NotInGL2Z";
    case ErrorKind::NotInSubgroup: return "NotInSubgroup";
    case ErrorKind::NotAnExtension: return "NotAnExtension";
    case ErrorKind::ResourceLimit: return "ResourceLimit";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::Unsupported: return "Unsupported";
  }
  return "Unknown";
}

Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw Error(ErrorKind::InvalidInput, "zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Mat2::Mat2(Rational a11, Rational a12, Rational a21, Rational a22)
    : e_{std::move(a11), std::move(a12), std::move(a21), std::move(a22)} {}

Mat2::Mat2(long a11, long a12, long a21, long a22)
    : e_{Rational(a11), Rational(a12), Rational(a21), Rational(a22)} {}

bool Mat2::is_zero() const {
  for (const auto& x : e_)
    if (x != 0) return false;
  return true;
}

bool Mat2::is_integral() const {
  for (const auto& x : e_)
    if (x.get_den() != 1) return false;
  return true;
}

std::strong_ordering operator<=>(const Mat2& a, const Mat2& b) {
  for (int k = 0; k < 4; ++k) {
    int c = cmp(a.e_[k], b.e_[k]);
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
  }
  return std::strong_ordering::equal;
}

Mat2 operator*(const Mat2& a, const Mat2& b) {
  return Mat2(a(1, 1) * b(1, 1) + a(1, 2) * b(2, 1), a(1, 1) * b(1, 2) + a(1, 2) * b(2, 2),
              a(2, 1) * b(1, 1) + a(2, 2) * b(2, 1), a(2, 1) * b(1, 2) + a(2, 2) * b(2, 2));
}

Mat2 operator*(const Rational& r, const Mat2& a) {
  return Mat2(r * a(1, 1), r * a(1, 2), r * a(2, 1), r * a(2, 2));
}

Mat2 operator-(const Mat2& a) { return Rational(-1) * a; }

Mat2 mat_mul(const Mat2& a, const Mat2& b) { return a * b; }

Mat2 mat_inverse(const Mat2& a) {
  Rational d = a.det();
  if (d == 0) throw Error(ErrorKind::SingularMatrix, "matrix " + to_string(a) + " is singular");
  Rational inv = 1 / d;
  return Mat2(inv * a(2, 2), -inv * a(1, 2), -inv * a(2, 1), inv * a(1, 1));
}

Mat2 mat_pow(const Mat2& a, long n) {
  Mat2 base = n < 0 ? mat_inverse(a) : a;
  unsigned long k = n < 0 ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
  Mat2 out = Mat2::identity();
  while (k) {
    if (k & 1) out = out * base;
    base = base * base;
    k >>= 1;
  }
  return out;
}

bool in_gl2z(const Mat2& g) {
  if (!g.is_integral()) return false;
  Rational d = g.det();
  return d == 1 || d == -1;
}

bool in_sl2z(const Mat2& g) { return g.is_integral() && g.det() == 1; }

Rational content(const Mat2& g) {
  Integer l = 1;
  for (const auto& x : g.entries()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  Integer c = 0;
  for (const auto& x : g.entries()) {
    Integer scaled = x.get_num() * (l / x.get_den());
    mpz_gcd(c.get_mpz_t(), c.get_mpz_t(), scaled.get_mpz_t());
  }
  return make_rational(c, l);
}

namespace {

struct IntMat {
  Integer a, b, c, d;
};

IntMat to_int(const Mat2& m) {
  return {m(1, 1).get_num(), m(1, 2).get_num(), m(2, 1).get_num(), m(2, 2).get_num()};
}

Mat2 to_mat(const IntMat& m) {
  return Mat2(Rational(m.a), Rational(m.b), Rational(m.c), Rational(m.d));
}

IntMat mul(const IntMat& x, const IntMat& y) {
  return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
          x.c * y.b + x.d * y.d};
}

// Unimodular (det 1) inverse.
IntMat inv1(const IntMat& x) { return {x.d, -x.b, -x.c, x.a}; }

// g = gcd(u, v) = u*s + v*t with g >= 0.
void xgcd(const Integer& u, const Integer& v, Integer& g, Integer& s, Integer& t) {
  mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t());
}

}  // namespace

Mat2 SmithForm::reconstruct() const { return r * (e * s_q() * f); }

SmithForm smith_normal_form(const Mat2& g) {
  if (g.is_zero()) throw Error(ErrorKind::ZeroMatrix, "Smith normal form of the zero matrix");
  Rational r = content(g);
  IntMat d = to_int((1 / r) * g);
  // Invariant: primitive(g) = E * D * F with E, F in SL(2,Z).
  IntMat E{1, 0, 0, 1}, F{1, 0, 0, 1};
  Integer gg, s, t;
  // Terminates: once a != 0, |a| never grows and strictly drops on every
  // gcd step; exact-division steps create no new off-diagonal entries.
  for (;;) {
    if (d.b != 0) {
      IntMat C;
      if (d.a != 0 && mpz_divisible_p(d.b.get_mpz_t(), d.a.get_mpz_t())) {
        C = {1, -d.b / d.a, 0, 1};
      } else {
        // [a b] C = [gcd 0]
        xgcd(d.a, d.b, gg, s, t);
        C = {s, -d.b / gg, t, d.a / gg};
      }
      d = mul(d, C);
      F = mul(inv1(C), F);
      continue;
    }
    if (d.c != 0) {
      IntMat R;
      if (d.a != 0 && mpz_divisible_p(d.c.get_mpz_t(), d.a.get_mpz_t())) {
        R = {1, 0, -d.c / d.a, 1};
      } else {
        xgcd(d.a, d.c, gg, s, t);
        R = {s, t, -d.c / gg, d.a / gg};
      }
      d = mul(R, d);
      E = mul(E, inv1(R));
      continue;
    }
    if (d.a == 1 || d.a == -1) break;
    // diag(a, q) with a not a unit: fold row 2 into row 1 and reduce again.
    IntMat R{1, 1, 0, 1};
    d = mul(R, d);
    E = mul(E, inv1(R));
  }
  if (d.a == -1) {
    IntMat N{-1, 0, 0, -1};
    d = mul(N, d);
    E = mul(E, N);
  }
  return SmithForm{r, to_mat(E), d.d, to_mat(F)};
}

std::string_view to_string(LabelClass c) {
  switch (c) {
    case LabelClass::Identity: return "Identity";
    case LabelClass::GL2Z: return "GL2Z";
    case LabelClass::CentralNatural: return "CentralNatural";
    case LabelClass::CentralRational: return "CentralRational";
    case LabelClass::ZeroMatrix: return "ZeroMatrix";
    case LabelClass::SingularInteger: return "SingularInteger";
    case LabelClass::DetAbsGreaterOne: return "DetAbsGreaterOne";
    case LabelClass::OtherGL2Q: return "OtherGL2Q";
    case LabelClass::SingularRational: return "SingularRational";
  }
  return "Unknown";
}

LabelClass classify_label(const Mat2& g) {
  if (g == Mat2::identity()) return LabelClass::Identity;
  if (in_gl2z(g)) return LabelClass::GL2Z;
  if (g.is_central()) {
    const Rational& r = g(1, 1);
    if (r >= 1 && r.get_den() == 1) return LabelClass::CentralNatural;
    if (r > 0) return LabelClass::CentralRational;
  }
  if (g.is_zero()) return LabelClass::ZeroMatrix;
  Rational d = g.det();
  if (d == 0) return g.is_integral() ? LabelClass::SingularInteger : LabelClass::SingularRational;
  if (abs(d) > 1) return LabelClass::DetAbsGreaterOne;
  return LabelClass::OtherGL2Q;
}

std::string_view to_string(Monoid m) {
  switch (m) {
    case Monoid::GL2Z: return "GL2Z";
    case Monoid::P2Q: return "P2Q";
    case Monoid::P: return "P";
    case Monoid::Pprime: return "Pprime";
  }
  return "Unknown";
}

bool in_monoid(Monoid m, const Mat2& g) {
  switch (m) {
    case Monoid::GL2Z: return in_gl2z(g);
    case Monoid::P2Q: {
      Rational d = g.det();
      return in_gl2z(g) || abs(d) > 1;
    }
    case Monoid::P: {
      // Singular matrices are all of the form r * (integer singular); the
      // nonsingular elements are r * h with h in GL(2,Z).
      if (g.det() == 0) return true;
      return abs(smith_normal_form(g).q) == 1;
    }
    case Monoid::Pprime: {
      if (!g.is_integral()) return false;
      if (g.det() == 0) return true;
      SmithForm snf = smith_normal_form(g);
      return abs(snf.q) == 1 && snf.r.get_den() == 1;
    }
  }
  return false;
}

Mat2 coset_canonical(const Mat2& g) {
  if (g.det() == 0) throw Error(ErrorKind::SingularMatrix, "coset of a singular matrix");
  Rational s = content(g);
  IntMat m = to_int((1 / s) * g);
  Integer gg, u, v;
  // Right multiplication by GL(2,Z) acts by column operations.
  xgcd(m.a, m.b, gg, u, v);
  IntMat C{u, -m.b / gg, v, m.a / gg};
  m = mul(m, C);
  if (m.d < 0) {
    m.b = -m.b;
    m.d = -m.d;
  }
  // m = [[a,0],[c,d]], a > 0 since gcd >= 0 and det != 0.
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), m.c.get_mpz_t(), m.d.get_mpz_t());
  m.c -= q * m.d;
  return s * to_mat(m);
}

bool same_left_coset(const Mat2& g1, const Mat2& g2) {
  return coset_canonical(g1) == coset_canonical(g2);
}

std::string to_string(const Rational& r) { return r.get_str(); }

std::string to_string(const Mat2& g) {
  return "[[" + to_string(g(1, 1)) + "," + to_string(g(1, 2)) + "],[" + to_string(g(2, 1)) + "," +
         to_string(g(2, 2)) + "]]";
}

std::ostream& operator<<(std::ostream& os, const Mat2& g) { return os << to_string(g); }

std::size_t Mat2Hash::operator()(const Mat2& g) const noexcept {
  std::size_t h = 0x9e3779b97f4a7c15ULL;
  for (const auto& x : g.entries()) {
    auto mix = [&h](mpz_srcptr z) {
      std::size_t limb = mpz_size(z) ? mpz_getlimbn(z, 0) : 0;
      std::size_t v = limb ^ (static_cast<std::size_t>(mpz_sgn(z)) << 61) ^ mpz_size(z);
      h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    };
    mix(x.get_num_mpz_t());
    mix(x.get_den_mpz_t());
  }
  return h;
}

}  // namespace flatrat
