#pragma once

// Text syntax for matrices, rational expressions, flat expressions and
// Boolean combinations.
//
//   matrix  := '[[' num ',' num '],[' num ',' num ']]'   num := int | int '/' int
//   expr    := concat ('|' concat)*
//   concat  := postfix+
//   postfix := primary '*'*
//   primary := matrix | '(' expr ')' | 'M11(' int ')' ... 'M22(' int ')'
//            | 'GL2Z' | 'EPS' | 'EMPTY' | name
//   flat    := branch ('|' branch)*
//   branch  := item+     a bare matrix literal is a connector, every other
//                        item (parenthesized, starred, named) is a factor
//   bool    := conj (('|' | '\') conj)*    conj := operand ('&' operand)*
//   operand := '(' flat ')' | '{' bool '}'
//
// Names are bound to expressions by the caller.

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "flatrat/flat.hpp"

namespace flatrat {

struct Symbol {
  enum class Kind { Matrix, Entry, Universe };
  Kind kind = Kind::Matrix;
  Mat2 m;       // Matrix
  int i = 0, j = 0;
  Integer a;    // Entry: M_ij(a)

  static Symbol matrix(Mat2 g) { return {Kind::Matrix, std::move(g), 0, 0, 0}; }
  friend bool operator==(const Symbol& x, const Symbol& y) {
    return x.kind == y.kind && x.m == y.m && x.i == y.i && x.j == y.j && x.a == y.a;
  }
};

using SyntaxExpr = RatExpr<Symbol>;
using Bindings = std::map<std::string, SyntaxExpr, std::less<>>;

struct SyntaxItem {
  bool connector = false;
  Mat2 m;             // connector
  SyntaxExpr factor;  // otherwise
  friend bool operator==(const SyntaxItem&, const SyntaxItem&) = default;
};

struct SyntaxBranch {
  std::vector<SyntaxItem> items;
  friend bool operator==(const SyntaxBranch&, const SyntaxBranch&) = default;
};

struct SyntaxFlat {
  std::vector<SyntaxBranch> branches;
  friend bool operator==(const SyntaxFlat&, const SyntaxFlat&) = default;
};

struct SyntaxBool {
  BoolComb::Op op = BoolComb::Op::Leaf;
  SyntaxFlat leaf;
  std::shared_ptr<const SyntaxBool> lhs, rhs;
};
bool operator==(const SyntaxBool& a, const SyntaxBool& b);

// All parsers throw ParseError with the 1-based line and column.
Mat2 parse_matrix(std::string_view text);
SyntaxExpr parse_expr(std::string_view text, const Bindings& names = {});
SyntaxFlat parse_flat(std::string_view text, const Bindings& names = {});
SyntaxBool parse_bool(std::string_view text, const Bindings& names = {});

std::string print(const SyntaxExpr& e);
std::string print(const SyntaxFlat& f);
std::string print(const SyntaxBool& b);

RatExpr<Mat2> lower(const SyntaxExpr& e);
FlatExpr lower(const SyntaxFlat& f);
BoolComb lower(const SyntaxBool& b);

}  // namespace flatrat
