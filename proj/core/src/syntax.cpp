#include "flatrat/syntax.hpp"

#include <cctype>

#include "flatrat/glz.hpp"

namespace flatrat {

namespace {

enum class Tok { LBrack, RBrack, Comma, LParen, RParen, LBrace, RBrace, Bar, Amp, Backslash, Star, Slash, Int, Ident, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line, column;
};

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Token t{Tok::End, std::string(1, c), line, col};
    switch (c) {
      case '[': t.kind = Tok::LBrack; break;
      case ']': t.kind = Tok::RBrack; break;
      case ',': t.kind = Tok::Comma; break;
      case '(': t.kind = Tok::LParen; break;
      case ')': t.kind = Tok::RParen; break;
      case '{': t.kind = Tok::LBrace; break;
      case '}': t.kind = Tok::RBrace; break;
      case '|': t.kind = Tok::Bar; break;
      case '&': t.kind = Tok::Amp; break;
      case '\\': t.kind = Tok::Backslash; break;
      case '*': t.kind = Tok::Star; break;
      case '/': t.kind = Tok::Slash; break;
      default: break;
    }
    if (t.kind != Tok::End) {
      out.push_back(t);
      advance(1);
      continue;
    }
    std::size_t j = i;
    if (c == '-' || c == '+' || std::isdigit(static_cast<unsigned char>(c))) {
      ++j;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      if (j == i + 1 && !std::isdigit(static_cast<unsigned char>(c)))
        throw ParseError("expected digits after sign", line, col);
      t.kind = Tok::Int;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      t.kind = Tok::Ident;
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", line, col);
    }
    t.text = std::string(s.substr(i, j - i));
    out.push_back(t);
    advance(j - i);
  }
  out.push_back(Token{Tok::End, "", line, col});
  return out;
}

class Parser {
 public:
  Parser(std::string_view text, const Bindings& names) : toks_(lex(text)), names_(names) {}

  void expect_end() {
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
  }

  Mat2 matrix() {
    expect(Tok::LBrack, "'['");
    expect(Tok::LBrack, "'['");
    Rational a = number();
    expect(Tok::Comma, "','");
    Rational b = number();
    expect(Tok::RBrack, "']'");
    expect(Tok::Comma, "','");
    expect(Tok::LBrack, "'['");
    Rational c = number();
    expect(Tok::Comma, "','");
    Rational d = number();
    expect(Tok::RBrack, "']'");
    expect(Tok::RBrack, "']'");
    return Mat2(a, b, c, d);
  }

  SyntaxExpr expr() {
    std::vector<SyntaxExpr> alts{concat()};
    while (accept(Tok::Bar)) alts.push_back(concat());
    return alts.size() == 1 ? alts[0] : SyntaxExpr::union_of(std::move(alts));
  }

  SyntaxFlat flat() {
    SyntaxFlat f;
    f.branches.push_back(branch());
    while (accept(Tok::Bar)) f.branches.push_back(branch());
    return f;
  }

  SyntaxBool boolean() {
    SyntaxBool lhs = conj();
    for (;;) {
      BoolComb::Op op;
      if (accept(Tok::Bar))
        op = BoolComb::Op::Union;
      else if (accept(Tok::Backslash))
        op = BoolComb::Op::Difference;
      else
        return lhs;
      lhs = combine(op, std::move(lhs), conj());
    }
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what, peek().line, peek().column);
  }
  void expect(Tok k, const char* what) {
    if (!accept(k)) fail(std::string("expected ") + what);
  }

  Integer integer() {
    if (peek().kind != Tok::Int) fail("expected an integer");
    std::string text = toks_[pos_++].text;
    if (text[0] == '+') text.erase(0, 1);
    return Integer(text);
  }

  Rational number() {
    Integer num = integer();
    if (!accept(Tok::Slash)) return Rational(num);
    const Token& at = peek();
    Integer den = integer();
    if (den == 0) throw ParseError("zero denominator", at.line, at.column);
    return make_rational(num, den);
  }

  bool starts_primary() const {
    Tok k = peek().kind;
    return k == Tok::LBrack || k == Tok::LParen || k == Tok::Ident;
  }

  SyntaxExpr primary() {
    if (peek().kind == Tok::LBrack) return SyntaxExpr::atom(Symbol::matrix(matrix()));
    if (accept(Tok::LParen)) {
      SyntaxExpr e = expr();
      expect(Tok::RParen, "')'");
      return e;
    }
    if (peek().kind != Tok::Ident) fail("expected an expression");
    const Token& t = toks_[pos_++];
    const std::string& name = t.text;
    if (name == "EPS") return SyntaxExpr::one();
    if (name == "EMPTY") return SyntaxExpr::empty();
    if (name == "GL2Z") return SyntaxExpr::atom(Symbol{Symbol::Kind::Universe, {}, 0, 0, 0});
    if (name.size() == 3 && name[0] == 'M' && (name[1] == '1' || name[1] == '2') &&
        (name[2] == '1' || name[2] == '2')) {
      expect(Tok::LParen, "'('");
      Integer a = integer();
      expect(Tok::RParen, "')'");
      return SyntaxExpr::atom(Symbol{Symbol::Kind::Entry, {}, name[1] - '0', name[2] - '0', a});
    }
    auto it = names_.find(name);
    if (it == names_.end()) throw ParseError("unknown name '" + name + "'", t.line, t.column);
    return it->second;
  }

  SyntaxExpr stars(SyntaxExpr e) {
    while (accept(Tok::Star)) e = SyntaxExpr::star(std::move(e));
    return e;
  }

  SyntaxExpr concat() {
    if (!starts_primary()) fail("expected an expression");
    std::vector<SyntaxExpr> parts;
    while (starts_primary()) parts.push_back(stars(primary()));
    return parts.size() == 1 ? parts[0] : SyntaxExpr::concat(std::move(parts));
  }

  SyntaxBranch branch() {
    if (!starts_primary()) fail("expected a factor or connector");
    SyntaxBranch b;
    while (starts_primary()) {
      SyntaxItem item;
      if (peek().kind == Tok::LBrack) {
        Mat2 m = matrix();
        if (peek().kind == Tok::Star) {
          item.factor = stars(SyntaxExpr::atom(Symbol::matrix(std::move(m))));
        } else {
          item.connector = true;
          item.m = std::move(m);
        }
      } else {
        item.factor = stars(primary());
      }
      b.items.push_back(std::move(item));
    }
    return b;
  }

  static SyntaxBool combine(BoolComb::Op op, SyntaxBool l, SyntaxBool r) {
    SyntaxBool b;
    b.op = op;
    b.lhs = std::make_shared<const SyntaxBool>(std::move(l));
    b.rhs = std::make_shared<const SyntaxBool>(std::move(r));
    return b;
  }

  SyntaxBool operand() {
    if (accept(Tok::LBrace)) {
      SyntaxBool b = boolean();
      expect(Tok::RBrace, "'}'");
      return b;
    }
    expect(Tok::LParen, "'(' or '{'");
    SyntaxBool b;
    b.leaf = flat();
    expect(Tok::RParen, "')'");
    return b;
  }

  SyntaxBool conj() {
    SyntaxBool lhs = operand();
    while (accept(Tok::Amp)) lhs = combine(BoolComb::Op::Intersection, std::move(lhs), operand());
    return lhs;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const Bindings& names_;
};

std::string print_rational(const Rational& r) { return r.get_str(); }

std::string print_matrix(const Mat2& m) {
  return "[[" + print_rational(m(1, 1)) + "," + print_rational(m(1, 2)) + "],[" + print_rational(m(2, 1)) + "," +
         print_rational(m(2, 2)) + "]]";
}

std::string print_symbol(const Symbol& s) {
  switch (s.kind) {
    case Symbol::Kind::Matrix: return print_matrix(s.m);
    case Symbol::Kind::Entry:
      return "M" + std::to_string(s.i) + std::to_string(s.j) + "(" + s.a.get_str() + ")";
    case Symbol::Kind::Universe: return "GL2Z";
  }
  return "";
}

bool bare(const SyntaxExpr& e) {
  using K = SyntaxExpr::Kind;
  return e.kind() == K::Atom || e.kind() == K::Empty || e.kind() == K::Star;
}

}  // namespace

bool operator==(const SyntaxBool& a, const SyntaxBool& b) {
  if (a.op != b.op) return false;
  if (a.op == BoolComb::Op::Leaf) return a.leaf == b.leaf;
  return *a.lhs == *b.lhs && *a.rhs == *b.rhs;
}

Mat2 parse_matrix(std::string_view text) {
  Parser p(text, {});
  Mat2 m = p.matrix();
  p.expect_end();
  return m;
}

SyntaxExpr parse_expr(std::string_view text, const Bindings& names) {
  Parser p(text, names);
  SyntaxExpr e = p.expr();
  p.expect_end();
  return e;
}

SyntaxFlat parse_flat(std::string_view text, const Bindings& names) {
  Parser p(text, names);
  SyntaxFlat f = p.flat();
  p.expect_end();
  return f;
}

SyntaxBool parse_bool(std::string_view text, const Bindings& names) {
  Parser p(text, names);
  SyntaxBool b = p.boolean();
  p.expect_end();
  return b;
}

std::string print(const SyntaxExpr& e) {
  using K = SyntaxExpr::Kind;
  if (e.is_one()) return "EPS";
  switch (e.kind()) {
    case K::Empty: return "EMPTY";
    case K::Atom: return print_symbol(e.label());
    case K::Star: {
      const SyntaxExpr& c = e.children()[0];
      return (bare(c) ? print(c) : "(" + print(c) + ")") + "*";
    }
    case K::Concat: {
      std::string out;
      for (const auto& c : e.children()) {
        if (!out.empty()) out += " ";
        out += bare(c) ? print(c) : "(" + print(c) + ")";
      }
      return out;
    }
    case K::Union: {
      std::string out;
      for (const auto& c : e.children()) {
        if (!out.empty()) out += " | ";
        out += c.kind() == K::Union ? "(" + print(c) + ")" : print(c);
      }
      return out;
    }
  }
  return "";
}

std::string print(const SyntaxFlat& f) {
  std::string out;
  for (const auto& b : f.branches) {
    if (!out.empty()) out += " | ";
    std::string branch;
    for (const auto& item : b.items) {
      if (!branch.empty()) branch += " ";
      branch += item.connector ? print_matrix(item.m) : "(" + print(item.factor) + ")";
    }
    out += branch;
  }
  return out;
}

std::string print(const SyntaxBool& b) {
  auto operand = [](const SyntaxBool& x) {
    return x.op == BoolComb::Op::Leaf ? "(" + print(x.leaf) + ")" : "{" + print(x) + "}";
  };
  switch (b.op) {
    case BoolComb::Op::Leaf: return operand(b);
    case BoolComb::Op::Union: return operand(*b.lhs) + " | " + operand(*b.rhs);
    case BoolComb::Op::Intersection: return operand(*b.lhs) + " & " + operand(*b.rhs);
    case BoolComb::Op::Difference: return operand(*b.lhs) + " \\ " + operand(*b.rhs);
  }
  return "";
}

RatExpr<Mat2> lower(const SyntaxExpr& e) {
  return e.substitute([](const Symbol& s) {
    using E = RatExpr<Mat2>;
    switch (s.kind) {
      case Symbol::Kind::Matrix: return E::atom(s.m);
      case Symbol::Kind::Entry: return entry_set_expr(s.i, s.j, s.a);
      case Symbol::Kind::Universe:
        return E::star(E::union_of({E::atom(mats::S()), E::atom(mats::T()), E::atom(mats::T_inv()), E::atom(mats::J())}));
    }
    return E::empty();
  });
}

FlatExpr lower(const SyntaxFlat& f) {
  FlatExpr out;
  for (const auto& b : f.branches) {
    FlatBranch branch;
    std::vector<RatExpr<Mat2>> pending;
    auto close = [&] {
      if (pending.empty()) return RatExpr<Mat2>::one();
      if (pending.size() == 1) return pending[0];
      return RatExpr<Mat2>::concat(pending);
    };
    for (const auto& item : b.items) {
      if (!item.connector) {
        pending.push_back(lower(item.factor));
        continue;
      }
      branch.factors.push_back(close());
      branch.connectors.push_back(item.m);
      pending.clear();
    }
    branch.factors.push_back(close());
    out.branches.push_back(std::move(branch));
  }
  return out;
}

BoolComb lower(const SyntaxBool& b) {
  if (b.op == BoolComb::Op::Leaf) return BoolComb::of(lower(b.leaf));
  return BoolComb::combine(b.op, lower(*b.lhs), lower(*b.rhs));
}

}  // namespace flatrat
