#include "flatrat/singular.hpp"

#include <set>
#include <tuple>

namespace flatrat {

std::vector<Integer> divisors(const Integer& t) {
  Integer n = abs(t);
  if (n == 0) throw Error(ErrorKind::InvalidInput, "divisors of 0");
  std::vector<Integer> low, high;
  for (Integer d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    low.push_back(d);
    if (d * d != n) high.push_back(n / d);
  }
  low.insert(low.end(), high.rbegin(), high.rend());
  return low;
}

namespace {

std::vector<std::vector<StateId>> gl_graph(const Nfa<Mat2>& a) {
  std::vector<std::vector<StateId>> g(a.num_states());
  for (const auto& t : a.transitions()) g[t.from].push_back(t.to);
  return g;
}

std::vector<char> reach_from(StateId s, const std::vector<std::vector<StateId>>& g) {
  std::vector<char> seen(g.size(), 0);
  std::vector<StateId> stack{s};
  seen[s] = 1;
  while (!stack.empty()) {
    StateId u = stack.back();
    stack.pop_back();
    for (StateId v : g[u])
      if (!seen[v]) {
        seen[v] = 1;
        stack.push_back(v);
      }
  }
  return seen;
}

bool divides(const Integer& d, const Integer& t) { return t % d == 0; }

}  // namespace

SingularNfa flood_h_transitions(SingularNfa a, const Limits& limits) {
  std::set<StateId> sources, sinks;
  for (StateId s : a.gl.initial_states()) sources.insert(s);
  for (StateId s : a.gl.final_states()) sinks.insert(s);
  for (const auto& e : a.s0) {
    sources.insert(e.to);
    sinks.insert(e.from);
  }
  const auto graph = gl_graph(a.gl);
  a.flooded.clear();
  for (StateId p : sources) {
    auto seen = reach_from(p, graph);
    for (StateId q : sinks) {
      if (!seen[q]) continue;
      Nfa<Mat2> sub = a.gl;
      for (StateId s = 0; s < sub.num_states(); ++s) {
        sub.set_initial(s, s == p);
        sub.set_final(s, s == q);
      }
      GlzRat l = glz_from_nfa(nfa_trim(sub), limits);
      if (!glz_is_empty(l)) a.flooded.emplace(std::make_pair(p, q), std::move(l));
    }
  }
  return a;
}

SingularNfa flood_shortcuts(SingularNfa a, const Integer& t, const Limits& limits) {
  using Key = std::tuple<StateId, Integer, StateId>;
  std::set<Key> present;
  for (const auto& e : a.s0) present.insert({e.from, e.r, e.to});
  // L(p,q) meets M11(z), memoized.
  std::map<std::tuple<StateId, StateId, Integer>, bool> meets;
  auto meets_entry = [&](StateId p, StateId q, const GlzRat& l, const Integer& z) {
    auto key = std::make_tuple(p, q, z);
    auto it = meets.find(key);
    if (it != meets.end()) return it->second;
    bool r = !glz_is_empty(glz_boolean(BoolOp::Intersection, l, entry_set(1, 1, z, limits), limits));
    meets.emplace(key, r);
    return r;
  };
  std::vector<Integer> pos = t == 0 ? std::vector<Integer>{} : divisors(t);
  for (bool changed = true; changed;) {
    changed = false;
    const std::vector<S0Edge> edges = a.s0;
    std::map<StateId, std::vector<std::size_t>> leaving;
    for (std::size_t i = 0; i < edges.size(); ++i) leaving[edges[i].from].push_back(i);
    for (const auto& in : edges)
      for (auto l = a.flooded.lower_bound({in.to, 0}); l != a.flooded.end() && l->first.first == in.to; ++l) {
        auto outs = leaving.find(l->first.second);
        if (outs == leaving.end()) continue;
        for (std::size_t oi : outs->second) {
          const S0Edge& out = edges[oi];
          std::vector<Integer> zs;
          if (t == 0) {
            zs.push_back(0);
          } else {
            Integer rr = abs(in.r * out.r) * a.scale[out.to];
            if (rr == 0 || !divides(rr, t)) continue;
            for (const auto& d : pos)
              if (divides(rr * d, t)) {
                zs.push_back(d);
                zs.push_back(-d);
              }
          }
          for (const auto& z : zs) {
            Integer r = in.r * z * out.r;
            if (present.count({in.from, r, out.to})) continue;
            if (!meets_entry(in.to, out.from, l->second, z)) continue;
            present.insert({in.from, r, out.to});
            a.s0.push_back({in.from, r, out.to});
            changed = true;
          }
        }
      }
  }
  return a;
}

bool final_test(const Integer& r, const GlzRat& l1, const GlzRat& l2, const Mat2& g, const Limits& limits) {
  if (glz_is_empty(l1) || glz_is_empty(l2)) return false;
  if (r == 0) return g.is_zero();
  if (g.det() != 0 || g.is_zero()) return false;
  Mat2 m = (1 / Rational(r)) * g;
  // m = u v^T with u a first column of f1 and v a first row of f2. Both are
  // primitive, so m must be a primitive integer matrix; u and v are then
  // fixed up to a common sign.
  if (!m.is_integral() || content(m) != 1) return false;
  int col = m(1, 1) != 0 || m(2, 1) != 0 ? 1 : 2;
  Integer u1 = m(1, col).get_num(), u2 = m(2, col).get_num();
  Integer cu = gcd(u1, u2);
  u1 /= cu;
  u2 /= cu;
  int row = u1 != 0 ? 1 : 2;
  const Integer& ui = row == 1 ? u1 : u2;
  Integer v1 = m(row, 1).get_num() / ui, v2 = m(row, 2).get_num() / ui;
  auto meets = [&](const GlzRat& l, int i1, int j1, const Integer& a1, int i2, int j2, const Integer& a2) {
    GlzRat x = glz_boolean(BoolOp::Intersection, l, entry_set(i1, j1, a1, limits), limits);
    if (glz_is_empty(x)) return false;
    return !glz_is_empty(glz_boolean(BoolOp::Intersection, x, entry_set(i2, j2, a2, limits), limits));
  };
  for (int s : {1, -1}) {
    if (meets(l1, 1, 1, s * u1, 2, 1, s * u2) && meets(l2, 1, 1, s * v1, 1, 2, s * v2)) return true;
  }
  return false;
}

namespace {

// Labels split into GL(2,Z) steps, scalar steps and s0 steps.
struct Piece {
  enum class Kind { Gl, Scalar, S0 } kind;
  Mat2 h;     // Gl
  Integer r;  // Scalar, S0
};

struct SplitNfa {
  std::size_t states = 0;
  std::vector<StateId> initial, finals;
  std::vector<std::tuple<StateId, Piece, StateId>> edges;
};

// Splits every nonzero label m = r*h (h in GL(2,Z)) or m = r*e*s0*f. When
// track_scalars is false the contents r are dropped.
SplitNfa split_labels(const Nfa<Mat2>& a, bool track_scalars) {
  SplitNfa out;
  out.states = a.num_states();
  out.initial = a.initial_states();
  out.finals = a.final_states();
  auto fresh = [&] { return static_cast<StateId>(out.states++); };
  auto scalar = [&](const Rational& r) {
    if (!track_scalars) return Integer(1);
    if (r.get_den() != 1) throw Error(ErrorKind::InvalidInput, "scalar " + to_string(r) + " is not natural");
    return Integer(r.get_num());
  };
  for (const auto& t : a.transitions()) {
    if (!t.label) {
      out.edges.push_back({t.from, Piece{Piece::Kind::Scalar, {}, 1}, t.to});
      continue;
    }
    const Mat2& m = *t.label;
    if (m.is_zero()) continue;
    if (m.det() != 0) {
      Rational c = content(m);
      Mat2 h = (1 / c) * m;
      if (!in_gl2z(h)) throw Error(ErrorKind::Unsupported, "label " + to_string(m) + " is outside the monoid P");
      StateId mid = fresh();
      out.edges.push_back({t.from, Piece{Piece::Kind::Scalar, {}, scalar(c)}, mid});
      out.edges.push_back({mid, Piece{Piece::Kind::Gl, h, 1}, t.to});
      continue;
    }
    SmithForm snf = smith_normal_form(m);
    StateId x = fresh(), y = fresh();
    out.edges.push_back({t.from, Piece{Piece::Kind::Gl, snf.e, 1}, x});
    out.edges.push_back({x, Piece{Piece::Kind::S0, {}, scalar(snf.r)}, y});
    out.edges.push_back({y, Piece{Piece::Kind::Gl, snf.f, 1}, t.to});
  }
  return out;
}

// Product with the positive divisors of t (t = 0: a single level).
SingularNfa build_singular(const SplitNfa& a, const Integer& t, const Limits& limits) {
  std::vector<Integer> levels = t == 0 ? std::vector<Integer>{1} : divisors(t);
  const std::size_t k = levels.size();
  if (a.states * k > limits.max_states) throw ResourceLimit("singular automaton exceeds the state budget");
  std::map<Integer, std::size_t> level_of;
  for (std::size_t i = 0; i < k; ++i) level_of.emplace(levels[i], i);
  SingularNfa out;
  out.gl = Nfa<Mat2>(a.states * k);
  out.scale.resize(a.states * k);
  auto id = [k](StateId s, std::size_t lvl) { return static_cast<StateId>(s * k + lvl); };
  for (StateId s = 0; s < a.states; ++s)
    for (std::size_t i = 0; i < k; ++i) out.scale[id(s, i)] = levels[i];
  for (StateId s : a.initial) out.gl.set_initial(id(s, 0));
  for (StateId s : a.finals)
    for (std::size_t i = 0; i < k; ++i) out.gl.set_final(id(s, i));
  auto step = [&](std::size_t i, const Integer& r) -> std::optional<std::size_t> {
    if (t == 0) return i;
    auto it = level_of.find(levels[i] * r);
    if (it == level_of.end()) return std::nullopt;
    return it->second;
  };
  for (const auto& [from, piece, to] : a.edges)
    for (std::size_t i = 0; i < k; ++i) {
      switch (piece.kind) {
        case Piece::Kind::Gl: out.gl.add_transition(id(from, i), piece.h, id(to, i)); break;
        case Piece::Kind::Scalar:
          if (auto j = step(i, piece.r)) out.gl.add_epsilon(id(from, i), id(to, *j));
          break;
        case Piece::Kind::S0:
          if (auto j = step(i, piece.r)) out.s0.push_back({id(from, i), 1, id(to, *j)});
          break;
      }
    }
  return out;
}

Nfa<Mat2> branch_nfa(const RatExpr<Mat2>& e) { return nfa_trim(remove_epsilon(expr_to_nfa(e))); }

void check_connectors(const FlatBranch& b) {
  for (const auto& c : b.connectors)
    if (!in_monoid(Monoid::P, c))
      throw Error(ErrorKind::Unsupported, "connector " + to_string(c) + " is outside the monoid P");
}

// Edges on some initial-to-final path of the flooded graph.
bool zero_edge_on_path(const SingularNfa& a) {
  const std::size_t n = a.num_states();
  std::vector<std::vector<StateId>> fwd(n), bwd(n);
  for (const auto& [pq, l] : a.flooded) {
    fwd[pq.first].push_back(pq.second);
    bwd[pq.second].push_back(pq.first);
  }
  for (const auto& e : a.s0) {
    fwd[e.from].push_back(e.to);
    bwd[e.to].push_back(e.from);
  }
  auto sweep = [n](const std::vector<StateId>& seeds, const std::vector<std::vector<StateId>>& g) {
    std::vector<char> seen(n, 0);
    std::vector<StateId> stack;
    for (StateId s : seeds)
      if (!seen[s]) {
        seen[s] = 1;
        stack.push_back(s);
      }
    while (!stack.empty()) {
      StateId u = stack.back();
      stack.pop_back();
      for (StateId v : g[u])
        if (!seen[v]) {
          seen[v] = 1;
          stack.push_back(v);
        }
    }
    return seen;
  };
  auto f = sweep(a.gl.initial_states(), fwd);
  auto b = sweep(a.gl.final_states(), bwd);
  for (const auto& e : a.s0)
    if (e.r == 0 && f[e.from] && b[e.to]) return true;
  return false;
}

}  // namespace

bool zero_member(const FlatExpr& e, const Limits& limits) {
  for (const auto& b : e.branches) {
    check_connectors(b);
    for (const auto& f : b.factors)
      f.for_each_atom([](const Mat2& h) {
        if (!in_monoid(Monoid::P, h))
          throw Error(ErrorKind::InvalidInput, "label " + to_string(h) + " is outside the monoid P");
      });
  }
  for (const auto& b : e.branches) {
    Nfa<Mat2> a = branch_nfa(b.as_expr());
    for (const auto& t : a.transitions())
      if (t.label && t.label->is_zero()) return true;
    SingularNfa s = build_singular(split_labels(a, false), 0, limits);
    s = flood_shortcuts(flood_h_transitions(std::move(s), limits), 0, limits);
    if (zero_edge_on_path(s)) return true;
  }
  return false;
}

bool singular_member(const Mat2& g, const FlatExpr& e, const Limits& limits) {
  if (g.det() != 0) throw Error(ErrorKind::InvalidInput, "target " + to_string(g) + " is not singular");
  if (g.is_zero()) return zero_member(e, limits);
  for (const auto& b : e.branches) {
    check_connectors(b);
    for (const auto& f : b.factors)
      f.for_each_atom([](const Mat2& h) {
        if (!in_monoid(Monoid::Pprime, h))
          throw Error(ErrorKind::InvalidInput, "label " + to_string(h) + " is outside the monoid P'");
      });
  }
  for (const auto& b : e.branches) {
    // The connectors' contents commute with everything and multiply to a
    // constant; divide the target by it and keep primitive connectors.
    Rational c = 1;
    FlatBranch prim = FlatBranch::of(b.factors[0]);
    for (std::size_t i = 0; i < b.connectors.size(); ++i) {
      if (b.connectors[i].is_zero()) {
        c = 0;
        break;
      }
      Rational ci = content(b.connectors[i]);
      c *= ci;
      prim.then((1 / ci) * b.connectors[i], b.factors[i + 1]);
    }
    if (c == 0) continue;  // only 0 lies in this branch
    Mat2 target = (1 / c) * g;
    if (!target.is_integral()) continue;
    Integer t = content(target).get_num();

    SingularNfa s = build_singular(split_labels(branch_nfa(prim.as_expr()), true), t, limits);
    s = flood_shortcuts(flood_h_transitions(std::move(s), limits), t, limits);
    for (StateId p1 : s.gl.initial_states())
      for (const auto& edge : s.s0) {
        auto l1 = s.flooded.find({p1, edge.from});
        if (l1 == s.flooded.end()) continue;
        for (StateId q2 : s.gl.final_states()) {
          auto l2 = s.flooded.find({edge.to, q2});
          if (l2 == s.flooded.end()) continue;
          if (final_test(edge.r * s.scale[q2], l1->second, l2->second, target, limits)) return true;
        }
      }
  }
  return false;
}

}  // namespace flatrat
