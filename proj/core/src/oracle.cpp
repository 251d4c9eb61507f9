#include "flatrat/oracle.hpp"

#include <unordered_set>

namespace flatrat {

namespace {

struct Node {
  StateId state;
  Mat2 value;
  std::size_t parent;  // npos for roots
  std::size_t label;   // transition index into the epsilon-free automaton
};

constexpr std::size_t npos = static_cast<std::size_t>(-1);

struct Key {
  StateId state;
  Mat2 value;
  bool operator==(const Key&) const = default;
};
struct KeyHash {
  std::size_t operator()(const Key& k) const noexcept { return Mat2Hash{}(k.value) * 31 + k.state; }
};

template <class Visit>
void bfs(const Nfa<Mat2>& a0, std::size_t max_len, const Limits& limits, Visit&& visit) {
  Nfa<Mat2> a = remove_epsilon(a0);
  auto out = a.out_index();
  std::vector<Node> nodes;
  std::unordered_set<Key, KeyHash> seen;
  auto path = [&](std::size_t i) {
    std::vector<Mat2> labels;
    for (; nodes[i].parent != npos; i = nodes[i].parent)
      labels.push_back(*a.transitions()[nodes[i].label].label);
    return std::vector<Mat2>(labels.rbegin(), labels.rend());
  };
  for (StateId s : a.initial_states())
    if (seen.insert({s, Mat2::identity()}).second)
      nodes.push_back({s, Mat2::identity(), npos, 0});
  std::size_t begin = 0;
  for (std::size_t len = 0;; ++len) {
    std::size_t end = nodes.size();
    for (std::size_t i = begin; i < end; ++i)
      if (a.is_final(nodes[i].state) && visit(nodes[i].value, [&] { return path(i); })) return;
    if (len == max_len) return;
    for (std::size_t i = begin; i < end; ++i)
      for (std::size_t ti : out[nodes[i].state]) {
        const auto& t = a.transitions()[ti];
        Mat2 v = nodes[i].value * *t.label;
        if (!seen.insert({t.to, v}).second) continue;
        if (nodes.size() >= limits.max_oracle_products)
          throw ResourceLimit("oracle: product budget of " +
                              std::to_string(limits.max_oracle_products) + " exceeded");
        nodes.push_back({t.to, std::move(v), i, ti});
      }
    begin = end;
    if (begin == nodes.size()) return;
  }
}

}  // namespace

Mat2 product(const std::vector<Mat2>& labels) {
  Mat2 out = Mat2::identity();
  for (const auto& m : labels) out = out * m;
  return out;
}

std::unordered_map<Mat2, std::vector<Mat2>, Mat2Hash> enumerate_products(
    const Nfa<Mat2>& a, std::size_t max_len, const Limits& limits) {
  std::unordered_map<Mat2, std::vector<Mat2>, Mat2Hash> out;
  bfs(a, max_len, limits, [&](const Mat2& v, auto&& path) {
    if (!out.count(v)) out.emplace(v, path());
    return false;
  });
  return out;
}

OracleAnswer oracle_member(const Mat2& g, const Nfa<Mat2>& a, std::size_t max_len,
                           const Limits& limits) {
  OracleAnswer ans;
  ans.bound = max_len;
  bfs(a, max_len, limits, [&](const Mat2& v, auto&& path) {
    if (v != g) return false;
    ans.member = true;
    ans.witness = path();
    return true;
  });
  return ans;
}

}  // namespace flatrat
