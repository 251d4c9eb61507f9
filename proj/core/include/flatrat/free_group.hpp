#pragma once

// Rational subsets of the free group on {x, y}. Automata carry a per-state
// accept mask so one automaton can hold up to 32 languages ("channels") that
// share structure; single-language automata use channel 0.

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "flatrat/automata.hpp"
#include "flatrat/error.hpp"
#include "flatrat/exact_linear.hpp"

namespace flatrat {

enum class Letter : std::uint8_t { x = 0, X = 1, y = 2, Y = 3 };
inline constexpr std::array<Letter, 4> kLetters{Letter::x, Letter::X, Letter::y, Letter::Y};

inline Letter inverse(Letter l) { return static_cast<Letter>(static_cast<std::uint8_t>(l) ^ 1U); }
inline std::size_t index(Letter l) { return static_cast<std::size_t>(l); }
char to_char(Letter l);

using Word = std::vector<Letter>;

/// Parses a string over {x,X,y,Y}; throws Error(InvalidInput) otherwise.
Word parse_word(std::string_view s);
std::string to_string(const Word& w);
bool is_reduced(const Word& w);
Word reduce_word(const Word& w);
Word inverse(const Word& w);

/// The embedding x -> [[1,2],[0,1]], y -> [[1,0],[2,1]].
Mat2 phi(Letter l);
Mat2 phi(const Word& w);

using Mask = std::uint32_t;

class WordNfa {
 public:
  StateId add_state(Mask accept = 0);
  std::size_t num_states() const { return accept_.size(); }
  void add_transition(StateId from, Letter l, StateId to) { delta_.at(from)[index(l)].push_back(to); }
  void add_epsilon(StateId from, StateId to) { eps_.at(from).push_back(to); }
  void set_initial(StateId s) { initial_.push_back(s); }
  void set_accept(StateId s, Mask m) { accept_.at(s) = m; }
  void add_accept(StateId s, Mask m) { accept_.at(s) |= m; }

  const std::vector<StateId>& initial() const { return initial_; }
  Mask accept(StateId s) const { return accept_[s]; }
  const std::vector<StateId>& next(StateId s, Letter l) const { return delta_[s][index(l)]; }
  const std::vector<StateId>& epsilon(StateId s) const { return eps_[s]; }
  bool has_epsilon() const;
  std::size_t num_transitions() const;

  bool saturated = false;
  bool reduced_language = false;

 private:
  std::vector<Mask> accept_;
  std::vector<StateId> initial_;
  std::vector<std::array<std::vector<StateId>, 4>> delta_;
  std::vector<std::vector<StateId>> eps_;
};

/// Single-channel automaton from a letter NFA (final states get mask 1).
WordNfa word_nfa_from(const Nfa<Letter>& a);
/// Channel-0 projection back to a letter NFA.
Nfa<Letter> to_letter_nfa(const WordNfa& a, Mask channels = 1);

/// Drops states that are unreachable or cannot reach an accepting state.
WordNfa fg_trim(const WordNfa& a);
/// Epsilon-free equivalent.
WordNfa fg_remove_epsilon(const WordNfa& a);

/// Benois saturation followed by epsilon removal: every reduced word in the
/// group image of the language is spelled by some path of the result.
WordNfa benois_saturate(const WordNfa& a, const Limits& limits = {});
/// Restricts a saturated automaton to reduced words (trimmed).
WordNfa fg_restrict_reduced(const WordNfa& a);
/// saturate + restrict, skipped when already reduced_language.
WordNfa fg_normalize(const WordNfa& a, const Limits& limits = {});
/// Minimal deterministic automaton (accept masks kept apart) for a
/// reduced_language automaton. Returns the input unchanged when the subset
/// construction would exceed `max_dfa_states`.
WordNfa fg_minimize(const WordNfa& a, std::size_t max_dfa_states);

enum class BoolOp { Union, Intersection, Difference };
std::string_view to_string(BoolOp op);

/// Channelwise Boolean operation on reduced_language automata.
WordNfa fg_boolean(BoolOp op, const WordNfa& a, const WordNfa& b, const Limits& limits = {});

/// Channels accepting the group element w (w need not be reduced).
Mask fg_accept_mask(const Word& w, const WordNfa& a, const Limits& limits = {});
bool fg_member(const Word& w, const WordNfa& a, const Limits& limits = {});
/// Channels with a nonempty language.
Mask fg_nonempty_mask(const WordNfa& a);
inline bool fg_is_empty(const WordNfa& a) { return fg_nonempty_mask(a) == 0; }

/// Accepted words of length <= max_len with their accept masks (the letter
/// sequences themselves, not reduced).
std::map<Word, Mask> fg_words(const WordNfa& a, std::size_t max_len);

}  // namespace flatrat
