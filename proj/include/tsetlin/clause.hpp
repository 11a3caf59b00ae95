#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tsetlin/automaton.hpp"
#include "tsetlin/error.hpp"
#include "tsetlin/random.hpp"

namespace tsetlin {

namespace detail {
inline constexpr std::size_t word_bits = 64;
inline constexpr std::size_t words_for(std::size_t bits) { return (bits + word_bits - 1) / word_bits; }
}  // namespace detail

/// Literals of an o-bit input: x_1..x_o followed by their negations, bit-packed.
class LiteralVector {
 public:
  LiteralVector() = default;

  explicit LiteralVector(std::span<const std::uint8_t> features)
      : n_features_(features.size()), words_(detail::words_for(2 * features.size()), 0) {
    if (features.empty()) throw ConfigError("input must have at least one feature");
    for (std::size_t k = 0; k < n_features_; ++k) {
      if (features[k] > 1) {
        throw ConfigError("feature " + std::to_string(k) + " is not a bit");
      }
      set(features[k] ? k : k + n_features_);
    }
  }

  std::size_t n_features() const noexcept { return n_features_; }
  std::size_t size() const noexcept { return 2 * n_features_; }

  bool operator[](std::size_t k) const noexcept {
    return (words_[k / detail::word_bits] >> (k % detail::word_bits)) & 1U;
  }

  std::span<const std::uint64_t> words() const noexcept { return words_; }

  friend bool operator==(const LiteralVector&, const LiteralVector&) = default;

 private:
  void set(std::size_t k) { words_[k / detail::word_bits] |= std::uint64_t{1} << (k % detail::word_bits); }

  std::size_t n_features_ = 0;
  std::vector<std::uint64_t> words_;
};

inline LiteralVector make_literals(std::span<const std::uint8_t> features) {
  return LiteralVector(features);
}

/// Learning mode treats a clause with no included literal as firing;
/// inference mode treats it as silent.
enum class EvalMode : std::uint8_t { learning, inference };

/// A conjunctive clause formed by a team of 2o automata, one per literal.
///
/// The include mask is kept bit-packed and updated whenever an automaton
/// crosses the action boundary, so evaluation is a word-wise AND.
class Clause {
 public:
  Clause() = default;

  Clause(std::size_t n_features, TsetlinAutomaton::state_type depth, Rng& rng)
      : n_features_(n_features), include_(detail::words_for(2 * n_features), 0) {
    if (n_features == 0) throw ConfigError("clause needs at least one feature");
    team_.reserve(2 * n_features);
    for (std::size_t k = 0; k < 2 * n_features; ++k) {
      team_.push_back(TsetlinAutomaton::at_boundary(depth, rng));
    }
    rebuild_mask();
  }

  explicit Clause(std::vector<TsetlinAutomaton> team)
      : n_features_(team.size() / 2), team_(std::move(team)),
        include_(detail::words_for(team_.size()), 0) {
    if (team_.empty() || team_.size() % 2 != 0) {
      throw StructuralError("clause team size must be a positive even number");
    }
    rebuild_mask();
  }

  std::size_t n_features() const noexcept { return n_features_; }
  std::size_t size() const noexcept { return team_.size(); }
  std::size_t include_count() const noexcept { return include_count_; }

  const TsetlinAutomaton& automaton(std::size_t k) const { return team_[k]; }
  std::span<const TsetlinAutomaton> team() const noexcept { return team_; }
  bool includes(std::size_t k) const noexcept {
    return (include_[k / detail::word_bits] >> (k % detail::word_bits)) & 1U;
  }

  bool evaluate(const LiteralVector& literals, EvalMode mode) const {
    if (literals.size() != team_.size()) {
      throw StructuralError("clause has " + std::to_string(team_.size()) + " automata but input has " +
                            std::to_string(literals.size()) + " literals");
    }
    if (include_count_ == 0) return mode == EvalMode::learning;
    const auto lits = literals.words();
    for (std::size_t w = 0; w < include_.size(); ++w) {
      if (include_[w] & ~lits[w]) return false;
    }
    return true;
  }

  void shift(std::size_t k, int delta) noexcept {
    const bool before = team_[k].includes();
    team_[k].shift(delta);
    if (team_[k].includes() != before) flip(k, !before);
  }

  void reward(std::size_t k) noexcept {
    team_[k].reward();  // never crosses the boundary
  }

  void penalize(std::size_t k) noexcept {
    const bool before = team_[k].includes();
    team_[k].penalize();
    if (team_[k].includes() != before) flip(k, !before);
  }

  friend bool operator==(const Clause& a, const Clause& b) { return a.team_ == b.team_; }

 private:
  void flip(std::size_t k, bool now_included) noexcept {
    include_[k / detail::word_bits] ^= std::uint64_t{1} << (k % detail::word_bits);
    if (now_included) {
      ++include_count_;
    } else {
      --include_count_;
    }
  }

  void rebuild_mask() {
    include_count_ = 0;
    for (auto& w : include_) w = 0;
    for (std::size_t k = 0; k < team_.size(); ++k) {
      if (team_[k].includes()) flip(k, true);
    }
  }

  std::size_t n_features_ = 0;
  std::vector<TsetlinAutomaton> team_;
  std::vector<std::uint64_t> include_;
  std::size_t include_count_ = 0;
};

inline constexpr std::string_view kDontCare = "✦";
inline constexpr std::string_view kContradiction = "⊥";

/// Renders a clause over {0, 1, ✦} per feature; ⊥ marks a feature whose
/// literal and negation are both included.
inline std::string clause_pattern(const Clause& clause) {
  std::string out;
  const std::size_t o = clause.n_features();
  for (std::size_t k = 0; k < o; ++k) {
    const bool pos = clause.includes(k);
    const bool neg = clause.includes(k + o);
    if (pos && neg) {
      out += kContradiction;
    } else if (pos) {
      out += '1';
    } else if (neg) {
      out += '0';
    } else {
      out += kDontCare;
    }
  }
  return out;
}

}  // namespace tsetlin
