#pragma once

#include <cstdint>
#include <string>

#include "tsetlin/error.hpp"
#include "tsetlin/random.hpp"

namespace tsetlin {

enum class Action : std::uint8_t { exclude = 0, include = 1 };

/// Two-action Tsetlin automaton with finite memory depth.
///
/// States 1..N select `exclude`, states N+1..2N select `include`. Rewards
/// move the state away from the N/N+1 boundary, penalties toward and across
/// it. Both saturate at the extremes 1 and 2N.
class TsetlinAutomaton {
 public:
  using state_type = std::uint32_t;

  TsetlinAutomaton(state_type depth, state_type state) : depth_(depth), state_(state) {
    if (depth_ < 1) throw ConfigError("automaton memory depth must be >= 1");
    if (state_ < 1 || state_ > 2 * depth_) {
      throw ConfigError("automaton state " + std::to_string(state_) + " outside [1, " +
                        std::to_string(2 * depth_) + "]");
    }
  }

  /// Fresh automaton on one of the two boundary states {N, N+1}, chosen uniformly.
  static TsetlinAutomaton at_boundary(state_type depth, Rng& rng) {
    if (depth < 1) throw ConfigError("automaton memory depth must be >= 1");
    return TsetlinAutomaton(depth, depth + static_cast<state_type>(rng() >> 63));
  }

  state_type state() const noexcept { return state_; }
  state_type depth() const noexcept { return depth_; }

  Action action() const noexcept { return state_ > depth_ ? Action::include : Action::exclude; }
  bool includes() const noexcept { return state_ > depth_; }

  void reward() noexcept {
    if (state_ > depth_) {
      if (state_ < 2 * depth_) ++state_;
    } else if (state_ > 1) {
      --state_;
    }
  }

  void penalize() noexcept {
    if (state_ > depth_) {
      --state_;
    } else {
      ++state_;
    }
  }

  /// Moves `delta` in {-1, 0, +1} steps toward the include end, saturating.
  /// A reward is +1 for include and -1 for exclude; a penalty the opposite.
  void shift(int delta) noexcept {
    const state_type next = state_ + static_cast<state_type>(delta);
    if (next >= 1 && next <= 2 * depth_) state_ = next;
  }

  friend bool operator==(const TsetlinAutomaton&, const TsetlinAutomaton&) = default;

 private:
  state_type depth_;
  state_type state_;
};

}  // namespace tsetlin
