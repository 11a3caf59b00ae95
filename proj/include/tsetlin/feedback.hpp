#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "tsetlin/automaton.hpp"
#include "tsetlin/clause.hpp"
#include "tsetlin/error.hpp"
#include "tsetlin/random.hpp"

namespace tsetlin {

enum class FeedbackKind : std::uint8_t { type_i = 0, type_ii = 1 };

/// Reward / inaction / penalty probabilities for one automaton.
struct FeedbackCell {
  double reward = 0.0;
  double inaction = 1.0;
  double penalty = 0.0;

  friend bool operator==(const FeedbackCell&, const FeedbackCell&) = default;
};

inline void check_specificity(double s) {
  if (!(s >= 1.0)) throw ConfigError("specificity s must be >= 1, got " + std::to_string(s));
}

/// The reinforcement table for Type I / Type II feedback.
///
/// An included automaton over a 0-valued literal inside a firing clause is
/// impossible for a correct conjunction; asking for it is a contract violation.
inline FeedbackCell lookup_cell(FeedbackKind kind, Action action, bool clause_output, bool literal,
                                double s) {
  check_specificity(s);
  const double low = 1.0 / s;
  const double high = (s - 1.0) / s;
  const bool included = action == Action::include;
  if (included && clause_output && !literal) {
    throw ContractViolation("feedback requested for an included 0-literal in a firing clause");
  }
  if (kind == FeedbackKind::type_i) {
    if (clause_output && literal) {
      return included ? FeedbackCell{high, low, 0.0} : FeedbackCell{0.0, low, high};
    }
    return included ? FeedbackCell{0.0, high, low} : FeedbackCell{low, high, 0.0};
  }
  if (!included && clause_output && !literal) return FeedbackCell{0.0, 0.0, 1.0};
  return FeedbackCell{};
}

/// Precomputed table for a fixed s, indexed by (kind, action, clause output, literal).
class FeedbackTable {
 public:
  explicit FeedbackTable(double s) : s_(s) {
    check_specificity(s);
    for (int kind = 0; kind < 2; ++kind) {
      for (int action = 0; action < 2; ++action) {
        for (int out = 0; out < 2; ++out) {
          for (int lit = 0; lit < 2; ++lit) {
            if (action == 1 && out == 1 && lit == 0) continue;
            const FeedbackCell c =
                lookup_cell(static_cast<FeedbackKind>(kind), static_cast<Action>(action), out, lit, s);
            cells_[index(kind, action, out, lit)] = c;
            rows_[kind * 2 + out][action * 2 + lit] = {c.reward, c.reward + c.penalty};
          }
        }
      }
    }
  }

  double specificity() const noexcept { return s_; }

  /// Cumulative thresholds (reward, reward + penalty) for a uniform draw.
  struct Thresholds {
    double reward = 0.0;
    double reward_or_penalty = 0.0;
  };

  /// Thresholds for a fixed (kind, clause output), indexed by action * 2 + literal.
  const std::array<Thresholds, 4>& row(FeedbackKind kind, bool clause_output) const noexcept {
    return rows_[static_cast<std::size_t>(kind) * 2 + clause_output];
  }

  const FeedbackCell& cell(FeedbackKind kind, Action action, bool clause_output, bool literal) const {
    if (action == Action::include && clause_output && !literal) {
      throw ContractViolation("feedback requested for an included 0-literal in a firing clause");
    }
    return cells_[index(static_cast<int>(kind), static_cast<int>(action), clause_output, literal)];
  }

 private:
  static constexpr std::size_t index(int kind, int action, int out, int lit) {
    return static_cast<std::size_t>(kind * 8 + action * 4 + out * 2 + lit);
  }

  double s_;
  std::array<FeedbackCell, 16> cells_{};
  std::array<std::array<Thresholds, 4>, 4> rows_{};
};

enum class Outcome : std::uint8_t { reward, inaction, penalty };

/// Draws the outcome for one cell. Degenerate cells consume no randomness.
inline Outcome draw_outcome(const FeedbackCell& cell, Rng& rng) {
  if (cell.reward >= 1.0) return Outcome::reward;
  if (cell.penalty >= 1.0) return Outcome::penalty;
  if (cell.reward <= 0.0 && cell.penalty <= 0.0) return Outcome::inaction;
  const double u = rng.uniform();
  if (u < cell.reward) return Outcome::reward;
  if (u < cell.reward + cell.penalty) return Outcome::penalty;
  return Outcome::inaction;
}

inline void update_ta(TsetlinAutomaton& ta, const FeedbackCell& cell, Rng& rng) {
  switch (draw_outcome(cell, rng)) {
    case Outcome::reward: ta.reward(); break;
    case Outcome::penalty: ta.penalize(); break;
    case Outcome::inaction: break;
  }
}

/// Applies one round of feedback to every automaton of a clause.
///
/// The clause output is evaluated once in learning mode before any automaton
/// moves; all 2o lookups use that frozen value.
inline void feed_clause(Clause& clause, const LiteralVector& literals, FeedbackKind kind,
                        const FeedbackTable& table, Rng& rng) {
  const bool output = clause.evaluate(literals, EvalMode::learning);
  if (kind == FeedbackKind::type_ii && !output) return;  // every cell is pure inaction
  const auto& row = table.row(kind, output);
  for (std::size_t k = 0; k < clause.size(); ++k) {
    const bool included = clause.includes(k);
    const bool literal = literals[k];
    if (included && output && !literal) {
      throw ContractViolation("feedback requested for an included 0-literal in a firing clause");
    }
    const auto& t = row[included * 2 + literal];
    if (t.reward_or_penalty <= 0.0) continue;  // pure inaction
    // Branch-free outcome: the draw is unpredictable by construction.
    const double u = t.reward_or_penalty >= 1.0 && t.reward <= 0.0 ? 0.5 : rng.uniform();
    const int delta = (u < t.reward) - ((u >= t.reward) & (u < t.reward_or_penalty));
    clause.shift(k, included ? delta : -delta);
  }
}

inline void feed_clause(Clause& clause, const LiteralVector& literals, FeedbackKind kind, double s,
                        Rng& rng) {
  feed_clause(clause, literals, kind, FeedbackTable(s), rng);
}

}  // namespace tsetlin
