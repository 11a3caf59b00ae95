#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "tsetlin/clause.hpp"
#include "tsetlin/config.hpp"
#include "tsetlin/feedback.hpp"
#include "tsetlin/random.hpp"

namespace tsetlin {

inline void check_width(std::size_t expected, const LiteralVector& literals) {
  if (literals.n_features() != expected) {
    throw StructuralError("input has " + std::to_string(literals.n_features()) + " features, machine expects " +
                          std::to_string(expected));
  }
}

/// Clauses with alternating polarity: even positions (0, 2, ...) vote for
/// the class, odd positions vote against it.
class PolarClausePool {
 public:
  PolarClausePool() = default;

  PolarClausePool(std::size_t n_clauses, std::size_t n_features, std::uint32_t depth, Rng& rng) {
    clauses_.reserve(n_clauses);
    for (std::size_t j = 0; j < n_clauses; ++j) clauses_.emplace_back(n_features, depth, rng);
  }

  explicit PolarClausePool(std::vector<Clause> clauses) : clauses_(std::move(clauses)) {}

  static constexpr bool positive(std::size_t j) noexcept { return j % 2 == 0; }

  std::span<const Clause> clauses() const noexcept { return clauses_; }
  std::span<Clause> clauses() noexcept { return clauses_; }

  int vote_sum(const LiteralVector& literals, EvalMode mode) const {
    int sum = 0;
    for (std::size_t j = 0; j < clauses_.size(); ++j) {
      if (clauses_[j].evaluate(literals, mode)) sum += positive(j) ? 1 : -1;
    }
    return sum;
  }

  /// One training step toward `target`. The clamped vote sum is computed once
  /// in learning mode; activation draws follow clause index order.
  void train(const LiteralVector& literals, bool target, int threshold, const FeedbackTable& table, Rng& rng) {
    const int f = std::clamp(vote_sum(literals, EvalMode::learning), -threshold, threshold);
    const double two_t = 2.0 * threshold;
    const double p_type_i = (threshold - f) / two_t;
    const double p_type_ii = (threshold + f) / two_t;
    for (std::size_t j = 0; j < clauses_.size(); ++j) {
      const bool reinforce = positive(j) == target;
      if (reinforce) {
        if (rng.bernoulli(p_type_i)) feed_clause(clauses_[j], literals, FeedbackKind::type_i, table, rng);
      } else {
        if (rng.bernoulli(p_type_ii)) feed_clause(clauses_[j], literals, FeedbackKind::type_ii, table, rng);
      }
    }
  }

  friend bool operator==(const PolarClausePool&, const PolarClausePool&) = default;

 private:
  std::vector<Clause> clauses_;
};

/// Binary classifier: positive minus negative votes, ties resolve to 0.
class ClassicMachine {
 public:
  using target_type = std::uint8_t;

  ClassicMachine(const MachineConfig& config, std::size_t n_features, Rng& rng)
      : config_(checked(config)), n_features_(n_features), table_(config.specificity),
        pool_(config.clauses, n_features, config.depth, rng) {}

  ClassicMachine(const MachineConfig& config, std::size_t n_features, PolarClausePool pool)
      : config_(checked(config)), n_features_(n_features), table_(config.specificity), pool_(std::move(pool)) {
    if (pool_.clauses().size() != config_.clauses) throw StructuralError("ctm pool size does not match config");
  }

  const MachineConfig& config() const noexcept { return config_; }
  std::size_t n_features() const noexcept { return n_features_; }
  const PolarClausePool& pool() const noexcept { return pool_; }

  int vote_sum(const LiteralVector& literals) const {
    check_width(n_features_, literals);
    return pool_.vote_sum(literals, EvalMode::inference);
  }

  std::uint8_t predict(const LiteralVector& literals) const { return vote_sum(literals) > 0 ? 1 : 0; }

  void train_sample(const LiteralVector& literals, std::uint8_t target, Rng& rng) {
    check_width(n_features_, literals);
    pool_.train(literals, target != 0, static_cast<int>(config_.threshold), table_, rng);
  }

  template <class Visitor>
  void for_each_clause(Visitor&& visit) const {
    for (const Clause& c : pool_.clauses()) visit(c);
  }

  friend bool operator==(const ClassicMachine& a, const ClassicMachine& b) {
    return a.config_ == b.config_ && a.n_features_ == b.n_features_ && a.pool_ == b.pool_;
  }

 private:
  static const MachineConfig& checked(const MachineConfig& config) {
    if (config.kind != MachineKind::classic) throw ConfigError("config kind is not ctm");
    config.validate();
    return config;
  }

  MachineConfig config_;
  std::size_t n_features_;
  FeedbackTable table_;
  PolarClausePool pool_;
};

}  // namespace tsetlin
