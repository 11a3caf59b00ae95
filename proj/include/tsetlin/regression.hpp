#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "tsetlin/classic.hpp"

namespace tsetlin {

/// Probability that a clause receives feedback: K * |y - target| / y_max,
/// capped at 1.
inline double activation_probability(double predicted, double target, double y_max, double gain) {
  if (!(y_max > 0.0)) throw ConfigError("y_max must be positive");
  if (!(gain > 0.0)) throw ConfigError("gain K must be positive");
  return std::min(1.0, gain * std::abs(predicted - target) / y_max);
}

/// Polarity-free clauses whose firing count, normalized by T and scaled by
/// y_max, is the continuous output.
class RegressionMachine {
 public:
  using target_type = double;

  RegressionMachine(const MachineConfig& config, std::size_t n_features, Rng& rng)
      : config_(checked(config)), n_features_(n_features), table_(config.specificity) {
    clauses_.reserve(config_.clauses);
    for (std::uint32_t j = 0; j < config_.clauses; ++j) clauses_.emplace_back(n_features, config_.depth, rng);
  }

  RegressionMachine(const MachineConfig& config, std::size_t n_features, std::vector<Clause> clauses)
      : config_(checked(config)), n_features_(n_features), table_(config.specificity), clauses_(std::move(clauses)) {
    if (clauses_.size() != config_.clauses) throw StructuralError("rtm clause count does not match config");
  }

  const MachineConfig& config() const noexcept { return config_; }
  std::size_t n_features() const noexcept { return n_features_; }
  std::span<const Clause> clauses() const noexcept { return clauses_; }

  std::uint32_t raw_votes(const LiteralVector& literals, EvalMode mode = EvalMode::inference) const {
    check_width(n_features_, literals);
    std::uint32_t votes = 0;
    for (const Clause& c : clauses_) votes += c.evaluate(literals, mode) ? 1U : 0U;
    return votes;
  }

  double output_for_votes(std::uint32_t votes) const noexcept {
    return std::min(votes, config_.threshold) * config_.y_max / config_.threshold;
  }

  double predict(const LiteralVector& literals) const { return output_for_votes(raw_votes(literals)); }

  /// Type I on every clause (each with probability P_act) when the learning-mode
  /// output undershoots the target, Type II when it overshoots, nothing on a hit.
  void train_sample(const LiteralVector& literals, double target, Rng& rng) {
    const double y = output_for_votes(raw_votes(literals, EvalMode::learning));
    if (y == target) return;
    const double p = activation_probability(y, target, config_.y_max, config_.gain);
    const FeedbackKind kind = y < target ? FeedbackKind::type_i : FeedbackKind::type_ii;
    // Selected clauses are visited in index order; skipping ahead by a
    // geometric gap replaces one Bernoulli draw per clause.
    const std::uint64_t m = clauses_.size();
    const GeometricSkipper skip(p);
    for (std::uint64_t j = skip.next(rng); j < m;) {
      feed_clause(clauses_[j], literals, kind, table_, rng);
      const std::uint64_t gap = skip.next(rng);
      if (gap >= m - j) break;
      j += gap + 1;
    }
  }

  template <class Visitor>
  void for_each_clause(Visitor&& visit) const {
    for (const Clause& c : clauses_) visit(c);
  }

  friend bool operator==(const RegressionMachine& a, const RegressionMachine& b) {
    return a.config_ == b.config_ && a.n_features_ == b.n_features_ && a.clauses_ == b.clauses_;
  }

 private:
  static const MachineConfig& checked(const MachineConfig& config) {
    if (config.kind != MachineKind::regression) throw ConfigError("config kind is not rtm");
    config.validate();
    return config;
  }

  MachineConfig config_;
  std::size_t n_features_;
  FeedbackTable table_;
  std::vector<Clause> clauses_;
};

}  // namespace tsetlin
