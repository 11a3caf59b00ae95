#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "tsetlin/classic.hpp"

namespace tsetlin {

/// One polar clause pool per class; the prediction is the argmax of pool
/// votes with ties going to the lowest class index.
class MultiClassMachine {
 public:
  using target_type = std::uint32_t;

  MultiClassMachine(const MachineConfig& config, std::size_t n_features, Rng& rng)
      : config_(checked(config)), n_features_(n_features), table_(config.specificity) {
    pools_.reserve(config_.n_classes);
    for (std::uint32_t i = 0; i < config_.n_classes; ++i) {
      pools_.emplace_back(config_.clauses_per_class(), n_features, config_.depth, rng);
    }
  }

  MultiClassMachine(const MachineConfig& config, std::size_t n_features, std::vector<PolarClausePool> pools)
      : config_(checked(config)), n_features_(n_features), table_(config.specificity), pools_(std::move(pools)) {
    if (pools_.size() != config_.n_classes) throw StructuralError("mtm pool count does not match config");
    for (const auto& p : pools_) {
      if (p.clauses().size() != config_.clauses_per_class()) throw StructuralError("mtm pool size mismatch");
    }
  }

  const MachineConfig& config() const noexcept { return config_; }
  std::size_t n_features() const noexcept { return n_features_; }
  std::size_t n_classes() const noexcept { return pools_.size(); }
  const PolarClausePool& pool(std::size_t cls) const { return pools_.at(cls); }

  std::vector<int> scores(const LiteralVector& literals) const {
    check_width(n_features_, literals);
    std::vector<int> out(pools_.size());
    for (std::size_t i = 0; i < pools_.size(); ++i) out[i] = pools_[i].vote_sum(literals, EvalMode::inference);
    return out;
  }

  std::uint32_t predict(const LiteralVector& literals) const { return argmax(scores(literals)); }

  static std::uint32_t argmax(const std::vector<int>& scores) {
    // max_element returns the first maximum, i.e. the lowest index on ties
    return static_cast<std::uint32_t>(std::max_element(scores.begin(), scores.end()) - scores.begin());
  }

  /// The target pool learns as if y=1; one uniformly drawn other pool learns as if y=0.
  void train_sample(const LiteralVector& literals, std::uint32_t target, Rng& rng) {
    check_width(n_features_, literals);
    if (target >= pools_.size()) {
      throw StructuralError("class " + std::to_string(target) + " out of range for " +
                            std::to_string(pools_.size()) + " classes");
    }
    const int t = static_cast<int>(config_.threshold);
    pools_[target].train(literals, true, t, table_, rng);
    auto negative = static_cast<std::uint32_t>(rng.below(pools_.size() - 1));
    if (negative >= target) ++negative;
    pools_[negative].train(literals, false, t, table_, rng);
  }

  template <class Visitor>
  void for_each_clause(Visitor&& visit) const {
    for (const auto& p : pools_) {
      for (const Clause& c : p.clauses()) visit(c);
    }
  }

  friend bool operator==(const MultiClassMachine& a, const MultiClassMachine& b) {
    return a.config_ == b.config_ && a.n_features_ == b.n_features_ && a.pools_ == b.pools_;
  }

 private:
  static const MachineConfig& checked(const MachineConfig& config) {
    if (config.kind != MachineKind::multiclass) throw ConfigError("config kind is not mtm");
    config.validate();
    return config;
  }

  MachineConfig config_;
  std::size_t n_features_;
  FeedbackTable table_;
  std::vector<PolarClausePool> pools_;
};

}  // namespace tsetlin
