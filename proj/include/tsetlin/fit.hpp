#pragma once

#include <cmath>
#include <concepts>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <span>
#include <type_traits>
#include <vector>

#include "tsetlin/clause.hpp"
#include "tsetlin/error.hpp"
#include "tsetlin/random.hpp"

namespace tsetlin {

/// Literal vectors for a row-major bit matrix, deduplicated.
///
/// Evaluation only depends on the input pattern, so predictions are computed
/// once per distinct pattern and broadcast back to samples.
class EncodedInputs {
 public:
  EncodedInputs() = default;

  EncodedInputs(std::span<const std::uint8_t> bits, std::size_t n_features) : n_features_(n_features) {
    if (n_features == 0) throw ConfigError("inputs need at least one feature");
    if (bits.size() % n_features != 0) throw StructuralError("bit matrix is not a multiple of the row width");
    const std::size_t n = bits.size() / n_features;
    std::map<std::vector<std::uint64_t>, std::uint32_t> seen;
    sample_to_pattern_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      LiteralVector lits(bits.subspan(i * n_features, n_features));
      std::vector<std::uint64_t> key(lits.words().begin(), lits.words().end());
      auto [it, inserted] = seen.try_emplace(std::move(key), static_cast<std::uint32_t>(patterns_.size()));
      if (inserted) patterns_.push_back(std::move(lits));
      sample_to_pattern_.push_back(it->second);
    }
  }

  std::size_t size() const noexcept { return sample_to_pattern_.size(); }
  bool empty() const noexcept { return sample_to_pattern_.empty(); }
  std::size_t n_features() const noexcept { return n_features_; }
  std::size_t n_patterns() const noexcept { return patterns_.size(); }

  const LiteralVector& operator[](std::size_t i) const { return patterns_[sample_to_pattern_[i]]; }
  const LiteralVector& pattern(std::size_t p) const { return patterns_[p]; }
  std::uint32_t pattern_of(std::size_t i) const { return sample_to_pattern_[i]; }

 private:
  std::size_t n_features_ = 0;
  std::vector<LiteralVector> patterns_;
  std::vector<std::uint32_t> sample_to_pattern_;
};

template <class Model>
concept Predictor = requires(const Model& m, const LiteralVector& lits) {
  { m.predict(lits) };
};

template <class Model>
concept Regressor = requires(const Model& m, const LiteralVector& lits) {
  { m.predict(lits) } -> std::convertible_to<double>;
};

template <class Machine>
concept TrainableMachine = Predictor<Machine> && requires(Machine& m, const LiteralVector& lits,
                                                          typename Machine::target_type y, Rng& rng) {
  m.train_sample(lits, y, rng);
};

template <Predictor Model>
auto predict_all(const Model& model, const EncodedInputs& inputs) {
  using Pred = std::decay_t<decltype(model.predict(inputs.pattern(0)))>;
  std::vector<Pred> per_pattern;
  per_pattern.reserve(inputs.n_patterns());
  for (std::size_t p = 0; p < inputs.n_patterns(); ++p) per_pattern.push_back(model.predict(inputs.pattern(p)));
  std::vector<Pred> out;
  out.reserve(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) out.push_back(per_pattern[inputs.pattern_of(i)]);
  return out;
}

inline double compute_mae(std::span<const double> predictions, std::span<const double> targets) {
  if (predictions.size() != targets.size()) throw StructuralError("prediction/target length mismatch");
  if (predictions.empty()) throw ConfigError("cannot compute MAE of empty vectors");
  double sum = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) sum += std::abs(predictions[i] - targets[i]);
  return sum / static_cast<double>(predictions.size());
}

template <class T>
double error_rate(std::span<const T> predictions, std::span<const T> targets) {
  if (predictions.size() != targets.size()) throw StructuralError("prediction/target length mismatch");
  if (predictions.empty()) throw ConfigError("cannot compute error rate of empty vectors");
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) wrong += predictions[i] != targets[i] ? 1 : 0;
  return static_cast<double>(wrong) / static_cast<double>(predictions.size());
}

/// MAE for real-valued models, error rate for classifiers.
template <Predictor Model, class Target>
double training_metric(const Model& model, const EncodedInputs& inputs, std::span<const Target> targets) {
  const auto preds = predict_all(model, inputs);
  using Pred = typename decltype(preds)::value_type;
  if constexpr (std::is_floating_point_v<Pred>) {
    return compute_mae(preds, std::span<const double>(targets.data(), targets.size()));
  } else {
    std::vector<Pred> cast(targets.begin(), targets.end());
    return error_rate<Pred>(preds, cast);
  }
}

struct FitOptions {
  bool shuffle = false;
  bool record_series = true;
  std::function<void(std::uint32_t epoch)> on_epoch;  // called after each pass
};

/// Runs `epochs` passes in stored order (or reshuffled per epoch when asked)
/// and returns the training metric measured after each epoch.
template <TrainableMachine Machine>
std::vector<double> fit(Machine& machine, const EncodedInputs& inputs,
                        std::span<const typename Machine::target_type> targets, std::uint32_t epochs, Rng& rng,
                        FitOptions options = {}) {
  if (inputs.empty()) throw ConfigError("cannot fit on an empty dataset");
  if (inputs.size() != targets.size()) throw StructuralError("input/target count mismatch");
  if (inputs.n_features() != machine.n_features()) throw StructuralError("dataset width does not match machine");

  std::vector<double> series;
  std::vector<std::size_t> order(inputs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::uint32_t e = 0; e < epochs; ++e) {
    if (options.shuffle) {
      for (std::size_t i = order.size() - 1; i > 0; --i) std::swap(order[i], order[rng.below(i + 1)]);
    }
    for (std::size_t i : order) machine.train_sample(inputs[i], targets[i], rng);
    if (options.record_series) series.push_back(training_metric(machine, inputs, targets));
    if (options.on_epoch) options.on_epoch(e);
  }
  return series;
}

}  // namespace tsetlin
