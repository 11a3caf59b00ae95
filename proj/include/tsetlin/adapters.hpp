#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "tsetlin/classic.hpp"
#include "tsetlin/fit.hpp"
#include "tsetlin/multiclass.hpp"
#include "tsetlin/snapshot.hpp"

namespace tsetlin {

// Classification baselines wrapped behind the same real-valued predict()
// as the regression machine, so MAE is computed by shared code.

/// Bits needed to index the grid {0, step, ..., y_max}.
inline std::uint32_t bits_for_grid(double y_max, double step) {
  if (!(step > 0.0)) throw ConfigError("target step must be positive");
  const auto levels = static_cast<std::uint64_t>(std::llround(y_max / step)) + 1;
  std::uint32_t b = 1;
  while ((std::uint64_t{1} << b) < levels) ++b;
  return b;
}

/// Nearest grid index, clamped to [0, max_index].
inline std::uint64_t quantize_target(double y, double step, std::uint64_t max_index) {
  if (!(step > 0.0)) throw ConfigError("target step must be positive");
  const double q = std::round(y / step);
  if (!(q > 0.0)) return 0;
  if (q >= static_cast<double>(max_index)) return max_index;
  return static_cast<std::uint64_t>(q);
}

/// Least-significant bit first.
inline std::vector<std::uint8_t> encode_target(double y, double step, std::uint32_t n_bits) {
  const std::uint64_t q = quantize_target(y, step, (std::uint64_t{1} << n_bits) - 1);
  std::vector<std::uint8_t> bits(n_bits);
  for (std::uint32_t b = 0; b < n_bits; ++b) bits[b] = static_cast<std::uint8_t>((q >> b) & 1U);
  return bits;
}

inline double decode_target(std::span<const std::uint8_t> bits, double step) {
  std::uint64_t q = 0;
  for (std::size_t b = 0; b < bits.size(); ++b) q |= static_cast<std::uint64_t>(bits[b] & 1U) << b;
  return static_cast<double>(q) * step;
}

/// One classic machine per target bit, each on its own derived random stream.
class BitwiseCTMRegressor {
 public:
  BitwiseCTMRegressor(const MachineConfig& ctm_config, std::size_t n_features, double y_max, double step,
                      std::uint64_t seed)
      : step_(step), n_bits_(bits_for_grid(y_max, step)) {
    machines_.reserve(n_bits_);
    rngs_.reserve(n_bits_);
    for (std::uint32_t b = 0; b < n_bits_; ++b) {
      rngs_.emplace_back(derive_seed(seed, b));
      machines_.emplace_back(ctm_config, n_features, rngs_.back());
    }
  }

  BitwiseCTMRegressor(double step, std::vector<ClassicMachine> machines)
      : step_(step), n_bits_(static_cast<std::uint32_t>(machines.size())), machines_(std::move(machines)) {
    if (machines_.empty()) throw StructuralError("bitwise regressor needs at least one machine");
    for (std::uint32_t b = 0; b < n_bits_; ++b) rngs_.emplace_back(derive_seed(machines_[b].config().seed, b));
  }

  double step() const noexcept { return step_; }
  std::uint32_t n_bits() const noexcept { return n_bits_; }
  std::size_t n_features() const noexcept { return machines_.front().n_features(); }
  const ClassicMachine& machine(std::size_t b) const { return machines_.at(b); }

  double predict(const LiteralVector& literals) const {
    std::uint64_t q = 0;
    for (std::uint32_t b = 0; b < n_bits_; ++b) q |= std::uint64_t{machines_[b].predict(literals)} << b;
    return static_cast<double>(q) * step_;
  }

  /// Trains every bit machine on its bit of the encoded target; returns MAE per epoch.
  std::vector<double> fit(const EncodedInputs& inputs, std::span<const double> targets, std::uint32_t epochs,
                          FitOptions options = {}) {
    if (inputs.empty()) throw ConfigError("cannot fit on an empty dataset");
    if (inputs.size() != targets.size()) throw StructuralError("input/target count mismatch");
    std::vector<std::vector<std::uint8_t>> bit_targets(n_bits_, std::vector<std::uint8_t>(targets.size()));
    for (std::size_t i = 0; i < targets.size(); ++i) {
      const auto bits = encode_target(targets[i], step_, n_bits_);
      for (std::uint32_t b = 0; b < n_bits_; ++b) bit_targets[b][i] = bits[b];
    }
    std::vector<double> series;
    FitOptions one_epoch = options;
    one_epoch.record_series = false;
    one_epoch.on_epoch = nullptr;
    for (std::uint32_t e = 0; e < epochs; ++e) {
      for (std::uint32_t b = 0; b < n_bits_; ++b) {
        tsetlin::fit(machines_[b], inputs, std::span<const std::uint8_t>(bit_targets[b]), 1, rngs_[b], one_epoch);
      }
      if (options.record_series) series.push_back(compute_mae(predict_all(*this, inputs), targets));
      if (options.on_epoch) options.on_epoch(e);
    }
    return series;
  }

  template <class Visitor>
  void for_each_clause(Visitor&& visit) const {
    for (const auto& m : machines_) m.for_each_clause(visit);
  }

 private:
  double step_;
  std::uint32_t n_bits_;
  std::vector<ClassicMachine> machines_;
  std::vector<Rng> rngs_;
};

/// One class per grid value i * step, i = 0..round(y_max / step).
class MTMRegressor {
 public:
  /// `mtm_config.clauses` is the total clause count; n_classes is derived from the grid.
  MTMRegressor(MachineConfig mtm_config, std::size_t n_features, double y_max, double step, std::uint64_t seed)
      : step_(step), rng_(seed), machine_(with_classes(mtm_config, y_max, step), n_features, rng_) {}

  MTMRegressor(double step, MultiClassMachine machine, std::uint64_t seed)
      : step_(step), rng_(seed), machine_(std::move(machine)) {}

  static std::uint32_t classes_for(double y_max, double step) {
    if (!(step > 0.0)) throw ConfigError("target step must be positive");
    return static_cast<std::uint32_t>(std::llround(y_max / step)) + 1;
  }

  double step() const noexcept { return step_; }
  std::size_t n_features() const noexcept { return machine_.n_features(); }
  const MultiClassMachine& machine() const noexcept { return machine_; }

  std::uint32_t class_of(double y) const {
    return static_cast<std::uint32_t>(quantize_target(y, step_, machine_.n_classes() - 1));
  }

  double predict(const LiteralVector& literals) const { return machine_.predict(literals) * step_; }

  std::vector<double> fit(const EncodedInputs& inputs, std::span<const double> targets, std::uint32_t epochs,
                          FitOptions options = {}) {
    if (inputs.empty()) throw ConfigError("cannot fit on an empty dataset");
    if (inputs.size() != targets.size()) throw StructuralError("input/target count mismatch");
    std::vector<std::uint32_t> classes(targets.size());
    for (std::size_t i = 0; i < targets.size(); ++i) classes[i] = class_of(targets[i]);
    std::vector<double> series;
    FitOptions one_epoch = options;
    one_epoch.record_series = false;
    one_epoch.on_epoch = nullptr;
    for (std::uint32_t e = 0; e < epochs; ++e) {
      tsetlin::fit(machine_, inputs, std::span<const std::uint32_t>(classes), 1, rng_, one_epoch);
      if (options.record_series) series.push_back(compute_mae(predict_all(*this, inputs), targets));
      if (options.on_epoch) options.on_epoch(e);
    }
    return series;
  }

  template <class Visitor>
  void for_each_clause(Visitor&& visit) const {
    machine_.for_each_clause(visit);
  }

 private:
  static MachineConfig with_classes(MachineConfig c, double y_max, double step) {
    c.kind = MachineKind::multiclass;
    c.n_classes = classes_for(y_max, step);
    return c;
  }

  double step_;
  Rng rng_;
  MultiClassMachine machine_;
};

// Adapter snapshot: "TSTA" u16 version u8 kind(1 bitwise, 2 mtm) u8 reserved
// f64 step, u32 machine count, then per machine u64 length + machine snapshot.
inline constexpr std::string_view kAdapterMagic = "TSTA";

inline Bytes snapshot(const BitwiseCTMRegressor& r) {
  ByteWriter w;
  w.raw(kAdapterMagic);
  w.u16(kSnapshotVersion);
  w.u8(1);
  w.u8(0);
  w.f64(r.step());
  w.u32(r.n_bits());
  for (std::uint32_t b = 0; b < r.n_bits(); ++b) {
    const Bytes m = snapshot(r.machine(b));
    w.u64(m.size());
    w.bytes(m);
  }
  return std::move(w).take();
}

inline Bytes snapshot(const MTMRegressor& r) {
  ByteWriter w;
  w.raw(kAdapterMagic);
  w.u16(kSnapshotVersion);
  w.u8(2);
  w.u8(0);
  w.f64(r.step());
  w.u32(1);
  const Bytes m = snapshot(r.machine());
  w.u64(m.size());
  w.bytes(m);
  return std::move(w).take();
}

}  // namespace tsetlin
