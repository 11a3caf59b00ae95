#pragma once

#include <map>
#include <string>
#include <variant>

#include "tsetlin/adapters.hpp"
#include "tsetlin/snapshot.hpp"

namespace tsetlin {

/// Anything a snapshot file can hold.
using AnyModel = std::variant<ClassicMachine, MultiClassMachine, RegressionMachine, BitwiseCTMRegressor, MTMRegressor>;

inline AnyModel restore_model(std::span<const std::byte> bytes) {
  if (bytes.size() >= 4 && static_cast<char>(bytes[3]) == 'M') {
    return std::visit([](auto&& m) -> AnyModel { return std::move(m); }, restore_machine(bytes));
  }
  ByteReader r(bytes);
  r.expect_magic(kAdapterMagic);
  const std::uint16_t version = r.u16();
  if (version != kSnapshotVersion) throw SnapshotError("unsupported adapter snapshot version " + std::to_string(version));
  const std::uint8_t kind = r.u8();
  r.u8();
  const double step = r.f64();
  const std::uint32_t count = r.u32();
  std::vector<AnyMachine> machines;
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::uint64_t len = r.u64();
    machines.push_back(restore_machine(r.bytes(len)));
  }
  if (r.remaining() != 0) throw SnapshotError("trailing bytes after adapter snapshot");
  if (kind == 1) {
    std::vector<ClassicMachine> bits;
    for (auto& m : machines) {
      if (!std::holds_alternative<ClassicMachine>(m)) throw SnapshotError("bitwise adapter holds a non-ctm machine");
      bits.push_back(std::get<ClassicMachine>(std::move(m)));
    }
    return BitwiseCTMRegressor(step, std::move(bits));
  }
  if (kind == 2) {
    if (count != 1 || !std::holds_alternative<MultiClassMachine>(machines[0])) {
      throw SnapshotError("mtm adapter must hold exactly one mtm machine");
    }
    auto& mtm = std::get<MultiClassMachine>(machines[0]);
    const std::uint64_t seed = mtm.config().seed;
    return MTMRegressor(step, std::move(mtm), seed);
  }
  throw SnapshotError("unknown adapter kind " + std::to_string(kind));
}

inline Bytes snapshot(const AnyModel& model) {
  return std::visit([](const auto& m) { return snapshot(m); }, model);
}

inline std::size_t model_features(const AnyModel& model) {
  return std::visit([](const auto& m) { return m.n_features(); }, model);
}

/// Real-valued output of any model (classifier outputs are cast).
inline double predict_value(const AnyModel& model, const LiteralVector& literals) {
  return std::visit([&](const auto& m) { return static_cast<double>(m.predict(literals)); }, model);
}

/// MAE of any model's real-valued output over encoded inputs.
inline double model_mae(const AnyModel& model, const EncodedInputs& inputs, std::span<const double> targets) {
  std::vector<double> per_pattern(inputs.n_patterns());
  for (std::size_t p = 0; p < inputs.n_patterns(); ++p) per_pattern[p] = predict_value(model, inputs.pattern(p));
  std::vector<double> preds(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) preds[i] = per_pattern[inputs.pattern_of(i)];
  return compute_mae(preds, targets);
}

template <class Model>
std::map<std::string, std::size_t> pattern_census(const Model& model) {
  std::map<std::string, std::size_t> census;
  model.for_each_clause([&](const Clause& c) { ++census[clause_pattern(c)]; });
  return census;
}

inline std::map<std::string, std::size_t> pattern_census(const AnyModel& model) {
  return std::visit([](const auto& m) { return pattern_census(m); }, model);
}

}  // namespace tsetlin
