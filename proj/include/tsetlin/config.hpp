#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "tsetlin/error.hpp"

namespace tsetlin {

enum class MachineKind : std::uint8_t { classic = 0, multiclass = 1, regression = 2 };

inline std::string_view to_string(MachineKind kind) {
  switch (kind) {
    case MachineKind::classic: return "ctm";
    case MachineKind::multiclass: return "mtm";
    case MachineKind::regression: return "rtm";
  }
  return "?";
}

inline MachineKind parse_machine_kind(std::string_view name) {
  if (name == "ctm") return MachineKind::classic;
  if (name == "mtm") return MachineKind::multiclass;
  if (name == "rtm") return MachineKind::regression;
  throw ConfigError("unknown machine kind '" + std::string(name) + "' (expected ctm, mtm or rtm)");
}

/// Hyperparameters shared by all machine variants.
///
/// `clauses` is the total clause count m. For the multiclass machine it is
/// split evenly into per-class pools. `gain` (K) and `y_max` are used only
/// by the regression machine; `n_classes` only by the multiclass machine.
struct MachineConfig {
  MachineKind kind = MachineKind::regression;
  std::uint32_t clauses = 3;
  std::uint32_t threshold = 3;
  double specificity = 2.0;
  double gain = 1.0;
  std::uint32_t n_classes = 2;
  double y_max = 300.0;
  std::uint32_t depth = 100;
  std::uint32_t epochs = 200;
  std::uint64_t seed = 1;

  friend bool operator==(const MachineConfig&, const MachineConfig&) = default;

  std::uint32_t clauses_per_class() const { return kind == MachineKind::multiclass ? clauses / n_classes : clauses; }

  void validate() const {
    if (clauses == 0) throw ConfigError("clause count m must be positive");
    if (threshold == 0) throw ConfigError("threshold T must be positive");
    if (!(specificity >= 1.0)) throw ConfigError("specificity s must be >= 1");
    if (depth == 0) throw ConfigError("memory depth must be >= 1");
    switch (kind) {
      case MachineKind::classic:
        if (clauses % 2 != 0) throw ConfigError("ctm clause count must be even");
        break;
      case MachineKind::multiclass:
        if (n_classes < 2) throw ConfigError("mtm needs at least 2 classes");
        if (clauses % n_classes != 0 || (clauses / n_classes) % 2 != 0) {
          throw ConfigError("mtm clause count must split into even per-class pools (m=" +
                            std::to_string(clauses) + ", classes=" + std::to_string(n_classes) + ")");
        }
        break;
      case MachineKind::regression:
        if (!(gain > 0.0)) throw ConfigError("rtm gain K must be positive");
        if (!(y_max > 0.0)) throw ConfigError("rtm y_max must be positive");
        if (clauses < threshold) throw ConfigError("rtm clause count must be >= T");
        break;
    }
  }
};

}  // namespace tsetlin
