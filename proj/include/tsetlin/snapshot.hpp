#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tsetlin/classic.hpp"
#include "tsetlin/multiclass.hpp"
#include "tsetlin/regression.hpp"

namespace tsetlin {

// Machine snapshot layout, all integers little-endian:
//
//   "TSTM"  u16 version  u8 kind  u8 reserved
//   u32 n_features
//   config: u32 m, u32 T, f64 s, f64 K, u32 n_classes, f64 y_max,
//           u32 depth, u32 epochs, u64 seed
//   u64 automaton count, then u32 states clause-major / literal-minor
//   (multiclass: class-major first)
inline constexpr std::string_view kMachineMagic = "TSTM";
inline constexpr std::uint16_t kSnapshotVersion = 1;

using Bytes = std::vector<std::byte>;

class ByteWriter {
 public:
  void raw(std::string_view s) {
    for (char c : s) out_.push_back(static_cast<std::byte>(c));
  }
  void u8(std::uint8_t v) { out_.push_back(static_cast<std::byte>(v)); }
  void u16(std::uint16_t v) { le(v, 2); }
  void u32(std::uint32_t v) { le(v, 4); }
  void u64(std::uint64_t v) { le(v, 8); }
  void f64(double v) { le(std::bit_cast<std::uint64_t>(v), 8); }
  void bytes(std::span<const std::byte> b) { out_.insert(out_.end(), b.begin(), b.end()); }

  Bytes take() && { return std::move(out_); }

 private:
  void le(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) out_.push_back(static_cast<std::byte>((v >> (8 * i)) & 0xFF));
  }
  Bytes out_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::byte> in) : in_(in) {}

  void expect_magic(std::string_view magic) {
    need(magic.size());
    for (std::size_t i = 0; i < magic.size(); ++i) {
      if (static_cast<char>(in_[pos_ + i]) != magic[i]) {
        throw SnapshotError("bad snapshot magic (expected '" + std::string(magic) + "')");
      }
    }
    pos_ += magic.size();
  }
  std::uint8_t u8() { return static_cast<std::uint8_t>(le(1)); }
  std::uint16_t u16() { return static_cast<std::uint16_t>(le(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(le(4)); }
  std::uint64_t u64() { return le(8); }
  double f64() { return std::bit_cast<double>(le(8)); }
  std::span<const std::byte> bytes(std::size_t n) {
    need(n);
    auto out = in_.subspan(pos_, n);
    pos_ += n;
    return out;
  }

  std::size_t remaining() const noexcept { return in_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (in_.size() - pos_ < n) throw SnapshotError("snapshot truncated");
  }
  std::uint64_t le(int n) {
    need(static_cast<std::size_t>(n));
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(in_[pos_ + i]) << (8 * i);
    pos_ += static_cast<std::size_t>(n);
    return v;
  }

  std::span<const std::byte> in_;
  std::size_t pos_ = 0;
};

namespace detail {

inline void write_header(ByteWriter& w, const MachineConfig& c, std::size_t n_features) {
  w.raw(kMachineMagic);
  w.u16(kSnapshotVersion);
  w.u8(static_cast<std::uint8_t>(c.kind));
  w.u8(0);
  w.u32(static_cast<std::uint32_t>(n_features));
  w.u32(c.clauses);
  w.u32(c.threshold);
  w.f64(c.specificity);
  w.f64(c.gain);
  w.u32(c.n_classes);
  w.f64(c.y_max);
  w.u32(c.depth);
  w.u32(c.epochs);
  w.u64(c.seed);
}

inline void write_clauses(ByteWriter& w, std::span<const Clause> clauses) {
  for (const Clause& c : clauses) {
    for (const auto& ta : c.team()) w.u32(ta.state());
  }
}

inline std::vector<Clause> read_clauses(ByteReader& r, std::size_t count, std::size_t n_features,
                                        std::uint32_t depth) {
  std::vector<Clause> out;
  out.reserve(count);
  for (std::size_t j = 0; j < count; ++j) {
    std::vector<TsetlinAutomaton> team;
    team.reserve(2 * n_features);
    for (std::size_t k = 0; k < 2 * n_features; ++k) {
      const std::uint32_t state = r.u32();
      if (state < 1 || state > 2 * depth) throw SnapshotError("automaton state out of range");
      team.emplace_back(depth, state);
    }
    out.emplace_back(std::move(team));
  }
  return out;
}

}  // namespace detail

inline Bytes snapshot(const ClassicMachine& m) {
  ByteWriter w;
  detail::write_header(w, m.config(), m.n_features());
  w.u64(std::uint64_t{m.config().clauses} * 2 * m.n_features());
  detail::write_clauses(w, m.pool().clauses());
  return std::move(w).take();
}

inline Bytes snapshot(const MultiClassMachine& m) {
  ByteWriter w;
  detail::write_header(w, m.config(), m.n_features());
  w.u64(std::uint64_t{m.config().clauses} * 2 * m.n_features());
  for (std::size_t i = 0; i < m.n_classes(); ++i) detail::write_clauses(w, m.pool(i).clauses());
  return std::move(w).take();
}

inline Bytes snapshot(const RegressionMachine& m) {
  ByteWriter w;
  detail::write_header(w, m.config(), m.n_features());
  w.u64(std::uint64_t{m.config().clauses} * 2 * m.n_features());
  detail::write_clauses(w, m.clauses());
  return std::move(w).take();
}

using AnyMachine = std::variant<ClassicMachine, MultiClassMachine, RegressionMachine>;

inline AnyMachine restore_machine(ByteReader& r) {
  r.expect_magic(kMachineMagic);
  const std::uint16_t version = r.u16();
  if (version != kSnapshotVersion) {
    throw SnapshotError("unsupported snapshot version " + std::to_string(version) + " (expected " +
                        std::to_string(kSnapshotVersion) + ")");
  }
  const std::uint8_t kind = r.u8();
  if (kind > 2) throw SnapshotError("unknown machine kind " + std::to_string(kind));
  r.u8();
  MachineConfig c;
  c.kind = static_cast<MachineKind>(kind);
  const std::size_t n_features = r.u32();
  c.clauses = r.u32();
  c.threshold = r.u32();
  c.specificity = r.f64();
  c.gain = r.f64();
  c.n_classes = r.u32();
  c.y_max = r.f64();
  c.depth = r.u32();
  c.epochs = r.u32();
  c.seed = r.u64();
  try {
    c.validate();
  } catch (const ConfigError& e) {
    throw SnapshotError(std::string("snapshot carries invalid config: ") + e.what());
  }
  if (n_features == 0) throw SnapshotError("snapshot has zero features");
  const std::uint64_t count = r.u64();
  if (count != std::uint64_t{c.clauses} * 2 * n_features) throw SnapshotError("automaton count mismatch");
  if (r.remaining() < count * 4) throw SnapshotError("snapshot truncated");

  switch (c.kind) {
    case MachineKind::classic:
      return ClassicMachine(c, n_features, PolarClausePool(detail::read_clauses(r, c.clauses, n_features, c.depth)));
    case MachineKind::multiclass: {
      std::vector<PolarClausePool> pools;
      for (std::uint32_t i = 0; i < c.n_classes; ++i) {
        pools.emplace_back(detail::read_clauses(r, c.clauses_per_class(), n_features, c.depth));
      }
      return MultiClassMachine(c, n_features, std::move(pools));
    }
    case MachineKind::regression:
      return RegressionMachine(c, n_features, detail::read_clauses(r, c.clauses, n_features, c.depth));
  }
  throw SnapshotError("unreachable machine kind");
}

inline AnyMachine restore_machine(std::span<const std::byte> bytes) {
  ByteReader r(bytes);
  AnyMachine m = restore_machine(r);
  if (r.remaining() != 0) throw SnapshotError("trailing bytes after machine snapshot");
  return m;
}

inline void write_file(const std::filesystem::path& path, std::span<const std::byte> bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

inline Bytes read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  Bytes out(raw.size());
  std::memcpy(out.data(), raw.data(), raw.size());
  return out;
}

}  // namespace tsetlin
