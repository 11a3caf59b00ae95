#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tsetlin/error.hpp"
#include "tsetlin/random.hpp"

namespace tsetlin {

enum class NoiseModel : std::uint8_t { none, gaussian };

/// Additive noise on training targets. The test split is always clean.
struct NoiseSpec {
  NoiseModel model = NoiseModel::none;
  double sigma = 0.0;

  bool active() const noexcept { return model == NoiseModel::gaussian && sigma > 0.0; }
  friend bool operator==(const NoiseSpec&, const NoiseSpec&) = default;
};

/// Everything needed to regenerate a train/test pair bit-exactly.
struct Manifest {
  std::string preset;  // empty for custom specs
  std::uint32_t n_bits = 2;
  std::size_t n_train = 8000;
  std::size_t n_test = 2000;
  NoiseSpec noise;
  std::uint64_t seed = 0;
  double y_max = 300.0;

  friend bool operator==(const Manifest&, const Manifest&) = default;
};

inline double nominal_y_max(std::uint32_t n_bits) { return 100.0 * (std::ldexp(1.0, static_cast<int>(n_bits)) - 1.0); }

/// Default noise level for the noisy presets: an absolute standard deviation,
/// E|noise| = sigma * sqrt(2/pi) ~= 5.0, the same for every input width.
inline constexpr double kDefaultNoiseSigma = 6.25;

/// Presets dataset1..dataset6: 2, 2, 3, 3, 4, 4 input bits; even numbers
/// carry Gaussian noise on the training targets.
inline Manifest preset_manifest(std::string_view name, std::uint64_t seed) {
  static constexpr std::string_view names[] = {"dataset1", "dataset2", "dataset3",
                                               "dataset4", "dataset5", "dataset6"};
  for (std::size_t i = 0; i < 6; ++i) {
    if (name != names[i]) continue;
    Manifest m;
    m.preset = std::string(name);
    m.n_bits = static_cast<std::uint32_t>(2 + i / 2);
    m.y_max = nominal_y_max(m.n_bits);
    m.seed = seed;
    if (i % 2 == 1) m.noise = {NoiseModel::gaussian, kDefaultNoiseSigma};
    return m;
  }
  throw ConfigError("unknown dataset preset '" + std::string(name) + "' (expected dataset1..dataset6)");
}

class Dataset {
 public:
  Dataset() = default;
  Dataset(std::size_t n_features, std::vector<std::uint8_t> inputs, std::vector<double> targets)
      : n_features_(n_features), inputs_(std::move(inputs)), targets_(std::move(targets)) {
    if (n_features_ == 0) throw ConfigError("dataset needs at least one feature");
    if (inputs_.size() != n_features_ * targets_.size()) throw StructuralError("input matrix / target count mismatch");
  }

  std::size_t size() const noexcept { return targets_.size(); }
  bool empty() const noexcept { return targets_.empty(); }
  std::size_t n_features() const noexcept { return n_features_; }
  std::span<const std::uint8_t> inputs() const noexcept { return inputs_; }
  std::span<const double> targets() const noexcept { return targets_; }
  std::span<const std::uint8_t> row(std::size_t i) const {
    return std::span<const std::uint8_t>(inputs_).subspan(i * n_features_, n_features_);
  }

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::size_t n_features_ = 0;
  std::vector<std::uint8_t> inputs_;
  std::vector<double> targets_;
};

struct DatasetSplit {
  Manifest manifest;
  Dataset train;
  Dataset test;
};

/// 100 times the decimal value of the bits, x_1 most significant.
inline double clean_target(std::span<const std::uint8_t> bits) {
  std::uint64_t v = 0;
  for (std::uint8_t b : bits) v = (v << 1) | b;
  return 100.0 * static_cast<double>(v);
}

namespace detail {
enum : std::uint64_t { kTrainStream = 1, kTestStream = 2, kNoiseStream = 3 };

inline Dataset generate_split(std::uint32_t n_bits, std::size_t n, std::uint64_t seed, std::uint64_t stream) {
  Rng rng(derive_seed(seed, stream));
  std::vector<std::uint8_t> inputs(n * n_bits);
  for (auto& b : inputs) b = static_cast<std::uint8_t>(rng() >> 63);
  std::vector<double> targets(n);
  for (std::size_t i = 0; i < n; ++i) {
    targets[i] = clean_target(std::span<const std::uint8_t>(inputs).subspan(i * n_bits, n_bits));
  }
  return Dataset(n_bits, std::move(inputs), std::move(targets));
}
}  // namespace detail

inline DatasetSplit generate(const Manifest& manifest) {
  if (manifest.n_bits < 1 || manifest.n_bits > 62) throw ConfigError("n_bits must be in [1, 62]");
  if (manifest.noise.sigma < 0.0) throw ConfigError("noise sigma must be >= 0");
  DatasetSplit split;
  split.manifest = manifest;
  split.train = detail::generate_split(manifest.n_bits, manifest.n_train, manifest.seed, detail::kTrainStream);
  split.test = detail::generate_split(manifest.n_bits, manifest.n_test, manifest.seed, detail::kTestStream);
  if (manifest.noise.active()) {
    Rng rng(derive_seed(manifest.seed, detail::kNoiseStream));
    std::normal_distribution<double> noise(0.0, manifest.noise.sigma);
    std::vector<double> noisy(split.train.targets().begin(), split.train.targets().end());
    for (double& y : noisy) y += noise(rng.engine());
    std::vector<std::uint8_t> inputs(split.train.inputs().begin(), split.train.inputs().end());
    split.train = Dataset(manifest.n_bits, std::move(inputs), std::move(noisy));
  }
  return split;
}

// ---------------------------------------------------------------------------
// Manifest (JSON)

inline nlohmann::json to_json(const Manifest& m) {
  return nlohmann::json{
      {"format", "tsetlin-dataset/1"},
      {"preset", m.preset},
      {"n_bits", m.n_bits},
      {"n_train", m.n_train},
      {"n_test", m.n_test},
      {"noise", {{"model", m.noise.model == NoiseModel::gaussian ? "gaussian" : "none"},
                 {"sigma", m.noise.sigma},
                 {"applies_to", "train"}}},
      {"seed", m.seed},
      {"y_max", m.y_max},
  };
}

inline Manifest manifest_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format").get<std::string>() != "tsetlin-dataset/1") throw ConfigError("unsupported manifest format");
    Manifest m;
    m.preset = j.at("preset").get<std::string>();
    m.n_bits = j.at("n_bits").get<std::uint32_t>();
    m.n_train = j.at("n_train").get<std::size_t>();
    m.n_test = j.at("n_test").get<std::size_t>();
    const auto model = j.at("noise").at("model").get<std::string>();
    if (model == "gaussian") {
      m.noise.model = NoiseModel::gaussian;
    } else if (model != "none") {
      throw ConfigError("unknown noise model '" + model + "'");
    }
    m.noise.sigma = j.at("noise").at("sigma").get<double>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.y_max = j.at("y_max").get<double>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed manifest: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Delimited text: header x1..xo,y then one sample per row.

/// Shortest round-trip decimal, always with a fractional part ("200.0").
inline std::string format_real(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  std::string s(buf, end);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

inline void write_csv(const Dataset& data, std::ostream& out) {
  for (std::size_t k = 0; k < data.n_features(); ++k) out << 'x' << (k + 1) << ',';
  out << "y\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (std::uint8_t b : data.row(i)) out << static_cast<char>('0' + b) << ',';
    out << format_real(data.targets()[i]) << '\n';
  }
}

inline Dataset read_csv(std::istream& in, const std::string& source = "<stream>") {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw ParseError(source, line_no, "missing header row");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::size_t n_features = 0;
  {
    std::vector<std::string> cols;
    std::stringstream ss(line);
    for (std::string col; std::getline(ss, col, ',');) cols.push_back(col);
    if (cols.size() < 2 || cols.back() != "y") throw ParseError(source, line_no, "header must be x1..xo,y");
    for (std::size_t k = 0; k + 1 < cols.size(); ++k) {
      if (cols[k] != "x" + std::to_string(k + 1)) throw ParseError(source, line_no, "bad header column '" + cols[k] + "'");
    }
    n_features = cols.size() - 1;
  }
  std::vector<std::uint8_t> inputs;
  std::vector<double> targets;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::string_view rest(line);
    for (std::size_t k = 0; k < n_features; ++k) {
      const auto comma = rest.find(',');
      if (comma == std::string_view::npos) {
        throw ParseError(source, line_no, "expected " + std::to_string(n_features + 1) + " fields");
      }
      const auto field = rest.substr(0, comma);
      if (field != "0" && field != "1") {
        throw ParseError(source, line_no, "feature x" + std::to_string(k + 1) + " is not a bit: '" +
                                              std::string(field) + "'");
      }
      inputs.push_back(field == "1" ? 1 : 0);
      rest.remove_prefix(comma + 1);
    }
    if (rest.find(',') != std::string_view::npos) {
      throw ParseError(source, line_no, "expected " + std::to_string(n_features + 1) + " fields");
    }
    double y = 0.0;
    const auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), y);
    if (ec != std::errc() || ptr != rest.data() + rest.size() || rest.empty()) {
      throw ParseError(source, line_no, "target is not a number: '" + std::string(rest) + "'");
    }
    targets.push_back(y);
  }
  return Dataset(n_features, std::move(inputs), std::move(targets));
}

inline void save_csv(const Dataset& data, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  write_csv(data, out);
  if (!out) throw IoError("write failed for " + path.string());
}

inline Dataset load_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return read_csv(in, path.string());
}

/// Writes train.csv, test.csv and manifest.json into `dir`.
inline void save_split(const DatasetSplit& split, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  save_csv(split.train, dir / "train.csv");
  save_csv(split.test, dir / "test.csv");
  std::ofstream out(dir / "manifest.json", std::ios::binary);
  if (!out) throw IoError("cannot write " + (dir / "manifest.json").string());
  out << to_json(split.manifest).dump(2) << '\n';
}

inline DatasetSplit load_split(const std::filesystem::path& dir) {
  DatasetSplit split;
  std::ifstream in(dir / "manifest.json", std::ios::binary);
  if (!in) throw IoError("cannot open " + (dir / "manifest.json").string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("manifest is not valid JSON: " + std::string(e.what()));
  }
  split.manifest = manifest_from_json(j);
  split.train = load_csv(dir / "train.csv");
  split.test = load_csv(dir / "test.csv");
  if (split.train.n_features() != split.manifest.n_bits || split.test.n_features() != split.manifest.n_bits) {
    throw StructuralError("data files do not match manifest width");
  }
  return split;
}

}  // namespace tsetlin
