#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "tsetlin/dataset.hpp"
#include "tsetlin/model.hpp"

namespace tsetlin {

enum class Method : std::uint8_t { rtm, ctm_bitwise, mtm_classes };

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::rtm: return "rtm";
    case Method::ctm_bitwise: return "ctm-bitwise";
    case Method::mtm_classes: return "mtm-classes";
  }
  return "?";
}

inline Method parse_method(std::string_view name) {
  if (name == "rtm") return Method::rtm;
  if (name == "ctm-bitwise" || name == "ctm") return Method::ctm_bitwise;
  if (name == "mtm-classes" || name == "mtm") return Method::mtm_classes;
  throw ConfigError("unknown method '" + std::string(name) + "' (expected rtm, ctm-bitwise or mtm-classes)");
}

/// Stream id separating machine randomness from data randomness under one run seed.
inline constexpr std::uint64_t kMachineStream = 0x6d616368;

inline std::uint64_t machine_seed(std::uint64_t run_seed) { return derive_seed(run_seed, kMachineStream); }

/// One experiment cell: a dataset, a method and its hyperparameters.
///
/// `size` is the value listed in a comparison grid. For rtm and ctm-bitwise it
/// is used as both the clause count and T. For mtm-classes it is a total clause
/// budget shared by all classes; each class gets the nearest even share (>= 2)
/// and that share is also the per-class T.
struct CellSpec {
  Manifest data;
  Method method = Method::rtm;
  std::uint32_t size = 3;
  std::optional<std::uint32_t> clauses;  // rtm only: overrides m = size
  double specificity = 2.0;
  double gain = 1.0;
  std::uint32_t depth = 100;
  std::uint32_t epochs = 200;
  double step = 1.0;  // output quantum for the two baselines
  bool shuffle = false;
  std::uint64_t seed = 1;  // machine seed

  friend bool operator==(const CellSpec&, const CellSpec&) = default;
};

inline std::uint32_t mtm_clauses_per_class(std::uint32_t budget, std::uint32_t n_classes) {
  const double share = static_cast<double>(budget) / (2.0 * n_classes);
  return std::max<std::uint32_t>(2, 2 * static_cast<std::uint32_t>(std::llround(share)));
}

/// The fully resolved machine configuration a cell trains.
inline MachineConfig machine_config(const CellSpec& cell) {
  MachineConfig c;
  c.specificity = cell.specificity;
  c.gain = cell.gain;
  c.depth = cell.depth;
  c.epochs = cell.epochs;
  c.seed = cell.seed;
  c.y_max = cell.data.y_max;
  switch (cell.method) {
    case Method::rtm:
      c.kind = MachineKind::regression;
      c.threshold = cell.size;
      c.clauses = cell.clauses.value_or(cell.size);
      break;
    case Method::ctm_bitwise:
      c.kind = MachineKind::classic;
      c.threshold = cell.size;
      c.clauses = cell.size;
      break;
    case Method::mtm_classes: {
      c.kind = MachineKind::multiclass;
      c.n_classes = MTMRegressor::classes_for(cell.data.y_max, cell.step);
      const std::uint32_t per_class = mtm_clauses_per_class(cell.size, c.n_classes);
      c.threshold = per_class;
      c.clauses = per_class * c.n_classes;
      break;
    }
  }
  c.validate();
  return c;
}

inline std::string interpretation(const CellSpec& cell) {
  switch (cell.method) {
    case Method::rtm:
      return "rtm: T = grid value, m = grid value unless overridden, y_max = nominal dataset maximum";
    case Method::ctm_bitwise:
      return "ctm-bitwise: grid value used as both m and T for each bit machine; targets rounded to the step grid, "
             "LSB first";
    case Method::mtm_classes:
      return "mtm-classes: grid value is the total clause budget; per-class pool = nearest even share (>= 2), "
             "per-class T = pool size; one class per step";
  }
  return {};
}

struct EvalReport {
  CellSpec cell;
  MachineConfig config;
  std::vector<double> train_series;  // MAE after each epoch
  std::vector<double> test_series;
  double final_train_mae = 0.0;
  double final_test_mae = 0.0;
  bool coverage_complete = false;  // every possible input occurs in the training split
  std::map<std::string, std::size_t> census;
  double wall_seconds = 0.0;  // kept out of the deterministic JSON
};

struct TrainedCell {
  EvalReport report;
  AnyModel model;
};

namespace detail {

inline AnyModel build_model(const CellSpec& cell, const MachineConfig& config, std::size_t n_features, Rng& rng) {
  switch (cell.method) {
    case Method::rtm: return RegressionMachine(config, n_features, rng);
    case Method::ctm_bitwise: return BitwiseCTMRegressor(config, n_features, cell.data.y_max, cell.step, cell.seed);
    case Method::mtm_classes: return MTMRegressor(config, n_features, cell.data.y_max, cell.step, cell.seed);
  }
  throw ConfigError("unknown method");
}

inline EncodedInputs encode(const Dataset& d) { return EncodedInputs(d.inputs(), d.n_features()); }

}  // namespace detail

/// Trains one cell on an already generated split and scores it after every epoch.
inline TrainedCell train_cell(const CellSpec& cell, const DatasetSplit& split) {
  const auto start = std::chrono::steady_clock::now();
  const MachineConfig config = machine_config(cell);
  const EncodedInputs train = detail::encode(split.train);
  const EncodedInputs test = detail::encode(split.test);
  const auto train_targets = split.train.targets();
  const auto test_targets = split.test.targets();

  Rng rng(cell.seed);
  AnyModel model = detail::build_model(cell, config, split.train.n_features(), rng);

  EvalReport report;
  report.cell = cell;
  report.config = config;
  FitOptions options;
  options.shuffle = cell.shuffle;
  options.on_epoch = [&](std::uint32_t) {
    report.test_series.push_back(model_mae(model, test, test_targets));
  };
  report.train_series = std::visit(
      [&](auto& m) -> std::vector<double> {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, RegressionMachine>) {
          return fit(m, train, train_targets, cell.epochs, rng, options);
        } else if constexpr (std::is_same_v<M, BitwiseCTMRegressor> || std::is_same_v<M, MTMRegressor>) {
          return m.fit(train, train_targets, cell.epochs, options);
        } else {
          throw ConfigError("classifiers cannot be trained as regressors");
        }
      },
      model);

  if (!report.train_series.empty()) {
    report.final_train_mae = report.train_series.back();
    report.final_test_mae = report.test_series.back();
  } else {
    report.final_train_mae = model_mae(model, train, train_targets);
    report.final_test_mae = model_mae(model, test, test_targets);
  }
  report.coverage_complete = train.n_patterns() == (std::size_t{1} << split.train.n_features());
  report.census = pattern_census(model);
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {std::move(report), std::move(model)};
}

inline EvalReport run_cell(const CellSpec& cell, const DatasetSplit& split) { return train_cell(cell, split).report; }

inline EvalReport run_cell(const CellSpec& cell) { return run_cell(cell, generate(cell.data)); }

// ---------------------------------------------------------------------------
// Serialization

inline nlohmann::json to_json(const MachineConfig& c) {
  return nlohmann::json{
      {"kind", std::string(to_string(c.kind))},
      {"clauses", c.clauses},
      {"threshold", c.threshold},
      {"specificity", c.specificity},
      {"gain", c.gain},
      {"n_classes", c.n_classes},
      {"y_max", c.y_max},
      {"depth", c.depth},
      {"epochs", c.epochs},
      {"seed", c.seed},
  };
}

inline nlohmann::json to_json(const CellSpec& cell) {
  nlohmann::json j{
      {"data", to_json(cell.data)},
      {"method", std::string(to_string(cell.method))},
      {"size", cell.size},
      {"specificity", cell.specificity},
      {"gain", cell.gain},
      {"depth", cell.depth},
      {"epochs", cell.epochs},
      {"step", cell.step},
      {"shuffle", cell.shuffle},
      {"seed", cell.seed},
  };
  if (cell.clauses) j["clauses"] = *cell.clauses;
  return j;
}

inline CellSpec cell_from_json(const nlohmann::json& j) {
  try {
    CellSpec c;
    c.data = manifest_from_json(j.at("data"));
    c.method = parse_method(j.at("method").get<std::string>());
    c.size = j.at("size").get<std::uint32_t>();
    if (j.contains("clauses")) c.clauses = j.at("clauses").get<std::uint32_t>();
    c.specificity = j.at("specificity").get<double>();
    c.gain = j.at("gain").get<double>();
    c.depth = j.at("depth").get<std::uint32_t>();
    c.epochs = j.at("epochs").get<std::uint32_t>();
    c.step = j.at("step").get<double>();
    c.shuffle = j.at("shuffle").get<bool>();
    c.seed = j.at("seed").get<std::uint64_t>();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed cell spec: ") + e.what());
  }
}

/// Deterministic for a given (cell, seed): no timing, sorted keys.
inline nlohmann::json to_json(const EvalReport& r) {
  nlohmann::json census = nlohmann::json::object();
  for (const auto& [pattern, count] : r.census) census[pattern] = count;
  return nlohmann::json{
      {"format", "tsetlin-report/1"},
      {"cell", to_json(r.cell)},
      {"config", to_json(r.config)},
      {"interpretation", interpretation(r.cell)},
      {"train_mae_series", r.train_series},
      {"test_mae_series", r.test_series},
      {"final_train_mae", r.final_train_mae},
      {"final_test_mae", r.final_test_mae},
      {"coverage_complete", r.coverage_complete},
      {"census", census},
  };
}

// ---------------------------------------------------------------------------
// Batches

/// Runs cells in parallel (`jobs` worker threads) and returns reports in input order.
/// Each distinct dataset manifest is generated once.
inline std::vector<EvalReport> run_cells(const std::vector<CellSpec>& cells, unsigned jobs = 1,
                                         const std::function<void(const EvalReport&)>& progress = {}) {
  std::vector<std::string> keys;
  std::map<std::string, DatasetSplit> splits;
  for (const auto& c : cells) {
    std::string key = to_json(c.data).dump();
    if (!splits.contains(key)) splits.emplace(key, generate(c.data));
    keys.push_back(std::move(key));
  }

  std::vector<EvalReport> reports(cells.size());
  std::atomic<std::size_t> next{0};
  std::mutex lock;
  std::exception_ptr failure;
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      try {
        reports[i] = run_cell(cells[i], splits.at(keys[i]));
        if (progress) {
          std::lock_guard guard(lock);
          progress(reports[i]);
        }
      } catch (...) {
        std::lock_guard guard(lock);
        if (!failure) failure = std::current_exception();
        next = cells.size();
      }
    }
  };
  jobs = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(cells.size())));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return reports;
}

/// Shared knobs of the sweep drivers.
struct SweepOptions {
  std::uint32_t epochs = 200;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  double gain = 1.0;
  std::uint32_t depth = 100;
  double step = 1.0;
  bool shuffle = false;
  std::optional<double> noise_sigma;  // overrides the preset's noise level
  std::size_t n_train = 8000;
  std::size_t n_test = 2000;
  unsigned jobs = 1;
};

/// Cell template for (preset, run seed): data from the run seed, machine from a derived stream.
inline CellSpec base_cell(const std::string& preset, std::uint64_t seed, const SweepOptions& opt) {
  CellSpec c;
  c.data = preset_manifest(preset, seed);
  c.data.n_train = opt.n_train;
  c.data.n_test = opt.n_test;
  if (opt.noise_sigma) {
    c.data.noise = *opt.noise_sigma > 0.0 ? NoiseSpec{NoiseModel::gaussian, *opt.noise_sigma} : NoiseSpec{};
  }
  c.gain = opt.gain;
  c.depth = opt.depth;
  c.epochs = opt.epochs;
  c.step = opt.step;
  c.shuffle = opt.shuffle;
  c.seed = machine_seed(seed);
  return c;
}

inline std::vector<CellSpec> t_sweep_cells(const std::string& preset, const std::vector<std::uint32_t>& thresholds,
                                           double specificity, const SweepOptions& opt) {
  std::vector<CellSpec> cells;
  for (std::uint32_t t : thresholds) {
    for (std::uint64_t seed : opt.seeds) {
      CellSpec c = base_cell(preset, seed, opt);
      c.size = t;
      c.specificity = specificity;
      cells.push_back(c);
    }
  }
  return cells;
}

inline std::vector<CellSpec> s_sweep_cells(const std::string& preset, std::uint32_t threshold,
                                           const std::vector<double>& specificities, const SweepOptions& opt) {
  std::vector<CellSpec> cells;
  for (double s : specificities) {
    for (std::uint64_t seed : opt.seeds) {
      CellSpec c = base_cell(preset, seed, opt);
      c.size = threshold;
      c.specificity = s;
      cells.push_back(c);
    }
  }
  return cells;
}

/// Grid values for one method on one dataset.
struct MethodGrid {
  Method method;
  std::vector<std::uint32_t> values;
};

/// Full-scale grids (RTM T values, CTM m=T values, MTM clause budgets).
inline std::vector<MethodGrid> full_grid(const std::string& preset) {
  const std::uint32_t bits = preset_manifest(preset, 0).n_bits;
  switch (bits) {
    case 2:
      return {{Method::rtm, {3, 10, 30, 100, 500, 1000, 4000}},
              {Method::ctm_bitwise, {6, 8000}},
              {Method::mtm_classes, {1000, 10000, 16000}}};
    case 3:
      return {{Method::rtm, {7, 20, 70, 300, 700, 2000, 5000}},
              {Method::ctm_bitwise, {14, 8000}},
              {Method::mtm_classes, {2000, 10000, 16000}}};
    default:
      return {{Method::rtm, {7, 15, 70, 150, 700, 1500, 4000}},
              {Method::ctm_bitwise, {30, 8000}},
              {Method::mtm_classes, {4000, 10000, 16000}}};
  }
}

/// Desk-scale grids: RTM capped at T=1000, CTM at its smallest value only
/// (every bit trains its own machine, so large m is the dominant cost), MTM
/// budgets unchanged.
inline std::vector<MethodGrid> desk_grid(const std::string& preset) {
  auto grid = full_grid(preset);
  std::erase_if(grid[0].values, [](std::uint32_t t) { return t > 1000; });
  grid[1].values.resize(1);
  return grid;
}

inline std::vector<CellSpec> comparison_cells(const std::vector<std::string>& presets,
                                              const std::function<std::vector<MethodGrid>(const std::string&)>& grid,
                                              double specificity, const SweepOptions& opt) {
  std::vector<CellSpec> cells;
  for (const auto& preset : presets) {
    for (const auto& g : grid(preset)) {
      for (std::uint32_t v : g.values) {
        for (std::uint64_t seed : opt.seeds) {
          CellSpec c = base_cell(preset, seed, opt);
          c.method = g.method;
          c.size = v;
          c.specificity = specificity;
          cells.push_back(c);
        }
      }
    }
  }
  return cells;
}

inline std::vector<EvalReport> run_t_sweep(const std::string& preset, const std::vector<std::uint32_t>& thresholds,
                                           double specificity, const SweepOptions& opt) {
  return run_cells(t_sweep_cells(preset, thresholds, specificity, opt), opt.jobs);
}

inline std::vector<EvalReport> run_s_sweep(const std::string& preset, std::uint32_t threshold,
                                           const std::vector<double>& specificities, const SweepOptions& opt) {
  return run_cells(s_sweep_cells(preset, threshold, specificities, opt), opt.jobs);
}

inline std::vector<EvalReport> run_comparison(const std::vector<std::string>& presets, double specificity,
                                              const SweepOptions& opt, bool full = false) {
  return run_cells(comparison_cells(presets, full ? full_grid : desk_grid, specificity, opt), opt.jobs);
}

// ---------------------------------------------------------------------------
// Aggregation and tables

inline double median(std::vector<double> v) {
  if (v.empty()) throw ConfigError("median of an empty set");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

/// Identifies a cell up to its seed.
struct CellKey {
  std::string dataset;
  Method method;
  std::uint32_t size;
  double specificity;
  double gain;

  auto operator<=>(const CellKey&) const = default;
};

inline CellKey key_of(const EvalReport& r) {
  return {r.cell.data.preset, r.cell.method, r.cell.size, r.cell.specificity, r.cell.gain};
}

struct CellSummary {
  double median_train_mae = 0.0;
  double median_test_mae = 0.0;
  std::size_t runs = 0;
};

inline std::map<CellKey, CellSummary> summarize(const std::vector<EvalReport>& reports) {
  std::map<CellKey, std::pair<std::vector<double>, std::vector<double>>> groups;
  for (const auto& r : reports) {
    auto& [train, test] = groups[key_of(r)];
    train.push_back(r.final_train_mae);
    test.push_back(r.final_test_mae);
  }
  std::map<CellKey, CellSummary> out;
  for (const auto& [k, g] : groups) out[k] = {median(g.first), median(g.second), g.first.size()};
  return out;
}

/// Long form, one row per (cell, epoch), for curve plotting.
inline void write_results_csv(const std::vector<EvalReport>& reports, std::ostream& out) {
  out << "dataset,method,m,T,s,K,seed,epoch,train_mae,test_mae\n";
  for (const auto& r : reports) {
    for (std::size_t e = 0; e < r.train_series.size(); ++e) {
      out << r.cell.data.preset << ',' << to_string(r.cell.method) << ',' << r.config.clauses << ','
          << r.config.threshold << ',' << format_real(r.cell.specificity) << ',' << format_real(r.cell.gain) << ','
          << r.cell.data.seed << ',' << (e + 1) << ',' << format_real(r.train_series[e]) << ','
          << format_real(r.test_series[e]) << '\n';
    }
  }
}

inline std::string fixed(double v, int digits = 1) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(digits);
  s << v;
  return s.str();
}

/// Median final MAE per dataset (rows) and method/grid value (columns).
inline void write_summary_markdown(const std::vector<EvalReport>& reports, std::ostream& out) {
  const auto summary = summarize(reports);
  std::vector<std::string> datasets;
  for (const auto& [k, _] : summary) {
    if (std::find(datasets.begin(), datasets.end(), k.dataset) == datasets.end()) datasets.push_back(k.dataset);
  }
  for (const bool test : {false, true}) {
    out << "### " << (test ? "Testing" : "Training") << " MAE (median over seeds)\n\n";
    for (const auto& d : datasets) {
      std::vector<std::pair<CellKey, CellSummary>> row;
      for (const auto& [k, s] : summary) {
        if (k.dataset == d) row.emplace_back(k, s);
      }
      out << "| " << d;
      for (const auto& [k, _] : row) {
        out << " | " << to_string(k.method) << ' ' << k.size;
        if (k.specificity != 2.0) out << " s=" << format_real(k.specificity);
      }
      out << " |\n|---";
      for (std::size_t i = 0; i < row.size(); ++i) out << "|---";
      out << "|\n| MAE";
      for (const auto& [_, s] : row) out << " | " << fixed(test ? s.median_test_mae : s.median_train_mae);
      out << " |\n\n";
    }
  }
}

}  // namespace tsetlin
