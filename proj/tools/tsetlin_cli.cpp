// tsetlin: dataset generation, training, evaluation, sweeps and reproduction.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tsetlin/tsetlin.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace tsetlin;

namespace {

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,
  kConfig = 3,
  kIo = 4,
  kSnapshot = 5,
  kStructural = 6,
  kCriteriaFailed = 7,
};

unsigned resolve_jobs(unsigned jobs) { return jobs == 0 ? std::max(1U, std::thread::hardware_concurrency()) : jobs; }

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

/// Fully resolved invocation, written before any work starts.
void echo_runspec(const fs::path& out, const std::string& subcommand, const json& resolved, int argc, char** argv) {
  json spec{{"format", "tsetlin-runspec/1"}, {"subcommand", subcommand}, {"resolved", resolved}};
  std::vector<std::string> args(argv, argv + argc);
  spec["argv"] = args;
  fs::create_directories(out);
  write_json(out / "runspec.json", spec);
}

/// Shared machine and data flags.
struct ModelFlags {
  std::string machine = "rtm";
  std::uint32_t threshold = 3;
  std::optional<std::uint32_t> clauses;
  double specificity = 2.0;
  double gain = 1.0;
  std::uint32_t depth = 100;
  std::uint32_t epochs = 200;
  double step = 1.0;
  bool shuffle = false;
};

void add_model_flags(CLI::App* cmd, ModelFlags& f, bool with_machine) {
  if (with_machine) {
    cmd->add_option("--machine", f.machine, "rtm, ctm-bitwise or mtm-classes")
        ->check(CLI::IsMember({"rtm", "ctm-bitwise", "mtm-classes", "ctm", "mtm"}));
    cmd->add_option("--T", f.threshold,
                    "threshold T; also the clause count for rtm/ctm-bitwise, total clause budget for mtm-classes");
    cmd->add_option("--m", f.clauses, "rtm clause count when it should differ from T");
  }
  cmd->add_option("--s", f.specificity, "specificity s (>= 1)");
  cmd->add_option("--K", f.gain, "rtm feedback gain K (> 0)");
  cmd->add_option("--depth", f.depth, "automaton states per action N");
  cmd->add_option("--epochs", f.epochs, "training epochs");
  cmd->add_option("--step", f.step, "output quantum of the ctm-bitwise and mtm-classes baselines (1 = unit classes)");
  cmd->add_flag("--shuffle", f.shuffle, "reshuffle samples every epoch");
}

struct DataFlags {
  std::string preset;
  fs::path data;
  std::optional<double> sigma;
  std::size_t n_train = 8000;
  std::size_t n_test = 2000;
};

void add_data_flags(CLI::App* cmd, DataFlags& f) {
  cmd->add_option("--preset", f.preset, "dataset1..dataset6 (generated from --seed)");
  cmd->add_option("--data", f.data, "directory holding train.csv, test.csv and manifest.json");
  cmd->add_option("--sigma", f.sigma, "override the preset's training-noise standard deviation");
  cmd->add_option("--n-train", f.n_train, "training samples for generated presets");
  cmd->add_option("--n-test", f.n_test, "test samples for generated presets");
}

Manifest preset_with(const DataFlags& f, std::uint64_t seed) {
  Manifest m = preset_manifest(f.preset, seed);
  m.n_train = f.n_train;
  m.n_test = f.n_test;
  if (f.sigma) m.noise = *f.sigma > 0.0 ? NoiseSpec{NoiseModel::gaussian, *f.sigma} : NoiseSpec{};
  return m;
}

DatasetSplit resolve_data(const DataFlags& f, std::uint64_t seed) {
  if (!f.data.empty() && !f.preset.empty()) throw ConfigError("give either --data or --preset, not both");
  if (!f.data.empty()) {
    if (!fs::exists(f.data)) throw IoError("data directory " + f.data.string() + " does not exist");
    return load_split(f.data);
  }
  if (f.preset.empty()) throw ConfigError("one of --data or --preset is required");
  return generate(preset_with(f, seed));
}

SweepOptions sweep_options(const ModelFlags& m, const DataFlags& d, const std::vector<std::uint64_t>& seeds,
                           unsigned jobs) {
  SweepOptions o;
  o.epochs = m.epochs;
  o.seeds = seeds;
  o.gain = m.gain;
  o.depth = m.depth;
  o.step = m.step;
  o.shuffle = m.shuffle;
  o.noise_sigma = d.sigma;
  o.n_train = d.n_train;
  o.n_test = d.n_test;
  o.jobs = resolve_jobs(jobs);
  return o;
}

json sweep_json(const SweepOptions& o) {
  json j{{"epochs", o.epochs}, {"seeds", o.seeds}, {"K", o.gain},        {"depth", o.depth},
         {"step", o.step},     {"shuffle", o.shuffle}, {"n_train", o.n_train}, {"n_test", o.n_test},
         {"jobs", o.jobs}};
  j["sigma"] = o.noise_sigma ? json(*o.noise_sigma) : json(nullptr);
  return j;
}

void print_progress(const EvalReport& r) {
  std::fprintf(stderr, "  %s %-11s %5u s=%-4g seed=%llu  train %.3f  test %.3f  (%.1fs)\n", r.cell.data.preset.c_str(),
               std::string(to_string(r.cell.method)).c_str(), r.cell.size, r.cell.specificity,
               static_cast<unsigned long long>(r.cell.data.seed), r.final_train_mae, r.final_test_mae,
               r.wall_seconds);
}

/// results.csv, summary.md, reports.jsonl and timing.csv for a batch.
void write_batch(const fs::path& out, const std::vector<EvalReport>& reports) {
  fs::create_directories(out);
  {
    std::ofstream csv(out / "results.csv", std::ios::binary);
    write_results_csv(reports, csv);
  }
  {
    std::ofstream md(out / "summary.md", std::ios::binary);
    write_summary_markdown(reports, md);
  }
  std::ofstream jl(out / "reports.jsonl", std::ios::binary);
  std::ofstream timing(out / "timing.csv", std::ios::binary);
  timing << "dataset,method,size,s,seed,wall_seconds\n";
  for (const auto& r : reports) {
    jl << to_json(r).dump() << '\n';
    timing << r.cell.data.preset << ',' << to_string(r.cell.method) << ',' << r.cell.size << ','
           << format_real(r.cell.specificity) << ',' << r.cell.data.seed << ',' << fixed(r.wall_seconds, 3) << '\n';
  }
  if (!jl || !timing) throw IoError("cannot write results under " + out.string());
}

std::vector<std::uint32_t> default_t_list(const std::string& preset, bool full) {
  auto grid = full ? full_grid(preset) : desk_grid(preset);
  return grid.front().values;
}

std::uint32_t default_s_sweep_t(const std::string& preset) {
  for (const auto& nc : noisy_cases()) {
    if (preset == nc.preset) return nc.s_sweep_threshold;
  }
  const std::uint32_t bits = preset_manifest(preset, 0).n_bits;
  return bits == 2 ? 100 : bits == 3 ? 300 : 150;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tsetlin machine regression toolkit: generate data, train, evaluate, sweep and reproduce."};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "help for every subcommand");

  std::uint64_t seed = 1;
  fs::path out;
  unsigned jobs = 1;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};

  // gen
  auto* gen = app.add_subcommand("gen", "write a dataset preset as train.csv, test.csv and manifest.json");
  DataFlags gen_data;
  gen_data.preset = "dataset1";
  gen->add_option("--preset", gen_data.preset, "dataset1..dataset6");
  gen->add_option("--sigma", gen_data.sigma, "override the training-noise standard deviation (0 = clean)");
  gen->add_option("--n-train", gen_data.n_train, "training samples");
  gen->add_option("--n-test", gen_data.n_test, "test samples");
  gen->add_option("--seed", seed, "run seed");
  gen->add_option("--out", out, "output directory")->required();

  // train
  auto* train = app.add_subcommand("train", "fit one model and write model.bin, report.json and results.csv");
  ModelFlags train_model;
  DataFlags train_data;
  add_model_flags(train, train_model, true);
  add_data_flags(train, train_data);
  train->add_option("--seed", seed, "run seed (data for presets, machine via a derived stream)");
  train->add_option("--out", out, "output directory")->required();

  // eval
  auto* eval = app.add_subcommand("eval", "score a snapshot on a dataset");
  fs::path snapshot_path;
  DataFlags eval_data;
  fs::path eval_csv;
  eval->add_option("--snapshot", snapshot_path, "model snapshot")->required()->check(CLI::ExistingFile);
  add_data_flags(eval, eval_data);
  eval->add_option("--csv", eval_csv, "a single CSV file to score instead of a split");
  eval->add_option("--seed", seed, "seed for --preset data");
  eval->add_option("--out", out, "optional directory for eval.json");

  // sweep-t
  auto* sweep_t = app.add_subcommand("sweep-t", "rtm error curves across thresholds T");
  ModelFlags st_model;
  DataFlags st_data;
  st_data.preset = "dataset1";
  std::vector<std::uint32_t> st_list;
  bool st_full = false;
  add_model_flags(sweep_t, st_model, false);
  sweep_t->add_option("--preset", st_data.preset, "dataset1..dataset6");
  sweep_t->add_option("--sigma", st_data.sigma, "override the preset's training-noise standard deviation");
  sweep_t->add_option("--T-list", st_list, "thresholds (default: the reference grid for the preset, capped at 1000)");
  sweep_t->add_flag("--full", st_full, "use the uncapped reference grid");
  sweep_t->add_option("--seeds", seeds, "run seeds");
  sweep_t->add_option("--jobs", jobs, "worker threads (0 = all cores)");
  sweep_t->add_option("--out", out, "output directory")->required();

  // sweep-s
  auto* sweep_s = app.add_subcommand("sweep-s", "rtm final MAE across specificities s at fixed T");
  ModelFlags ss_model;
  DataFlags ss_data;
  ss_data.preset = "dataset2";
  std::optional<std::uint32_t> ss_t;
  std::vector<double> ss_list = s_grid();
  add_model_flags(sweep_s, ss_model, false);
  sweep_s->add_option("--preset", ss_data.preset, "dataset1..dataset6");
  sweep_s->add_option("--sigma", ss_data.sigma, "override the preset's training-noise standard deviation");
  sweep_s->add_option("--T", ss_t, "threshold (default 100/300/150 for 2/3/4-bit presets)");
  sweep_s->add_option("--s-list", ss_list, "specificities");
  sweep_s->add_option("--seeds", seeds, "run seeds");
  sweep_s->add_option("--jobs", jobs, "worker threads (0 = all cores)");
  sweep_s->add_option("--out", out, "output directory")->required();

  // compare
  auto* compare = app.add_subcommand("compare", "train/test MAE matrix for rtm, ctm-bitwise and mtm-classes");
  ModelFlags cmp_model;
  DataFlags cmp_data;
  std::vector<std::string> cmp_presets{"dataset1", "dataset2", "dataset3", "dataset4", "dataset5", "dataset6"};
  bool cmp_full = false;
  add_model_flags(compare, cmp_model, false);
  compare->add_option("--presets", cmp_presets, "datasets to compare");
  compare->add_option("--sigma", cmp_data.sigma, "override the presets' training-noise standard deviation");
  compare->add_flag("--full", cmp_full, "full-scale grids (T up to 5000, ctm m=8000); takes hours");
  compare->add_option("--seeds", seeds, "run seeds");
  compare->add_option("--jobs", jobs, "worker threads (0 = all cores)");
  compare->add_option("--out", out, "output directory")->required();

  // inspect
  auto* inspect = app.add_subcommand("inspect", "print clause patterns, their census and per-clause fire counts");
  DataFlags insp_data;
  fs::path insp_csv;
  inspect->add_option("--snapshot", snapshot_path, "model snapshot")->required()->check(CLI::ExistingFile);
  inspect->add_option("--data", insp_data.data, "split directory; fire counts use its train.csv");
  inspect->add_option("--csv", insp_csv, "CSV file for fire counts");

  // reproduce
  auto* repro = app.add_subcommand("reproduce", "run the acceptance grid and check its expected properties");
  ReproduceOptions repro_opt;
  std::vector<int> only;
  std::uint32_t repro_epochs = 200;
  repro->add_flag("--full", repro_opt.full, "full-scale comparison grid (hours)");
  repro->add_option("--only", only, "criterion ids to run (1-6)");
  repro->add_option("--epochs", repro_epochs, "training epochs");
  repro->add_option("--seeds", seeds, "run seeds");
  repro->add_option("--jobs", jobs, "worker threads (0 = all cores)");
  repro->add_option("--out", out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (gen->parsed()) {
      const Manifest m = preset_with(gen_data, seed);
      echo_runspec(out, "gen", {{"manifest", to_json(m)}}, argc, argv);
      const DatasetSplit split = generate(m);
      save_split(split, out);
      std::cout << "wrote " << split.train.size() << " train and " << split.test.size() << " test rows to "
                << out.string() << "\n";
      return kOk;
    }

    if (train->parsed()) {
      const DatasetSplit split = resolve_data(train_data, seed);
      CellSpec cell;
      cell.data = split.manifest;
      cell.method = parse_method(train_model.machine);
      cell.size = train_model.threshold;
      cell.clauses = train_model.clauses;
      cell.specificity = train_model.specificity;
      cell.gain = train_model.gain;
      cell.depth = train_model.depth;
      cell.epochs = train_model.epochs;
      cell.step = train_model.step;
      cell.shuffle = train_model.shuffle;
      cell.seed = machine_seed(seed);
      machine_config(cell);  // validate before writing anything else
      json resolved{{"cell", to_json(cell)}, {"run_seed", seed}};
      if (!train_data.data.empty()) resolved["data_dir"] = fs::absolute(train_data.data).string();
      echo_runspec(out, "train", resolved, argc, argv);

      auto [report, model] = train_cell(cell, split);
      write_file(out / "model.bin", snapshot(model));
      write_json(out / "report.json", to_json(report));
      write_batch(out, {report});
      std::cout << "final train MAE " << format_real(report.final_train_mae) << ", test MAE "
                << format_real(report.final_test_mae) << " (" << fixed(report.wall_seconds, 2) << "s)\n";
      if (!report.coverage_complete) std::cout << "note: training split does not cover every input pattern\n";
      return kOk;
    }

    if (eval->parsed()) {
      const AnyModel model = restore_model(read_file(snapshot_path));
      std::vector<std::pair<std::string, Dataset>> sets;
      if (!eval_csv.empty()) {
        sets.emplace_back(eval_csv.filename().string(), load_csv(eval_csv));
      } else {
        DatasetSplit split = resolve_data(eval_data, seed);
        sets.emplace_back("train", std::move(split.train));
        sets.emplace_back("test", std::move(split.test));
      }
      json result{{"snapshot", fs::absolute(snapshot_path).string()}};
      for (const auto& [name, d] : sets) {
        if (d.n_features() != model_features(model)) throw StructuralError("dataset width does not match the model");
        const EncodedInputs enc(d.inputs(), d.n_features());
        const double mae = model_mae(model, enc, d.targets());
        result["mae"][name] = mae;
        std::cout << name << " MAE " << format_real(mae) << " over " << d.size() << " rows\n";
      }
      if (!out.empty()) {
        echo_runspec(out, "eval", {{"snapshot", fs::absolute(snapshot_path).string()}, {"seed", seed}}, argc, argv);
        write_json(out / "eval.json", result);
      }
      return kOk;
    }

    if (sweep_t->parsed()) {
      const auto opt = sweep_options(st_model, st_data, seeds, jobs);
      if (st_list.empty()) st_list = default_t_list(st_data.preset, st_full);
      echo_runspec(out, "sweep-t",
                   {{"preset", st_data.preset}, {"T_list", st_list}, {"s", st_model.specificity},
                    {"sweep", sweep_json(opt)}},
                   argc, argv);
      const auto reports = run_cells(t_sweep_cells(st_data.preset, st_list, st_model.specificity, opt), opt.jobs,
                                     print_progress);
      write_batch(out, reports);
      write_summary_markdown(reports, std::cout);
      return kOk;
    }

    if (sweep_s->parsed()) {
      const auto opt = sweep_options(ss_model, ss_data, seeds, jobs);
      const std::uint32_t t = ss_t.value_or(default_s_sweep_t(ss_data.preset));
      echo_runspec(out, "sweep-s",
                   {{"preset", ss_data.preset}, {"T", t}, {"s_list", ss_list}, {"sweep", sweep_json(opt)}}, argc,
                   argv);
      const auto reports = run_cells(s_sweep_cells(ss_data.preset, t, ss_list, opt), opt.jobs, print_progress);
      write_batch(out, reports);
      write_summary_markdown(reports, std::cout);
      return kOk;
    }

    if (compare->parsed()) {
      const auto opt = sweep_options(cmp_model, cmp_data, seeds, jobs);
      echo_runspec(out, "compare",
                   {{"presets", cmp_presets}, {"full", cmp_full}, {"s", cmp_model.specificity},
                    {"sweep", sweep_json(opt)}},
                   argc, argv);
      const auto reports = run_cells(
          comparison_cells(cmp_presets, cmp_full ? full_grid : desk_grid, cmp_model.specificity, opt), opt.jobs,
          print_progress);
      write_batch(out, reports);
      write_summary_markdown(reports, std::cout);
      return kOk;
    }

    if (inspect->parsed()) {
      const AnyModel model = restore_model(read_file(snapshot_path));
      std::optional<Dataset> data;
      if (!insp_csv.empty()) {
        data = load_csv(insp_csv);
      } else if (!insp_data.data.empty()) {
        data = load_split(insp_data.data).train;
      }
      std::optional<EncodedInputs> enc;
      if (data) {
        if (data->n_features() != model_features(model)) throw StructuralError("dataset width does not match the model");
        enc.emplace(data->inputs(), data->n_features());
      }
      std::cout << "census:\n";
      for (const auto& [pattern, count] : pattern_census(model)) std::cout << "  " << count << " x " << pattern << "\n";
      std::cout << "clauses:\n";
      std::size_t j = 0;
      std::visit(
          [&](const auto& m) {
            m.for_each_clause([&](const Clause& c) {
              std::cout << "  #" << j++ << "  " << clause_pattern(c);
              if (enc) {
                std::size_t fires = 0;
                for (std::size_t i = 0; i < enc->size(); ++i) fires += c.evaluate((*enc)[i], EvalMode::inference);
                std::cout << "  fires " << fires << "/" << enc->size();
              }
              std::cout << "\n";
            });
          },
          model);
      return kOk;
    }

    if (repro->parsed()) {
      repro_opt.sweep.seeds = seeds;
      repro_opt.sweep.epochs = repro_epochs;
      repro_opt.sweep.jobs = resolve_jobs(jobs);
      repro_opt.only = std::set<int>(only.begin(), only.end());
      repro_opt.progress = print_progress;
      echo_runspec(out, "reproduce",
                   {{"full", repro_opt.full}, {"only", only}, {"sweep", sweep_json(repro_opt.sweep)}}, argc, argv);
      std::vector<EvalReport> reports;
      const auto results = reproduce(repro_opt, &reports);
      json summary = json::array();
      bool all = true;
      for (const auto& r : results) {
        std::cout << (r.passed ? "PASS" : "FAIL") << "  [" << r.id << "] " << r.name << ": " << r.detail << "\n";
        summary.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
        all = all && r.passed;
      }
      write_batch(out, reports);
      write_json(out / "criteria.json", summary);
      return all ? kOk : kCriteriaFailed;
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: invalid configuration: " << e.what() << "\n";
    return kConfig;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const SnapshotError& e) {
    std::cerr << "error: bad snapshot: " << e.what() << "\n";
    return kSnapshot;
  } catch (const StructuralError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kStructural;
  } catch (const ContractViolation& e) {
    std::cerr << "error: invariant violated: " << e.what() << "\n";
    return kStructural;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInternal;
  }
  return kInternal;
}
