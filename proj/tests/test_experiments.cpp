#include <gtest/gtest.h>

#include <sstream>

#include "tsetlin/experiments.hpp"

using namespace tsetlin;

namespace {

CellSpec quick_cell(const std::string& preset, Method method, std::uint32_t size, std::uint64_t seed = 1) {
  SweepOptions opt;
  opt.epochs = 5;
  opt.n_train = 400;
  opt.n_test = 200;
  CellSpec c = base_cell(preset, seed, opt);
  c.method = method;
  c.size = size;
  return c;
}

}  // namespace

TEST(Metrics, MaeExamples) {
  const std::vector<double> p{1, 2, 3}, t{2, 4, 3};
  EXPECT_DOUBLE_EQ(compute_mae(p, t), 1.0);
  EXPECT_EQ(compute_mae(std::vector<double>{5}, std::vector<double>{5}), 0.0);
  EXPECT_THROW(compute_mae(p, std::vector<double>{1}), StructuralError);
  EXPECT_THROW(compute_mae(std::vector<double>{}, std::vector<double>{}), ConfigError);
}

TEST(Metrics, MaeIsOrderInsensitiveUpToRounding) {
  Rng rng(3);
  std::vector<double> p(5000), t(5000);
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = rng.uniform() * 1500;
    t[i] = rng.uniform() * 1500;
  }
  const double forward = compute_mae(p, t);
  std::vector<double> rp(p.rbegin(), p.rend()), rt(t.rbegin(), t.rend());
  EXPECT_NEAR(compute_mae(rp, rt), forward, 1e-9 * forward);
}

TEST(Metrics, Median) {
  EXPECT_EQ(median({3, 1, 2}), 2.0);
  EXPECT_EQ(median({4, 1, 2, 3}), 2.5);
  EXPECT_THROW(median({}), ConfigError);
}

TEST(Experiments, MethodNames) {
  EXPECT_EQ(parse_method("ctm"), Method::ctm_bitwise);
  EXPECT_EQ(parse_method("mtm-classes"), Method::mtm_classes);
  EXPECT_EQ(to_string(parse_method("rtm")), "rtm");
  EXPECT_THROW(parse_method("svm"), ConfigError);
}

TEST(Experiments, MachineConfigMapping) {
  CellSpec c = quick_cell("dataset2", Method::rtm, 100);
  auto cfg = machine_config(c);
  EXPECT_EQ(cfg.kind, MachineKind::regression);
  EXPECT_EQ(cfg.clauses, 100u);
  EXPECT_EQ(cfg.threshold, 100u);
  EXPECT_EQ(cfg.y_max, 300.0);
  c.clauses = 250;
  EXPECT_EQ(machine_config(c).clauses, 250u);

  c = quick_cell("dataset2", Method::ctm_bitwise, 6);
  cfg = machine_config(c);
  EXPECT_EQ(cfg.kind, MachineKind::classic);
  EXPECT_EQ(cfg.clauses, 6u);
  EXPECT_EQ(cfg.threshold, 6u);

  c = quick_cell("dataset2", Method::mtm_classes, 16000);
  cfg = machine_config(c);
  EXPECT_EQ(cfg.n_classes, 301u);
  EXPECT_EQ(cfg.threshold, 54u);  // 16000 / 602 = 26.6 -> 27 pairs
  EXPECT_EQ(cfg.clauses, 54u * 301);
  EXPECT_EQ(mtm_clauses_per_class(1000, 301), 4u);
  EXPECT_EQ(mtm_clauses_per_class(10, 301), 2u);
}

TEST(Experiments, DeskGridDropsOnlyTheExpensiveValues) {
  const auto g = desk_grid("dataset2");
  ASSERT_EQ(g.size(), 3u);
  EXPECT_EQ(g[0].values, (std::vector<std::uint32_t>{3, 10, 30, 100, 500, 1000}));
  EXPECT_EQ(g[1].values, (std::vector<std::uint32_t>{6}));
  EXPECT_EQ(g[2].values, (std::vector<std::uint32_t>{1000, 10000, 16000}));
  EXPECT_EQ(desk_grid("dataset5")[0].values, (std::vector<std::uint32_t>{7, 15, 70, 150, 700}));
  EXPECT_EQ(full_grid("dataset3")[1].values, (std::vector<std::uint32_t>{14, 8000}));
}

TEST(Experiments, SeedsSeparateDataAndMachine) {
  SweepOptions opt;
  const CellSpec c = base_cell("dataset1", 4, opt);
  EXPECT_EQ(c.data.seed, 4u);
  EXPECT_EQ(c.seed, machine_seed(4));
  EXPECT_NE(c.seed, c.data.seed);
  opt.noise_sigma = 0.0;
  EXPECT_FALSE(base_cell("dataset2", 1, opt).data.noise.active());
}

TEST(Experiments, SmallestCleanCellIsExact) {
  SweepOptions opt;
  CellSpec c = base_cell("dataset1", 1, opt);
  c.size = 3;
  const auto r = run_cell(c);
  EXPECT_EQ(r.train_series.size(), 200u);
  EXPECT_EQ(r.test_series.size(), 200u);
  EXPECT_EQ(r.final_train_mae, 0.0);
  EXPECT_EQ(r.final_test_mae, 0.0);
  EXPECT_TRUE(r.coverage_complete);
  EXPECT_EQ(r.census, (std::map<std::string, std::size_t>{{"1✦", 2}, {"✦1", 1}}));
}

TEST(Experiments, CellJsonRoundTrip) {
  CellSpec c = quick_cell("dataset4", Method::mtm_classes, 4000, 3);
  c.clauses = 12;
  c.specificity = 1.5;
  c.shuffle = true;
  EXPECT_EQ(cell_from_json(to_json(c)), c);
  auto j = to_json(c);
  j.erase("method");
  EXPECT_THROW(cell_from_json(j), ConfigError);
}

TEST(Experiments, ReportsAreDeterministicAndThreadCountFree) {
  const std::vector<CellSpec> cells{quick_cell("dataset2", Method::rtm, 30), quick_cell("dataset2", Method::ctm_bitwise, 6),
                                    quick_cell("dataset4", Method::mtm_classes, 1000), quick_cell("dataset4", Method::rtm, 20, 2)};
  const auto one = run_cells(cells, 1);
  const auto two = run_cells(cells, 2);
  ASSERT_EQ(one.size(), cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    EXPECT_EQ(one[i].cell, cells[i]);
    EXPECT_EQ(to_json(one[i]).dump(), to_json(two[i]).dump());
    EXPECT_EQ(to_json(one[i]).dump(), to_json(run_cell(cells[i])).dump());
  }
}

TEST(Experiments, BatchFailuresPropagate) {
  CellSpec bad = quick_cell("dataset1", Method::rtm, 3);
  bad.specificity = 0.5;
  EXPECT_THROW(run_cells({quick_cell("dataset1", Method::rtm, 3), bad}, 2), ConfigError);
}

TEST(Experiments, ResultsCsvHasOneRowPerEpoch) {
  const auto r = run_cell(quick_cell("dataset3", Method::rtm, 7));
  std::ostringstream out;
  write_results_csv({r}, out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "dataset,method,m,T,s,K,seed,epoch,train_mae,test_mae");
  std::vector<std::string> rows;
  while (std::getline(in, line)) rows.push_back(line);
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0].rfind("dataset3,rtm,7,7,2.0,1.0,1,1,", 0), 0u) << rows[0];
  EXPECT_EQ(rows[4].rfind("dataset3,rtm,7,7,2.0,1.0,1,5,", 0), 0u) << rows[4];
}

TEST(Experiments, SummaryUsesMedians) {
  std::vector<EvalReport> reports;
  for (double v : {1.0, 9.0, 2.0}) {
    EvalReport r;
    r.cell = quick_cell("dataset1", Method::rtm, 3);
    r.final_train_mae = v;
    r.final_test_mae = 2 * v;
    reports.push_back(r);
  }
  const auto s = summarize(reports);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s.begin()->second.median_train_mae, 2.0);
  EXPECT_EQ(s.begin()->second.median_test_mae, 4.0);
  EXPECT_EQ(s.begin()->second.runs, 3u);
  std::ostringstream md;
  write_summary_markdown(reports, md);
  EXPECT_NE(md.str().find("| dataset1 | rtm 3 |"), std::string::npos) << md.str();
  EXPECT_NE(md.str().find("| MAE | 4.0 |"), std::string::npos);
}
