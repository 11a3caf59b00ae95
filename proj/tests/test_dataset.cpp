#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "tsetlin/dataset.hpp"

using namespace tsetlin;

namespace {

std::string csv_of(const Dataset& d) {
  std::ostringstream out;
  write_csv(d, out);
  return out.str();
}

Dataset parse(const std::string& text) {
  std::istringstream in(text);
  return read_csv(in, "mem");
}

std::size_t parse_error_line(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST(Dataset, CleanTargetExamples) {
  EXPECT_EQ(clean_target(std::vector<std::uint8_t>{1, 0}), 200.0);
  EXPECT_EQ(clean_target(std::vector<std::uint8_t>{0, 1, 1}), 300.0);
  EXPECT_EQ(clean_target(std::vector<std::uint8_t>{1, 1, 1, 1}), 1500.0);
  EXPECT_EQ(clean_target(std::vector<std::uint8_t>{0, 0}), 0.0);
}

TEST(Dataset, Presets) {
  const std::uint32_t widths[] = {2, 2, 3, 3, 4, 4};
  for (int i = 0; i < 6; ++i) {
    const auto m = preset_manifest("dataset" + std::to_string(i + 1), 7);
    EXPECT_EQ(m.n_bits, widths[i]);
    EXPECT_EQ(m.y_max, 100.0 * ((1 << widths[i]) - 1));
    EXPECT_EQ(m.noise.active(), i % 2 == 1);
    EXPECT_EQ(m.seed, 7u);
  }
  EXPECT_THROW(preset_manifest("dataset7", 1), ConfigError);
}

TEST(Dataset, TestSplitIsCleanAndTrainIsNoisy) {
  const auto split = generate(preset_manifest("dataset4", 2));
  ASSERT_EQ(split.train.size(), 8000u);
  ASSERT_EQ(split.test.size(), 2000u);
  for (std::size_t i = 0; i < split.test.size(); ++i) {
    ASSERT_EQ(split.test.targets()[i], clean_target(split.test.row(i)));
  }
  double sum = 0, sum_sq = 0;
  const double n = static_cast<double>(split.train.size());
  for (std::size_t i = 0; i < split.train.size(); ++i) {
    const double e = split.train.targets()[i] - clean_target(split.train.row(i));
    sum += e;
    sum_sq += e * e;
  }
  const double sigma = kDefaultNoiseSigma;
  EXPECT_LT(std::abs(sum / n), 3 * sigma / std::sqrt(n));
  EXPECT_NEAR(std::sqrt(sum_sq / n), sigma, 0.15);
}

TEST(Dataset, CleanPresetTrainTargetsAreExact) {
  const auto split = generate(preset_manifest("dataset3", 2));
  for (std::size_t i = 0; i < split.train.size(); ++i) {
    ASSERT_EQ(split.train.targets()[i], clean_target(split.train.row(i)));
  }
}

TEST(Dataset, BitsAreFairCoins) {
  const auto split = generate(preset_manifest("dataset5", 4));
  for (std::size_t k = 0; k < 4; ++k) {
    std::size_t ones = 0;
    for (std::size_t i = 0; i < split.train.size(); ++i) ones += split.train.row(i)[k];
    EXPECT_NEAR(ones / 8000.0, 0.5, 0.02) << k;
  }
}

TEST(Dataset, SameSeedSameBytes) {
  const auto a = generate(preset_manifest("dataset6", 9));
  const auto b = generate(preset_manifest("dataset6", 9));
  const auto c = generate(preset_manifest("dataset6", 10));
  EXPECT_EQ(csv_of(a.train), csv_of(b.train));
  EXPECT_EQ(csv_of(a.test), csv_of(b.test));
  EXPECT_NE(csv_of(a.train), csv_of(c.train));
}

TEST(Csv, RowFormat) {
  const Dataset d(2, {1, 0, 0, 1}, {200.0, 103.25});
  EXPECT_EQ(csv_of(d), "x1,x2,y\n1,0,200.0\n0,1,103.25\n");
}

TEST(Csv, RoundTripIsExact) {
  const auto split = generate(preset_manifest("dataset2", 5));
  EXPECT_EQ(parse(csv_of(split.train)), split.train);
}

TEST(Csv, ErrorsCarryLineNumbers) {
  EXPECT_EQ(parse_error_line(""), 1u);
  EXPECT_EQ(parse_error_line("a,b,y\n"), 1u);
  EXPECT_EQ(parse_error_line("x1,x2,y\n1,0,200\n2,0,200\n"), 3u);
  EXPECT_EQ(parse_error_line("x1,x2,y\n1,0,200\n1,0\n"), 3u);
  EXPECT_EQ(parse_error_line("x1,x2,y\n1,0,1,200\n"), 2u);
  EXPECT_EQ(parse_error_line("x1,x2,y\n1,0,abc\n"), 2u);
  EXPECT_EQ(parse("x1,x2,y\r\n1,1,300\r\n\n").size(), 1u);
}

TEST(Manifest, JsonRoundTrip) {
  Manifest m = preset_manifest("dataset4", 123);
  m.n_train = 17;
  EXPECT_EQ(manifest_from_json(to_json(m)), m);
  auto j = to_json(m);
  j["format"] = "other";
  EXPECT_THROW(manifest_from_json(j), ConfigError);
  j = to_json(m);
  j.erase("seed");
  EXPECT_THROW(manifest_from_json(j), ConfigError);
}

TEST(Manifest, SplitRoundTripThroughFiles) {
  Manifest m = preset_manifest("dataset2", 8);
  m.n_train = 100;
  m.n_test = 50;
  const auto split = generate(m);
  const auto dir = std::filesystem::temp_directory_path() / ("tsetlin_ds_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()));
  save_split(split, dir);
  const auto back = load_split(dir);
  EXPECT_EQ(back.manifest, split.manifest);
  EXPECT_EQ(back.train, split.train);
  EXPECT_EQ(back.test, split.test);
  std::filesystem::remove_all(dir);
  EXPECT_THROW(load_split(dir), IoError);
}
