#include <gtest/gtest.h>

#include <vector>

#include "tsetlin/dataset.hpp"
#include "tsetlin/model.hpp"

using namespace tsetlin;

namespace {

constexpr std::size_t kFeatures = 3;

MachineConfig config(MachineKind kind, std::uint32_t m, std::uint32_t t) {
  MachineConfig c;
  c.kind = kind;
  c.clauses = m;
  c.threshold = t;
  c.specificity = 2.5;
  c.y_max = 700;
  c.depth = 20;
  c.seed = 42;
  return c;
}

struct Fixture {
  std::vector<std::uint8_t> bits;
  std::vector<double> y;
  std::vector<std::uint8_t> y8;
  std::vector<std::uint32_t> y32;
};

Fixture data(std::uint64_t seed, std::size_t n = 1000) {
  Rng rng(seed);
  Fixture f;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::uint8_t> row(kFeatures);
    for (auto& b : row) b = static_cast<std::uint8_t>(rng.below(2));
    f.bits.insert(f.bits.end(), row.begin(), row.end());
    f.y.push_back(clean_target(row));
    f.y8.push_back(row[0]);
    f.y32.push_back(row[0] + row[1]);
  }
  return f;
}

// One briefly trained model of every snapshot-able kind.
std::vector<AnyModel> trained_models(std::uint64_t seed) {
  const Fixture f = data(seed, 300);
  const EncodedInputs in(f.bits, kFeatures);
  std::vector<AnyModel> out;
  Rng rng(seed);

  ClassicMachine ctm(config(MachineKind::classic, 8, 4), kFeatures, rng);
  fit(ctm, in, std::span<const std::uint8_t>(f.y8), 3, rng);
  out.emplace_back(std::move(ctm));

  auto mc = config(MachineKind::multiclass, 12, 4);
  mc.n_classes = 3;
  MultiClassMachine mtm(mc, kFeatures, rng);
  fit(mtm, in, std::span<const std::uint32_t>(f.y32), 3, rng);
  out.emplace_back(std::move(mtm));

  RegressionMachine rtm(config(MachineKind::regression, 10, 7), kFeatures, rng);
  fit(rtm, in, std::span<const double>(f.y), 3, rng);
  out.emplace_back(std::move(rtm));

  BitwiseCTMRegressor bitwise(config(MachineKind::classic, 4, 4), kFeatures, 700, 100, seed);
  bitwise.fit(in, f.y, 3);
  out.emplace_back(std::move(bitwise));

  MTMRegressor classes(config(MachineKind::multiclass, 32, 4), kFeatures, 700, 100, seed);
  classes.fit(in, f.y, 3);
  out.emplace_back(std::move(classes));
  return out;
}

}  // namespace

TEST(Snapshot, RoundTripPreservesPredictionsAndBytes) {
  const Fixture probe = data(77);
  const EncodedInputs in(probe.bits, kFeatures);
  for (const auto& model : trained_models(5)) {
    const Bytes bytes = snapshot(model);
    const AnyModel back = restore_model(bytes);
    ASSERT_EQ(back.index(), model.index());
    EXPECT_EQ(snapshot(back), bytes);
    for (std::size_t i = 0; i < in.size(); ++i) {
      ASSERT_EQ(predict_value(back, in[i]), predict_value(model, in[i])) << model.index() << ' ' << i;
    }
    EXPECT_EQ(pattern_census(back), pattern_census(model));
  }
}

TEST(Snapshot, MachinesCompareEqualAfterRestore) {
  const auto models = trained_models(6);
  for (std::size_t i = 0; i < 3; ++i) {
    const AnyModel back = restore_model(snapshot(models[i]));
    std::visit(
        [&](const auto& m) {
          using M = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<M, ClassicMachine> || std::is_same_v<M, MultiClassMachine> ||
                        std::is_same_v<M, RegressionMachine>) {
            EXPECT_EQ(std::get<M>(back), m);
          }
        },
        models[i]);
  }
}

TEST(Snapshot, IdenticalSeedsGiveIdenticalBytes) {
  const auto a = trained_models(9);
  const auto b = trained_models(9);
  const auto c = trained_models(10);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(snapshot(a[i]), snapshot(b[i]));
    EXPECT_NE(snapshot(a[i]), snapshot(c[i]));
  }
}

TEST(Snapshot, CorruptInputIsRejected) {
  const auto models = trained_models(3);
  const Bytes good = snapshot(models[2]);  // regression machine

  Bytes bad_magic = good;
  bad_magic[0] = std::byte{'X'};
  EXPECT_THROW(restore_model(bad_magic), SnapshotError);

  Bytes bad_version = good;
  bad_version[4] = std::byte{2};
  EXPECT_THROW(restore_model(bad_version), SnapshotError);

  Bytes bad_kind = good;
  bad_kind[6] = std::byte{9};
  EXPECT_THROW(restore_model(bad_kind), SnapshotError);

  Bytes truncated(good.begin(), good.end() - 1);
  EXPECT_THROW(restore_model(truncated), SnapshotError);
  EXPECT_THROW(restore_model(Bytes(good.begin(), good.begin() + 10)), SnapshotError);

  Bytes trailing = good;
  trailing.push_back(std::byte{0});
  EXPECT_THROW(restore_model(trailing), SnapshotError);

  // header is 64 bytes plus the u64 automaton count; the first state follows
  Bytes zero_state = good;
  for (int i = 72; i < 76; ++i) zero_state[i] = std::byte{0};
  EXPECT_THROW(restore_model(zero_state), SnapshotError);
  Bytes high_state = good;
  high_state[72] = std::byte{41};  // depth 20: states stop at 40
  EXPECT_THROW(restore_model(high_state), SnapshotError);

  Bytes adapter = snapshot(models[4]);
  adapter.push_back(std::byte{1});
  EXPECT_THROW(restore_model(adapter), SnapshotError);
  EXPECT_THROW(restore_model(Bytes{}), SnapshotError);
}

TEST(Snapshot, FileRoundTrip) {
  const auto models = trained_models(4);
  const auto path = std::filesystem::temp_directory_path() / "tsetlin_snapshot_test.bin";
  write_file(path, snapshot(models[0]));
  EXPECT_EQ(read_file(path), snapshot(models[0]));
  std::filesystem::remove(path);
  EXPECT_THROW(read_file(path), IoError);
}
