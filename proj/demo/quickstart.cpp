// Train a regression machine on the clean two-bit preset and show what it learned.

#include <iostream>

#include "tsetlin/tsetlin.hpp"

int main() {
  using namespace tsetlin;

  const DatasetSplit split = generate(preset_manifest("dataset1", 1));
  const EncodedInputs train(split.train.inputs(), split.train.n_features());
  const EncodedInputs test(split.test.inputs(), split.test.n_features());

  MachineConfig config;
  config.kind = MachineKind::regression;
  config.clauses = 3;
  config.threshold = 3;
  config.specificity = 2.0;
  config.y_max = split.manifest.y_max;

  Rng rng(machine_seed(1));
  RegressionMachine machine(config, train.n_features(), rng);
  const auto series = fit(machine, train, split.train.targets(), 200, rng);

  std::cout << "train MAE after " << series.size() << " epochs: " << series.back() << "\n";
  std::cout << "test MAE: " << compute_mae(predict_all(machine, test), split.test.targets()) << "\n";
  for (const auto& [pattern, count] : pattern_census(machine)) std::cout << count << " x " << pattern << "\n";
  for (int x1 = 0; x1 < 2; ++x1) {
    for (int x2 = 0; x2 < 2; ++x2) {
      const std::vector<std::uint8_t> x{static_cast<std::uint8_t>(x1), static_cast<std::uint8_t>(x2)};
      std::cout << x1 << x2 << " -> " << machine.predict(make_literals(x)) << "\n";
    }
  }
  return series.back() == 0.0 ? 0 : 1;
}
