// Generate a synthetic dataset, cross-validate a random forest on it and
// print the mineral ranking.

#include <iostream>

#include "honeyml/dataset.hpp"
#include "honeyml/eval.hpp"
#include "honeyml/importance.hpp"
#include "honeyml/report.hpp"

int main() {
    using namespace honeyml;

    const Dataset ds = generate_synthetic(planted_preset(Mineral::Ba), 7);
    std::cout << to_text(validate_schema(ds)) << '\n';

    ForestConfig forest;
    forest.seed = 42;
    const CVReport report = cross_validate(ds, forest, CVOptions{10, 42, PreprocessPolicy::FitOnTrain, 1});
    std::cout << to_text(report) << '\n';

    const auto model = std::get<ForestModel>(train_on_dataset(forest, ds));
    std::cout << to_text(mdi_importance(model));
}
