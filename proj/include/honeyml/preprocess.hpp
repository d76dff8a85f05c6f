#ifndef HONEYML_PREPROCESS_HPP
#define HONEYML_PREPROCESS_HPP

#include <algorithm>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "honeyml/core.hpp"
#include "honeyml/dataset.hpp"

namespace honeyml {

/// Where the min-max scaler is fitted during cross-validation.
enum class PreprocessPolicy {
    FitOnTrain,  ///< per fold, on the training rows only
    FitOnAll,    ///< once, on the whole dataset before splitting
};

constexpr std::string_view to_string(PreprocessPolicy p) noexcept {
    return p == PreprocessPolicy::FitOnTrain ? "fit-on-train" : "fit-on-all";
}

/// Feature matrix with every Not Detected cell set to zero.
inline Matrix impute_missing(const Dataset& ds) {
    Matrix X(ds.size(), kNumFeatures);
    for (std::size_t i = 0; i < ds.size(); ++i)
        for (std::size_t f = 0; f < kNumFeatures; ++f) X(i, f) = ds[i].values[f].value_or(0.0);
    return X;
}

/// Per-feature extrema of the fitting matrix.
struct ScalerParams {
    std::vector<double> min;
    std::vector<double> max;

    std::size_t n_features() const noexcept { return min.size(); }
    bool operator==(const ScalerParams&) const = default;
};

inline ScalerParams fit_scaler(const Matrix& X) {
    if (X.empty() || X.cols() == 0) throw std::invalid_argument("cannot fit a scaler on an empty matrix");
    ScalerParams p{std::vector<double>(X.row(0).begin(), X.row(0).end()),
                   std::vector<double>(X.row(0).begin(), X.row(0).end())};
    for (std::size_t r = 1; r < X.rows(); ++r)
        for (std::size_t c = 0; c < X.cols(); ++c) {
            p.min[c] = std::min(p.min[c], X(r, c));
            p.max[c] = std::max(p.max[c], X(r, c));
        }
    return p;
}

/// x -> (x - min) / (max - min). Constant features map to 0. Values outside
/// the fitted range are left outside [0, 1].
inline Matrix apply_scaler(const ScalerParams& p, const Matrix& X) {
    if (X.cols() != p.n_features())
        throw std::invalid_argument("scaler fitted on " + std::to_string(p.n_features()) + " features, matrix has " +
                                    std::to_string(X.cols()));
    Matrix out(X.rows(), X.cols());
    for (std::size_t c = 0; c < X.cols(); ++c) {
        const double range = p.max[c] - p.min[c];
        for (std::size_t r = 0; r < X.rows(); ++r)
            out(r, c) = range > 0.0 ? (X(r, c) - p.min[c]) / range : 0.0;
    }
    return out;
}

}  // namespace honeyml

#endif  // HONEYML_PREPROCESS_HPP
