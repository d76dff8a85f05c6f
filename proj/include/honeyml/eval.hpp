#ifndef HONEYML_EVAL_HPP
#define HONEYML_EVAL_HPP

// Confusion matrices, per-class and averaged metrics, pooled stratified
// cross-validation and per-origin evaluation.

#include <chrono>
#include <cmath>
#include <functional>
#include <initializer_list>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "honeyml/dataset.hpp"
#include "honeyml/forest.hpp"
#include "honeyml/logistic.hpp"
#include "honeyml/preprocess.hpp"
#include "honeyml/serialize.hpp"
#include "honeyml/tree.hpp"

namespace honeyml {

/// Rows are true classes, columns predicted classes.
class ConfusionMatrix {
public:
    explicit ConfusionMatrix(std::size_t n_classes = 0) : n_(n_classes), counts_(n_classes * n_classes, 0) {}
    ConfusionMatrix(std::initializer_list<std::initializer_list<std::size_t>> rows) : ConfusionMatrix(rows.size()) {
        std::size_t i = 0;
        for (const auto& r : rows) {
            if (r.size() != n_) throw std::invalid_argument("confusion matrix must be square");
            std::size_t j = 0;
            for (auto v : r) at(i, j++) = v;
            ++i;
        }
    }

    std::size_t n_classes() const noexcept { return n_; }
    std::size_t& at(std::size_t t, std::size_t p) { return counts_[t * n_ + p]; }
    std::size_t at(std::size_t t, std::size_t p) const { return counts_[t * n_ + p]; }

    std::size_t total() const noexcept {
        std::size_t s = 0;
        for (auto v : counts_) s += v;
        return s;
    }
    std::size_t trace() const noexcept {
        std::size_t s = 0;
        for (std::size_t i = 0; i < n_; ++i) s += at(i, i);
        return s;
    }
    std::size_t row_sum(std::size_t t) const {
        std::size_t s = 0;
        for (std::size_t p = 0; p < n_; ++p) s += at(t, p);
        return s;
    }
    std::size_t col_sum(std::size_t p) const {
        std::size_t s = 0;
        for (std::size_t t = 0; t < n_; ++t) s += at(t, p);
        return s;
    }

    ConfusionMatrix& operator+=(const ConfusionMatrix& o) {
        if (o.n_ != n_) throw std::invalid_argument("confusion matrix sizes differ");
        for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += o.counts_[i];
        return *this;
    }

    bool operator==(const ConfusionMatrix&) const = default;

private:
    std::size_t n_;
    std::vector<std::size_t> counts_;
};

inline ConfusionMatrix confusion_matrix(std::span<const int> y_true, std::span<const int> y_pred,
                                        std::size_t n_classes) {
    if (y_true.size() != y_pred.size())
        throw std::invalid_argument("y_true has " + std::to_string(y_true.size()) + " labels, y_pred has " +
                                    std::to_string(y_pred.size()));
    ConfusionMatrix cm(n_classes);
    const auto ok = [&](int v) { return v >= 0 && static_cast<std::size_t>(v) < n_classes; };
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        if (!ok(y_true[i]) || !ok(y_pred[i]))
            throw std::invalid_argument("unknown label at position " + std::to_string(i));
        ++cm.at(static_cast<std::size_t>(y_true[i]), static_cast<std::size_t>(y_pred[i]));
    }
    return cm;
}

/// Zero denominators yield 0 with the matching `undefined` flag set.
struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    bool precision_undefined = false;
    bool recall_undefined = false;
};

inline std::vector<ClassMetrics> class_metrics(const ConfusionMatrix& cm) {
    std::vector<ClassMetrics> out(cm.n_classes());
    for (std::size_t c = 0; c < cm.n_classes(); ++c) {
        auto& m = out[c];
        const auto tp = static_cast<double>(cm.at(c, c));
        const auto col = cm.col_sum(c);
        const auto row = cm.row_sum(c);
        m.precision_undefined = col == 0;
        m.recall_undefined = row == 0;
        m.precision = col ? tp / static_cast<double>(col) : 0.0;
        m.recall = row ? tp / static_cast<double>(row) : 0.0;
        m.f1 = (m.precision + m.recall) > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
    }
    return out;
}

struct MetricTriple {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

struct AggregateMetrics {
    double accuracy = 0.0;
    MetricTriple macro;
    MetricTriple weighted;  ///< weighted by true-class support
};

inline AggregateMetrics aggregate_metrics(const ConfusionMatrix& cm) {
    const auto total = cm.total();
    if (total == 0) throw std::invalid_argument("cannot aggregate metrics of an empty confusion matrix");
    const auto per = class_metrics(cm);
    AggregateMetrics a;
    a.accuracy = static_cast<double>(cm.trace()) / static_cast<double>(total);
    const double n_classes = static_cast<double>(cm.n_classes());
    for (std::size_t c = 0; c < cm.n_classes(); ++c) {
        const double w = static_cast<double>(cm.row_sum(c)) / static_cast<double>(total);
        a.macro.precision += per[c].precision / n_classes;
        a.macro.recall += per[c].recall / n_classes;
        a.macro.f1 += per[c].f1 / n_classes;
        a.weighted.precision += w * per[c].precision;
        a.weighted.recall += w * per[c].recall;
        a.weighted.f1 += w * per[c].f1;
    }
    // Support-weighted recall is sum_c tp_c / total, i.e. accuracy.
    if (std::abs(a.weighted.recall - a.accuracy) > 1e-12)
        throw std::logic_error("weighted recall diverged from accuracy");
    return a;
}

// ---------------------------------------------------------------------------
// Model dispatch

using ModelSpec = std::variant<LRConfig, TreeConfig, ForestConfig>;

inline std::string_view short_kind(const ModelSpec& s) {
    static constexpr std::string_view names[] = {"lr", "dt", "rf"};
    return names[s.index()];
}

inline nlohmann::json config_to_json(const ModelSpec& s) {
    return std::visit([](const auto& c) { return detail::to_json(c); }, s);
}

/// Train the model described by `spec` on prepared features.
inline AnyModel fit_model(const ModelSpec& spec, const Matrix& X, std::span<const int> y, std::size_t n_classes,
                          std::size_t threads = 1) {
    return std::visit(
        [&](const auto& cfg) -> AnyModel {
            using C = std::decay_t<decltype(cfg)>;
            if constexpr (std::is_same_v<C, LRConfig>)
                return train_logistic(X, y, n_classes, cfg);
            else if constexpr (std::is_same_v<C, TreeConfig>)
                return train_tree(X, y, n_classes, cfg);
            else
                return train_forest(X, y, n_classes, cfg, threads);
        },
        spec);
}

inline Labels predict(const AnyModel& model, const Matrix& X) {
    return std::visit(
        [&](const auto& m) -> Labels {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, LRModel>)
                return predict_logistic(m, X).labels;
            else if constexpr (std::is_same_v<M, TreeModel>)
                return predict_tree(m, X);
            else
                return predict_forest(m, X);
        },
        model);
}

inline const ScalerParams& scaler_of(const AnyModel& model) {
    return std::visit([](const auto& m) -> const ScalerParams& { return m.scaler; }, model);
}

inline void attach_scaler(AnyModel& model, ScalerParams p) {
    std::visit([&](auto& m) { m.scaler = std::move(p); }, model);
}

/// Impute, fit the scaler on all rows, train; the scaler travels with the model.
inline AnyModel train_on_dataset(const ModelSpec& spec, const Dataset& ds, std::size_t threads = 1) {
    if (ds.empty()) throw std::invalid_argument("cannot train on an empty dataset");
    const Matrix raw = impute_missing(ds);
    auto scaler = fit_scaler(raw);
    const auto y = ds.labels();
    auto model = fit_model(spec, apply_scaler(scaler, raw), y, kNumClasses, threads);
    attach_scaler(model, std::move(scaler));
    return model;
}

/// Apply the model's own imputation and scaling, then predict.
inline Labels predict_dataset(const AnyModel& model, const Dataset& ds) {
    const Matrix raw = impute_missing(ds);
    const auto& scaler = scaler_of(model);
    return predict(model, scaler.min.empty() ? raw : apply_scaler(scaler, raw));
}

// ---------------------------------------------------------------------------
// Cross-validation

struct CVOptions {
    std::size_t k = 10;
    std::uint64_t seed = 42;
    PreprocessPolicy policy = PreprocessPolicy::FitOnTrain;
    std::size_t threads = 1;
};

struct CVOutcome {
    ConfusionMatrix confusion;
    FoldPlan plan;
};

/// Predictor returned by a fit callback: maps a prepared matrix to labels.
using Predictor = std::function<Labels(const Matrix&)>;
using FitFn = std::function<Predictor(const Matrix&, std::span<const int>, std::size_t)>;

/// Pooled stratified k-fold CV on an imputed matrix. Each fold is scaled per
/// `policy`, trained through `fit` and scored; held-out predictions from all
/// folds are summed into one confusion matrix, in fold order.
inline CVOutcome cross_validate_with(const Matrix& imputed, std::span<const int> y, std::size_t n_classes,
                                     const CVOptions& opt, const FitFn& fit) {
    if (imputed.rows() != y.size()) throw std::invalid_argument("label count does not match row count");
    CVOutcome out{ConfusionMatrix(n_classes), stratified_folds(y, n_classes, opt.k, opt.seed)};

    std::vector<std::size_t> overall;
    count_classes_in(y, n_classes, overall);

    std::optional<ScalerParams> global;
    if (opt.policy == PreprocessPolicy::FitOnAll) global = fit_scaler(imputed);

    for (std::size_t fold = 0; fold < opt.k; ++fold) {
        const auto train_idx = out.plan.train_indices(fold);
        const auto test_idx = out.plan.test_indices(fold);
        Labels y_train, y_test;
        for (auto i : train_idx) y_train.push_back(y[i]);
        for (auto i : test_idx) y_test.push_back(y[i]);

        std::vector<std::size_t> train_counts;
        count_classes_in(y_train, n_classes, train_counts);
        for (std::size_t c = 0; c < n_classes; ++c)
            if (overall[c] > 0 && train_counts[c] == 0)
                throw TrainingError(fold, "class " + std::to_string(c) + " is absent from the training split");

        const Matrix train_raw = imputed.select_rows(train_idx);
        const Matrix test_raw = imputed.select_rows(test_idx);
        const ScalerParams scaler = global ? *global : fit_scaler(train_raw);

        Predictor predictor;
        try {
            predictor = fit(apply_scaler(scaler, train_raw), y_train, n_classes);
        } catch (const std::exception& e) {
            throw TrainingError(fold, e.what());
        }
        const auto y_pred = predictor(apply_scaler(scaler, test_raw));
        out.confusion += confusion_matrix(y_test, y_pred, n_classes);
    }
    return out;
}

struct CVReport {
    std::string model;  ///< lr | dt | rf
    nlohmann::json config;
    std::size_t k = 0;
    std::uint64_t seed = 0;
    PreprocessPolicy policy = PreprocessPolicy::FitOnTrain;
    std::vector<std::string> class_names;
    std::vector<std::size_t> fold_sizes;
    ConfusionMatrix confusion;
    std::vector<ClassMetrics> per_class;
    AggregateMetrics averages;
    double wall_clock_seconds = 0.0;
};

inline FitFn make_fit(const ModelSpec& spec, std::size_t threads) {
    return [spec, threads](const Matrix& X, std::span<const int> y, std::size_t n_classes) -> Predictor {
        auto model = std::make_shared<AnyModel>(fit_model(spec, X, y, n_classes, threads));
        return [model](const Matrix& Xt) { return predict(*model, Xt); };
    };
}

inline CVReport cross_validate_labels(const Matrix& imputed, std::span<const int> y,
                                      std::vector<std::string> class_names, const ModelSpec& spec,
                                      const CVOptions& opt) {
    const auto start = std::chrono::steady_clock::now();
    auto outcome = cross_validate_with(imputed, y, class_names.size(), opt, make_fit(spec, opt.threads));

    CVReport r;
    r.model = std::string(short_kind(spec));
    r.config = config_to_json(spec);
    r.k = opt.k;
    r.seed = opt.seed;
    r.policy = opt.policy;
    r.class_names = std::move(class_names);
    r.fold_sizes.assign(opt.k, 0);
    for (auto f : outcome.plan.assignments) ++r.fold_sizes[f];
    r.per_class = class_metrics(outcome.confusion);
    r.averages = aggregate_metrics(outcome.confusion);
    r.confusion = std::move(outcome.confusion);
    r.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

inline std::vector<std::string> general_class_names() {
    return {std::string(kClassTokens[0]), std::string(kClassTokens[1]), std::string(kClassTokens[2])};
}

/// Three-class evaluation over the whole dataset.
inline CVReport cross_validate(const Dataset& ds, const ModelSpec& spec, const CVOptions& opt = {}) {
    const auto y = ds.labels();
    return cross_validate_labels(impute_missing(ds), y, general_class_names(), spec, opt);
}

// ---------------------------------------------------------------------------
// Per-origin evaluation

struct OriginEntry {
    Origin origin;
    std::size_t n_samples = 0;
    CVReport report;
};

struct OriginReport {
    std::string model;
    nlohmann::json config;
    std::size_t k = 0;
    std::uint64_t seed = 0;
    PreprocessPolicy policy = PreprocessPolicy::FitOnTrain;
    std::vector<OriginEntry> entries;
    std::vector<std::string> warnings;
    double average_accuracy = 0.0;
};

/// Binary labels for a per-origin subset: 0 authentic, 1 adulterated (the positive class).
inline Labels binary_labels(const Dataset& subset) {
    Labels y;
    y.reserve(subset.size());
    for (const auto& s : subset.samples()) y.push_back(s.label == ClassLabel::AdulteratedHoney ? 1 : 0);
    return y;
}

/// One binary authentic-vs-adulterated CV per botanical origin present in
/// `ds`. Origins with a single class or fewer than k samples are skipped and
/// listed in `warnings`.
inline OriginReport per_origin_evaluation(const Dataset& ds, const ModelSpec& spec, const CVOptions& opt = {}) {
    OriginReport out;
    out.model = std::string(short_kind(spec));
    out.config = config_to_json(spec);
    out.k = opt.k;
    out.seed = opt.seed;
    out.policy = opt.policy;

    double sum = 0.0;
    for (int o = 0; o < code(Origin::None); ++o) {
        const auto origin = static_cast<Origin>(o);
        const auto subset = filter_by_origin(ds, origin);
        if (subset.empty()) continue;
        const std::string name(kOriginTokens[static_cast<std::size_t>(o)]);
        const auto n_auth = subset.count(ClassLabel::AuthenticHoney);
        const auto n_adul = subset.count(ClassLabel::AdulteratedHoney);
        if (n_auth == 0 || n_adul == 0) {
            out.warnings.push_back(name + ": skipped, only one class present (" + std::to_string(n_auth) +
                                   " authentic, " + std::to_string(n_adul) + " adulterated)");
            continue;
        }
        if (subset.size() < opt.k) {
            out.warnings.push_back(name + ": skipped, " + std::to_string(subset.size()) + " samples < " +
                                   std::to_string(opt.k) + " folds");
            continue;
        }
        const auto y = binary_labels(subset);
        auto report = cross_validate_labels(impute_missing(subset), y, {"authentic", "adulterated"}, spec, opt);
        sum += report.averages.accuracy;
        out.entries.push_back({origin, subset.size(), std::move(report)});
    }
    if (out.entries.empty()) throw std::invalid_argument("no botanical origin has both authentic and adulterated samples");
    out.average_accuracy = sum / static_cast<double>(out.entries.size());
    return out;
}

}  // namespace honeyml

#endif  // HONEYML_EVAL_HPP
