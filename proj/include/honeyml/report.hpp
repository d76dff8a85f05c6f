#ifndef HONEYML_REPORT_HPP
#define HONEYML_REPORT_HPP

// Machine-readable (JSON) and human-readable renderings of reports.

#include <iomanip>
#include <sstream>
#include <string>

#include <json.hpp>

#include "honeyml/dataset.hpp"
#include "honeyml/eval.hpp"
#include "honeyml/importance.hpp"

namespace honeyml {

inline constexpr int kReportFormatVersion = 1;

namespace detail {

inline std::string display_class(const std::string& token) {
    for (std::size_t c = 0; c < kNumClasses; ++c)
        if (token == kClassTokens[c]) return std::string(kClassDisplay[c]);
    return token;
}

inline std::string fixed(double v, int digits) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << v;
    return os.str();
}

inline std::string pad(std::string s, std::size_t width) {
    if (s.size() < width) s.append(width - s.size(), ' ');
    return s;
}

inline nlohmann::json triple_json(const MetricTriple& t) {
    return {{"precision", t.precision}, {"recall", t.recall}, {"f1", t.f1}};
}

}  // namespace detail

inline nlohmann::json to_json(const ValidationReport& r) {
    using nlohmann::json;
    json classes = json::object();
    for (std::size_t c = 0; c < kNumClasses; ++c) classes[std::string(kClassTokens[c])] = r.class_counts[c];
    json nd = json::object();
    for (std::size_t f = 0; f < kNumFeatures; ++f) nd[std::string(kMineralNames[f])] = r.nd_rate[f];
    json origins = json::object();
    for (std::size_t o = 0; o < kNumOrigins; ++o) origins[std::string(kOriginTokens[o])] = r.origin_counts[o];
    return {{"report_kind", "validation"},
            {"format_version", kReportFormatVersion},
            {"valid", r.valid()},
            {"n_samples", r.n_samples},
            {"classes_present", r.classes_present()},
            {"class_counts", classes},
            {"nd_rate", nd},
            {"origin_counts", origins},
            {"violations", r.violations}};
}

inline std::string to_text(const ValidationReport& r) {
    std::ostringstream os;
    os << "Samples: " << r.n_samples << "\n\nClass counts\n";
    for (std::size_t c = 0; c < kNumClasses; ++c)
        os << "  " << detail::pad(std::string(kClassDisplay[c]), 20) << r.class_counts[c] << '\n';
    os << "\nOrigin counts\n";
    for (std::size_t o = 0; o < kNumOrigins; ++o)
        os << "  " << detail::pad(std::string(kOriginDisplay[o]), 20) << r.origin_counts[o] << '\n';
    os << "\nND rate per mineral\n";
    for (std::size_t f = 0; f < kNumFeatures; ++f)
        os << "  " << detail::pad(std::string(kMineralNames[f]), 20) << detail::fixed(r.nd_rate[f], 4) << '\n';
    os << '\n';
    if (r.valid()) {
        os << "Valid: no violations\n";
    } else {
        os << "Invalid: " << r.violations.size() << " violation(s)\n";
        for (const auto& v : r.violations) os << "  - " << v << '\n';
    }
    return os.str();
}

/// `include_timing` adds the wall-clock field, which differs between runs.
inline nlohmann::json to_json(const CVReport& r, bool include_timing = false) {
    using nlohmann::json;
    json cm = json::array();
    for (std::size_t t = 0; t < r.confusion.n_classes(); ++t) {
        json row = json::array();
        for (std::size_t p = 0; p < r.confusion.n_classes(); ++p) row.push_back(r.confusion.at(t, p));
        cm.push_back(row);
    }
    json per = json::array();
    for (std::size_t c = 0; c < r.per_class.size(); ++c) {
        const auto& m = r.per_class[c];
        per.push_back({{"class", r.class_names[c]},
                       {"support", r.confusion.row_sum(c)},
                       {"precision", m.precision},
                       {"recall", m.recall},
                       {"f1", m.f1},
                       {"precision_undefined", m.precision_undefined},
                       {"recall_undefined", m.recall_undefined}});
    }
    json j = {{"report_kind", "cross_validation"},
              {"format_version", kReportFormatVersion},
              {"model", r.model},
              {"config", r.config},
              {"k", r.k},
              {"seed", r.seed},
              {"policy", std::string(to_string(r.policy))},
              {"classes", r.class_names},
              {"fold_sizes", r.fold_sizes},
              {"n_samples", r.confusion.total()},
              {"confusion_matrix", cm},
              {"per_class", per},
              {"averages", {{"macro", detail::triple_json(r.averages.macro)},
                            {"weighted", detail::triple_json(r.averages.weighted)}}},
              {"accuracy", r.averages.accuracy}};
    if (include_timing) j["wall_clock_seconds"] = r.wall_clock_seconds;
    return j;
}

/// Per-class table, confusion matrix and averages in the layout of a
/// classification report.
inline std::string to_text(const CVReport& r) {
    std::ostringstream os;
    os << "Model: " << r.model << "  folds: " << r.k << "  seed: " << r.seed << "  preprocessing: "
       << to_string(r.policy) << "\n\n";
    os << detail::pad("Class", 20) << detail::pad("Precision", 11) << detail::pad("Recall", 11) << "F1 Score\n";
    for (std::size_t c = 0; c < r.per_class.size(); ++c) {
        const auto& m = r.per_class[c];
        os << detail::pad(detail::display_class(r.class_names[c]), 20) << detail::pad(detail::fixed(m.precision, 3), 11)
           << detail::pad(detail::fixed(m.recall, 3), 11) << detail::fixed(m.f1, 3);
        if (m.precision_undefined || m.recall_undefined) os << "  (undefined)";
        os << '\n';
    }
    os << "\nConfusion matrix (rows: true class, columns: predicted)\n" << detail::pad("Classified as", 20);
    for (const auto& n : r.class_names) os << detail::pad(detail::display_class(n), 20);
    os << '\n';
    for (std::size_t t = 0; t < r.confusion.n_classes(); ++t) {
        os << detail::pad(detail::display_class(r.class_names[t]), 20);
        for (std::size_t p = 0; p < r.confusion.n_classes(); ++p)
            os << detail::pad(std::to_string(r.confusion.at(t, p)), 20);
        os << '\n';
    }
    const auto& a = r.averages;
    os << "\nAccuracy: " << detail::fixed(a.accuracy, 4) << "  (" << r.confusion.trace() << "/" << r.confusion.total()
       << ")\n";
    os << "Macro avg     P " << detail::fixed(a.macro.precision, 3) << "  R " << detail::fixed(a.macro.recall, 3)
       << "  F1 " << detail::fixed(a.macro.f1, 3) << '\n';
    os << "Weighted avg  P " << detail::fixed(a.weighted.precision, 3) << "  R "
       << detail::fixed(a.weighted.recall, 3) << "  F1 " << detail::fixed(a.weighted.f1, 3) << '\n';
    return os.str();
}

inline nlohmann::json to_json(const OriginReport& r, bool include_timing = false) {
    using nlohmann::json;
    json entries = json::array();
    for (const auto& e : r.entries)
        entries.push_back({{"origin", std::string(kOriginTokens[static_cast<std::size_t>(code(e.origin))])},
                           {"n_samples", e.n_samples},
                           {"accuracy", e.report.averages.accuracy},
                           {"report", to_json(e.report, include_timing)}});
    return {{"report_kind", "per_origin"},
            {"format_version", kReportFormatVersion},
            {"model", r.model},
            {"config", r.config},
            {"k", r.k},
            {"seed", r.seed},
            {"policy", std::string(to_string(r.policy))},
            {"origins", entries},
            {"warnings", r.warnings},
            {"average_accuracy", r.average_accuracy}};
}

/// Accuracy (%) per origin on one line, with the cross-origin average.
inline std::string to_text(const OriginReport& r) {
    std::ostringstream os;
    os << "Model: " << r.model << "  folds: " << r.k << "  seed: " << r.seed << "  preprocessing: "
       << to_string(r.policy) << "\n\n";
    os << detail::pad("Botanical Origin", 20);
    for (const auto& e : r.entries) os << detail::pad(std::string(kOriginDisplay[static_cast<std::size_t>(code(e.origin))]), 10);
    os << "Average\n" << detail::pad("Accuracy (%)", 20);
    for (const auto& e : r.entries) os << detail::pad(detail::fixed(100.0 * e.report.averages.accuracy, 2), 10);
    os << detail::fixed(100.0 * r.average_accuracy, 2) << '\n';
    for (const auto& w : r.warnings) os << "warning: " << w << '\n';
    return os.str();
}

inline nlohmann::json to_json(const ImportanceVector& v) {
    using nlohmann::json;
    json ranked = json::array();
    for (std::size_t rank = 0; rank < v.order.size(); ++rank) {
        const auto f = v.order[rank];
        ranked.push_back({{"rank", rank + 1},
                          {"feature", f < kNumFeatures ? std::string(kMineralNames[f]) : std::to_string(f)},
                          {"score", v.scores[f]}});
    }
    return {{"report_kind", "importance"},
            {"format_version", kReportFormatVersion},
            {"method", "mean_decrease_impurity"},
            {"degenerate", v.degenerate},
            {"ranking", ranked}};
}

inline std::string to_text(const ImportanceVector& v) {
    std::ostringstream os;
    os << detail::pad("Rank", 6) << detail::pad("Mineral", 10) << "Score\n";
    for (std::size_t rank = 0; rank < v.order.size(); ++rank) {
        const auto f = v.order[rank];
        os << detail::pad(std::to_string(rank + 1), 6)
           << detail::pad(f < kNumFeatures ? std::string(kMineralNames[f]) : std::to_string(f), 10)
           << detail::fixed(v.scores[f], 4) << '\n';
    }
    if (v.degenerate) os << "warning: forest contains no splits; all scores are zero\n";
    return os.str();
}

/// `feature,score` rows in feature order, for external charting.
inline std::string to_plot_csv(const ImportanceVector& v) {
    std::string out = "feature,score\n";
    for (std::size_t f = 0; f < v.scores.size(); ++f)
        out += (f < kNumFeatures ? std::string(kMineralNames[f]) : std::to_string(f)) + "," +
               detail::format_double(v.scores[f]) + "\n";
    return out;
}

}  // namespace honeyml

#endif  // HONEYML_REPORT_HPP
