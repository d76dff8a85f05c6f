#ifndef HONEYML_DATASET_HPP
#define HONEYML_DATASET_HPP

// Sample schema, CSV ingestion, schema validation, stratified fold plans,
// per-origin subsets and the synthetic data generator.

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "honeyml/core.hpp"
#include "honeyml/random.hpp"

namespace honeyml {

inline constexpr std::size_t kNumFeatures = 12;
inline constexpr std::size_t kNumClasses = 3;
inline constexpr std::size_t kNumOrigins = 7;

/// Measured minerals; the enumerator value is the column index.
enum class Mineral : int { Al, B, Ba, Ca, Fe, K, Mg, Mn, Na, P, Sr, Zn };

inline constexpr std::array<std::string_view, kNumFeatures> kMineralNames = {
    "Al", "B", "Ba", "Ca", "Fe", "K", "Mg", "Mn", "Na", "P", "Sr", "Zn"};

enum class ClassLabel : int { AuthenticHoney = 0, SugarSyrup = 1, AdulteratedHoney = 2 };

inline constexpr std::array<std::string_view, kNumClasses> kClassTokens = {"authentic", "syrup", "adulterated"};
inline constexpr std::array<std::string_view, kNumClasses> kClassDisplay = {"Authentic Honey", "Sugar Syrup",
                                                                             "Adulterated Honey"};

enum class Origin : int { Acacia, Chaste, Jujube, Linden, Rape, TC, None };

inline constexpr std::array<std::string_view, kNumOrigins> kOriginTokens = {"acacia", "chaste", "jujube", "linden",
                                                                             "rape",   "tc",     "none"};
inline constexpr std::array<std::string_view, kNumOrigins> kOriginDisplay = {"Acacia", "Chaste", "Jujube", "Linden",
                                                                              "Rape",   "TC",     "None"};

inline constexpr std::string_view kCsvHeader = "id,origin,class,Al,B,Ba,Ca,Fe,K,Mg,Mn,Na,P,Sr,Zn";

constexpr int code(ClassLabel c) noexcept { return static_cast<int>(c); }
constexpr int code(Origin o) noexcept { return static_cast<int>(o); }
constexpr std::size_t index(Mineral m) noexcept { return static_cast<std::size_t>(m); }

namespace detail {

inline std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return out;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace detail

inline std::optional<ClassLabel> parse_class(std::string_view token) {
    const auto t = detail::lower(detail::trim(token));
    for (std::size_t i = 0; i < kNumClasses; ++i)
        if (t == kClassTokens[i]) return static_cast<ClassLabel>(i);
    return std::nullopt;
}

inline std::optional<Origin> parse_origin(std::string_view token) {
    const auto t = detail::lower(detail::trim(token));
    for (std::size_t i = 0; i < kNumOrigins; ++i)
        if (t == kOriginTokens[i]) return static_cast<Origin>(i);
    return std::nullopt;
}

inline std::optional<Mineral> parse_mineral(std::string_view token) {
    const auto t = detail::lower(detail::trim(token));
    for (std::size_t i = 0; i < kNumFeatures; ++i)
        if (t == detail::lower(kMineralNames[i])) return static_cast<Mineral>(i);
    return std::nullopt;
}

struct Sample {
    std::string id;
    Origin origin = Origin::None;
    ClassLabel label = ClassLabel::AuthenticHoney;
    /// Concentrations in mg/kg; nullopt marks a Not Detected cell.
    std::array<std::optional<double>, kNumFeatures> values{};

    std::array<bool, kNumFeatures> missing_mask() const {
        std::array<bool, kNumFeatures> mask{};
        for (std::size_t i = 0; i < kNumFeatures; ++i) mask[i] = !values[i].has_value();
        return mask;
    }

    bool operator==(const Sample&) const = default;
};

/// Ordered, immutable collection of samples.
class Dataset {
public:
    Dataset() = default;
    explicit Dataset(std::vector<Sample> samples) : samples_(std::move(samples)) {
        for (const auto& s : samples_) ++class_counts_[static_cast<std::size_t>(code(s.label))];
    }

    const std::vector<Sample>& samples() const noexcept { return samples_; }
    std::size_t size() const noexcept { return samples_.size(); }
    bool empty() const noexcept { return samples_.empty(); }
    const Sample& operator[](std::size_t i) const { return samples_[i]; }

    const std::array<std::size_t, kNumClasses>& class_counts() const noexcept { return class_counts_; }
    std::size_t count(ClassLabel c) const noexcept { return class_counts_[static_cast<std::size_t>(code(c))]; }

    /// Class codes in sample order.
    Labels labels() const {
        Labels y;
        y.reserve(samples_.size());
        for (const auto& s : samples_) y.push_back(code(s.label));
        return y;
    }

    bool operator==(const Dataset& other) const { return samples_ == other.samples_; }

private:
    std::vector<Sample> samples_;
    std::array<std::size_t, kNumClasses> class_counts_{};
};

/// Parse the fixed-layout CSV. Throws SchemaError, ParseError or ValidationError.
inline Dataset parse_csv(std::string_view text) {
    std::vector<std::string_view> lines = detail::split(text, '\n');
    std::size_t line_no = 0;
    bool have_header = false;
    std::vector<Sample> samples;

    const auto expected = detail::split(kCsvHeader, ',');

    for (auto raw : lines) {
        ++line_no;
        if (line_no == 1 && raw.starts_with("\xEF\xBB\xBF")) raw.remove_prefix(3);
        const auto line = detail::trim(raw);
        if (line.empty()) continue;
        const auto cells = detail::split(line, ',');

        if (!have_header) {
            have_header = true;
            for (std::size_t c = 0; c < expected.size(); ++c) {
                if (c >= cells.size())
                    throw SchemaError("header is missing column '" + std::string(expected[c]) + "' at position " +
                                      std::to_string(c + 1));
                if (detail::trim(cells[c]) != expected[c])
                    throw SchemaError("header column " + std::to_string(c + 1) + " is '" +
                                      std::string(detail::trim(cells[c])) + "', expected '" +
                                      std::string(expected[c]) + "'");
            }
            if (cells.size() > expected.size())
                throw SchemaError("header has unexpected extra column '" +
                                  std::string(detail::trim(cells[expected.size()])) + "'");
            continue;
        }

        const auto where = [&](std::size_t col) {
            return "row " + std::to_string(line_no) + ", column '" + std::string(expected[col]) + "'";
        };
        if (cells.size() != expected.size())
            throw ParseError("row " + std::to_string(line_no) + ": expected " + std::to_string(expected.size()) +
                             " cells, found " + std::to_string(cells.size()));

        Sample s;
        s.id = std::string(detail::trim(cells[0]));
        auto origin = parse_origin(cells[1]);
        if (!origin) throw ParseError(where(1) + ": unknown origin '" + std::string(detail::trim(cells[1])) + "'");
        s.origin = *origin;
        auto label = parse_class(cells[2]);
        if (!label) throw ParseError(where(2) + ": unknown class '" + std::string(detail::trim(cells[2])) + "'");
        s.label = *label;

        for (std::size_t f = 0; f < kNumFeatures; ++f) {
            const auto cell = detail::trim(cells[3 + f]);
            if (detail::lower(cell) == "nd") continue;
            double v = 0.0;
            const auto* first = cell.data();
            const auto* last = cell.data() + cell.size();
            if (first != last && *first == '+') ++first;
            auto [ptr, ec] = std::from_chars(first, last, v);
            if (cell.empty() || ec != std::errc{} || ptr != last || !std::isfinite(v))
                throw ParseError(where(3 + f) + ": cannot parse '" + std::string(cell) + "' as a concentration");
            if (v < 0.0)
                throw ValidationError(where(3 + f) + ": negative concentration " + std::string(cell));
            s.values[f] = v;
        }
        samples.push_back(std::move(s));
    }
    if (!have_header) throw SchemaError("missing header row '" + std::string(kCsvHeader) + "'");
    return Dataset(std::move(samples));
}

/// Write the dataset in the CSV layout accepted by parse_csv.
inline std::string to_csv(const Dataset& ds) {
    std::string out(kCsvHeader);
    out += '\n';
    for (const auto& s : ds.samples()) {
        out += s.id;
        out += ',';
        out += kOriginTokens[static_cast<std::size_t>(code(s.origin))];
        out += ',';
        out += kClassTokens[static_cast<std::size_t>(code(s.label))];
        for (const auto& v : s.values) {
            out += ',';
            out += v ? detail::format_double(*v) : std::string("ND");
        }
        out += '\n';
    }
    return out;
}

struct ValidationReport {
    std::size_t n_samples = 0;
    std::array<std::size_t, kNumClasses> class_counts{};
    std::array<double, kNumFeatures> nd_rate{};
    std::array<std::size_t, kNumOrigins> origin_counts{};
    std::vector<std::string> violations;

    bool valid() const noexcept { return violations.empty(); }
    std::size_t classes_present() const noexcept {
        return static_cast<std::size_t>(std::count_if(class_counts.begin(), class_counts.end(),
                                                       [](std::size_t c) { return c > 0; }));
    }
};

/// Collect per-class counts, ND rates and origin distribution; invariant
/// breaches are listed as violations rather than thrown.
inline ValidationReport validate_schema(const Dataset& ds) {
    ValidationReport r;
    r.n_samples = ds.size();
    r.class_counts = ds.class_counts();
    if (ds.empty()) {
        r.violations.emplace_back("no samples");
        return r;
    }
    std::array<std::size_t, kNumFeatures> nd{};
    std::set<std::string> ids;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const auto& s = ds[i];
        const std::string tag = "sample " + std::to_string(i + 1) + " ('" + s.id + "')";
        ++r.origin_counts[static_cast<std::size_t>(code(s.origin))];
        if (s.label == ClassLabel::SugarSyrup && s.origin != Origin::None)
            r.violations.push_back(tag + ": syrup must have origin None");
        if (s.label != ClassLabel::SugarSyrup && s.origin == Origin::None)
            r.violations.push_back(tag + ": honey sample must have a botanical origin");
        if (!ids.insert(s.id).second) r.violations.push_back(tag + ": duplicate id");
        for (std::size_t f = 0; f < kNumFeatures; ++f) {
            if (!s.values[f]) {
                ++nd[f];
            } else if (!std::isfinite(*s.values[f]) || *s.values[f] < 0.0) {
                r.violations.push_back(tag + ": " + std::string(kMineralNames[f]) + " is not a finite non-negative value");
            }
        }
    }
    for (std::size_t f = 0; f < kNumFeatures; ++f)
        r.nd_rate[f] = static_cast<double>(nd[f]) / static_cast<double>(ds.size());
    for (std::size_t c = 0; c < kNumClasses; ++c)
        if (r.class_counts[c] == 0)
            r.violations.push_back("class '" + std::string(kClassTokens[c]) + "' has no samples");
    return r;
}

/// Assignment of every sample to one of k folds.
struct FoldPlan {
    std::size_t k = 0;
    std::uint64_t seed = 0;
    std::vector<std::size_t> assignments;

    std::vector<std::size_t> test_indices(std::size_t fold) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < assignments.size(); ++i)
            if (assignments[i] == fold) out.push_back(i);
        return out;
    }

    std::vector<std::size_t> train_indices(std::size_t fold) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < assignments.size(); ++i)
            if (assignments[i] != fold) out.push_back(i);
        return out;
    }

    bool operator==(const FoldPlan&) const = default;
};

/// Stratified k-fold plan: each class is shuffled with its own seeded stream
/// and dealt round-robin. The dealing position carries over from one class to
/// the next, so per-class fold sizes differ by at most one and every fold is
/// non-empty whenever k <= n.
inline FoldPlan stratified_folds(std::span<const int> y, std::size_t n_classes, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("fold count must be at least 2, got " + std::to_string(k));
    if (k > y.size())
        throw std::invalid_argument("fold count " + std::to_string(k) + " exceeds sample count " +
                                    std::to_string(y.size()));
    std::vector<std::size_t> counts;
    count_classes_in(y, n_classes, counts);

    FoldPlan plan{k, seed, std::vector<std::size_t>(y.size(), 0)};
    std::size_t next_fold = 0;
    for (std::size_t c = 0; c < n_classes; ++c) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < y.size(); ++i)
            if (static_cast<std::size_t>(y[i]) == c) members.push_back(i);
        Rng rng(derive_seed(seed, c));
        rng.shuffle(std::span<std::size_t>(members));
        for (auto idx : members) {
            plan.assignments[idx] = next_fold;
            next_fold = (next_fold + 1) % k;
        }
    }
    return plan;
}

inline FoldPlan stratified_folds(const Dataset& ds, std::size_t k, std::uint64_t seed) {
    const auto y = ds.labels();
    return stratified_folds(y, kNumClasses, k, seed);
}

/// Honey samples (authentic and adulterated) of one botanical origin. Syrup
/// rows carry no origin and are never returned.
inline Dataset filter_by_origin(const Dataset& ds, Origin origin) {
    if (origin == Origin::None) throw std::invalid_argument("filter_by_origin requires a botanical origin, not None");
    std::vector<Sample> out;
    for (const auto& s : ds.samples())
        if (s.origin == origin && s.label != ClassLabel::SugarSyrup) out.push_back(s);
    return Dataset(std::move(out));
}

// ---------------------------------------------------------------------------
// Synthetic data

struct ClassProfile {
    std::array<double, kNumFeatures> mean{};
    std::array<double, kNumFeatures> stddev{};
    std::array<double, kNumFeatures> nd_probability{};
};

struct SynthConfig {
    std::array<std::size_t, kNumClasses> n_per_class{};
    std::array<ClassProfile, kNumClasses> profiles{};
    /// Relative weights of the six botanical origins for honey rows.
    std::array<double, kNumOrigins - 1> origin_weights{1, 1, 1, 1, 1, 1};
};

inline void validate(const SynthConfig& cfg) {
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        if (cfg.n_per_class[c] == 0)
            throw std::invalid_argument("synthetic class '" + std::string(kClassTokens[c]) + "' needs a positive count");
        for (std::size_t f = 0; f < kNumFeatures; ++f) {
            const auto& p = cfg.profiles[c];
            if (!std::isfinite(p.mean[f]) || !std::isfinite(p.stddev[f]) || p.stddev[f] < 0.0)
                throw std::invalid_argument("synthetic " + std::string(kMineralNames[f]) +
                                            ": mean must be finite and stddev finite and >= 0");
            if (!(p.nd_probability[f] >= 0.0 && p.nd_probability[f] <= 1.0))
                throw std::invalid_argument("synthetic " + std::string(kMineralNames[f]) +
                                            ": ND probability must lie in [0, 1]");
        }
    }
    double total = 0.0;
    for (double w : cfg.origin_weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("origin weights must be finite and >= 0");
        total += w;
    }
    if (total <= 0.0) throw std::invalid_argument("origin weights must not all be zero");
}

/// Gaussian class-conditional samples clamped at zero, with per-cell ND
/// injection. Rows are emitted class by class; the same (cfg, seed) always
/// yields the same dataset.
inline Dataset generate_synthetic(const SynthConfig& cfg, std::uint64_t seed) {
    validate(cfg);
    double total_weight = 0.0;
    for (double w : cfg.origin_weights) total_weight += w;

    Rng rng(seed);
    std::vector<Sample> out;
    std::size_t serial = 0;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        const auto label = static_cast<ClassLabel>(c);
        const auto& prof = cfg.profiles[c];
        for (std::size_t i = 0; i < cfg.n_per_class[c]; ++i) {
            Sample s;
            s.id = "S" + std::to_string(++serial);
            s.label = label;
            if (label == ClassLabel::SugarSyrup) {
                s.origin = Origin::None;
            } else {
                double u = rng.uniform() * total_weight;
                std::size_t chosen = 0;
                for (std::size_t o = 0; o < cfg.origin_weights.size(); ++o) {
                    if (cfg.origin_weights[o] <= 0.0) continue;
                    chosen = o;  // last positive weight absorbs rounding
                    if (u < cfg.origin_weights[o]) break;
                    u -= cfg.origin_weights[o];
                }
                s.origin = static_cast<Origin>(chosen);
            }
            for (std::size_t f = 0; f < kNumFeatures; ++f) {
                const double nd_draw = rng.uniform();
                const double value = std::max(0.0, prof.mean[f] + prof.stddev[f] * rng.normal());
                if (nd_draw < prof.nd_probability[f]) continue;
                s.values[f] = value;
            }
            out.push_back(std::move(s));
        }
    }
    return Dataset(std::move(out));
}

/// Class sizes of the reference honey dataset (authentic, syrup, adulterated).
inline constexpr std::array<std::size_t, kNumClasses> kReferenceClassCounts = {201, 45, 183};

/// Three classes separated by 12 standard deviations on Al, B and Ba; the
/// remaining minerals share one distribution across classes.
inline SynthConfig separable_preset() {
    SynthConfig cfg;
    cfg.n_per_class = kReferenceClassCounts;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        auto& p = cfg.profiles[c];
        for (std::size_t f = 0; f < kNumFeatures; ++f) {
            p.mean[f] = 50.0;
            p.stddev[f] = 10.0;
        }
        for (std::size_t f = 0; f < 3; ++f) {
            p.mean[f] = 20.0 + 60.0 * static_cast<double>(c);
            p.stddev[f] = 5.0;
        }
    }
    return cfg;
}

/// Only `informative` carries class signal; every other mineral is noise
/// drawn from the same distribution in all classes.
inline SynthConfig planted_preset(Mineral informative = Mineral::Ba) {
    SynthConfig cfg;
    cfg.n_per_class = kReferenceClassCounts;
    const auto inf = index(informative);
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        auto& p = cfg.profiles[c];
        for (std::size_t f = 0; f < kNumFeatures; ++f) {
            p.mean[f] = 50.0;
            p.stddev[f] = 10.0;
        }
        p.mean[inf] = 20.0 + 30.0 * static_cast<double>(c);
        p.stddev[inf] = 3.0;
    }
    return cfg;
}

}  // namespace honeyml

#endif  // HONEYML_DATASET_HPP
