#ifndef HONEYML_TREE_HPP
#define HONEYML_TREE_HPP

// CART classification tree with Gini impurity and midpoint thresholds.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "honeyml/core.hpp"
#include "honeyml/preprocess.hpp"
#include "honeyml/random.hpp"

namespace honeyml {

/// 1 - sum_c p_c^2.
inline double gini_impurity(std::span<const std::size_t> counts) {
    std::size_t total = 0;
    for (auto c : counts) total += c;
    if (total == 0) throw std::invalid_argument("gini impurity of an empty node is undefined");
    double sum_sq = 0.0;
    const double t = static_cast<double>(total);
    for (auto c : counts) {
        const double p = static_cast<double>(c) / t;
        sum_sq += p * p;
    }
    return 1.0 - sum_sq;
}

struct SplitDecision {
    std::size_t feature = 0;
    double threshold = 0.0;
    /// Sample-weighted mean Gini of the two children.
    double impurity = 0.0;
};

namespace detail {

// Split quality as the exact fraction (sum_c l_c^2 / n_l + sum_c r_c^2 / n_r),
// i.e. num / den with num = Sl * n_r + Sr * n_l and den = n_l * n_r. Larger is
// purer. Kept as integers so equal-quality splits compare equal.
__extension__ typedef __int128 wide_int;

struct SplitScore {
    wide_int num = 0;
    wide_int den = 1;
};

inline bool better(const SplitScore& a, const SplitScore& b) { return a.num * b.den > b.num * a.den; }

inline std::size_t majority(std::span<const std::size_t> counts) {
    return static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
}

inline double midpoint(double lo, double hi) {
    const double mid = lo + (hi - lo) / 2.0;
    return (mid < hi) ? mid : lo;
}

inline std::optional<SplitDecision> best_split_on(const Matrix& X, std::span<const int> y, std::size_t n_classes,
                                                  std::span<const std::size_t> rows,
                                                  std::span<const std::size_t> features) {
    if (rows.size() < 2) return std::nullopt;
    std::vector<std::size_t> parent(n_classes, 0);
    for (auto r : rows) ++parent[static_cast<std::size_t>(y[r])];
    if (std::count_if(parent.begin(), parent.end(), [](std::size_t c) { return c > 0; }) < 2) return std::nullopt;

    std::vector<std::size_t> sorted_features(features.begin(), features.end());
    std::sort(sorted_features.begin(), sorted_features.end());

    std::optional<SplitDecision> best;
    SplitScore best_score;
    std::vector<std::pair<double, int>> col(rows.size());
    std::vector<std::size_t> left(n_classes), right(n_classes);
    const auto n = static_cast<wide_int>(rows.size());

    for (auto f : sorted_features) {
        for (std::size_t i = 0; i < rows.size(); ++i) col[i] = {X(rows[i], f), y[rows[i]]};
        std::sort(col.begin(), col.end());
        if (col.front().first == col.back().first) continue;

        std::fill(left.begin(), left.end(), 0);
        right = parent;
        wide_int sl = 0, sr = 0;
        for (auto c : parent) sr += static_cast<wide_int>(c) * static_cast<wide_int>(c);

        for (std::size_t i = 0; i + 1 < col.size(); ++i) {
            const auto c = static_cast<std::size_t>(col[i].second);
            sl += 2 * static_cast<wide_int>(left[c]) + 1;
            sr -= 2 * static_cast<wide_int>(right[c]) - 1;
            ++left[c];
            --right[c];
            if (col[i].first == col[i + 1].first) continue;
            const auto nl = static_cast<wide_int>(i + 1);
            const auto nr = n - nl;
            const SplitScore score{sl * nr + sr * nl, nl * nr};
            if (!best || better(score, best_score)) {
                best_score = score;
                const double nd = static_cast<double>(rows.size());
                const double purity = (static_cast<double>(sl) / static_cast<double>(nl) +
                                       static_cast<double>(sr) / static_cast<double>(nr)) / nd;
                best = SplitDecision{f, midpoint(col[i].first, col[i + 1].first), 1.0 - purity};
            }
        }
    }
    return best;
}

}  // namespace detail

/// Exhaustive CART split search over the listed features. Candidate
/// thresholds are midpoints between consecutive distinct values; the split
/// with the lowest weighted child Gini wins, ties going to the lower feature
/// index and then the lower threshold. Returns nullopt for pure nodes and
/// when no feature has two distinct values.
inline std::optional<SplitDecision> best_split(const Matrix& X, std::span<const int> y, std::size_t n_classes,
                                               std::span<const std::size_t> features) {
    if (y.size() != X.rows()) throw std::invalid_argument("label count does not match row count");
    std::vector<std::size_t> rows(X.rows());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    return detail::best_split_on(X, y, n_classes, rows, features);
}

struct TreeConfig {
    std::optional<std::size_t> max_depth;
    std::size_t min_samples_split = 2;
    /// Features drawn per split; nullopt means all of them.
    std::optional<std::size_t> mtry;
    std::uint64_t rng_seed = 0;

    bool operator==(const TreeConfig&) const = default;
};

inline void validate(const TreeConfig& cfg, std::size_t n_features) {
    if (cfg.min_samples_split < 2) throw std::invalid_argument("min_samples_split must be >= 2");
    if (cfg.mtry && (*cfg.mtry < 1 || *cfg.mtry > n_features))
        throw std::invalid_argument("mtry must lie in [1, " + std::to_string(n_features) + "]");
}

/// One node of a trained tree. `feature < 0` marks a leaf. Internal nodes
/// send a row left iff row[feature] <= threshold.
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    /// Training class counts reaching this node (bootstrap multiplicity included).
    std::vector<std::size_t> counts;
    int prediction = 0;

    bool is_leaf() const noexcept { return feature < 0; }
    std::size_t samples() const noexcept { return std::accumulate(counts.begin(), counts.end(), std::size_t{0}); }
    bool operator==(const TreeNode&) const = default;
};

/// Nodes in preorder; node 0 is the root.
struct TreeModel {
    std::size_t n_features = 0;
    std::size_t n_classes = 0;
    std::vector<TreeNode> nodes;
    TreeConfig config;
    ScalerParams scaler;

    std::size_t depth() const {
        std::vector<std::size_t> d(nodes.size(), 0);
        std::size_t best = 0;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            best = std::max(best, d[i]);
            if (!nodes[i].is_leaf()) {
                d[static_cast<std::size_t>(nodes[i].left)] = d[i] + 1;
                d[static_cast<std::size_t>(nodes[i].right)] = d[i] + 1;
            }
        }
        return best;
    }
    bool operator==(const TreeModel&) const = default;
};

namespace detail {

class TreeBuilder {
public:
    TreeBuilder(const Matrix& X, std::span<const int> y, std::size_t n_classes, const TreeConfig& cfg)
        : X_(X), y_(y), n_classes_(n_classes), cfg_(cfg), rng_(cfg.rng_seed) {
        all_features_.resize(X.cols());
        std::iota(all_features_.begin(), all_features_.end(), std::size_t{0});
    }

    TreeModel build(std::vector<std::size_t> rows) {
        TreeModel m{X_.cols(), n_classes_, {}, cfg_, {}};
        grow(m, std::move(rows), 0);
        return m;
    }

private:
    std::int32_t grow(TreeModel& m, std::vector<std::size_t> rows, std::size_t depth) {
        const auto id = static_cast<std::int32_t>(m.nodes.size());
        m.nodes.emplace_back();
        {
            auto& node = m.nodes.back();
            node.counts.assign(n_classes_, 0);
            for (auto r : rows) ++node.counts[static_cast<std::size_t>(y_[r])];
            node.prediction = static_cast<int>(majority(node.counts));
        }
        const auto& counts = m.nodes[static_cast<std::size_t>(id)].counts;
        const bool pure = std::count_if(counts.begin(), counts.end(), [](std::size_t c) { return c > 0; }) < 2;
        if (pure || rows.size() < cfg_.min_samples_split || (cfg_.max_depth && depth >= *cfg_.max_depth)) return id;

        const auto split = best_split_on(X_, y_, n_classes_, rows, draw_features());
        if (!split) return id;

        std::vector<std::size_t> left_rows, right_rows;
        for (auto r : rows) (X_(r, split->feature) <= split->threshold ? left_rows : right_rows).push_back(r);
        rows.clear();
        rows.shrink_to_fit();

        const auto l = grow(m, std::move(left_rows), depth + 1);
        const auto r = grow(m, std::move(right_rows), depth + 1);
        auto& node = m.nodes[static_cast<std::size_t>(id)];
        node.feature = static_cast<int>(split->feature);
        node.threshold = split->threshold;
        node.left = l;
        node.right = r;
        return id;
    }

    // Partial Fisher-Yates; consumes no randomness when every feature is used.
    std::vector<std::size_t> draw_features() {
        const std::size_t d = all_features_.size();
        const std::size_t k = cfg_.mtry.value_or(d);
        if (k >= d) return all_features_;
        std::vector<std::size_t> pool = all_features_;
        for (std::size_t i = 0; i < k; ++i) {
            const auto j = i + static_cast<std::size_t>(rng_.below(d - i));
            std::swap(pool[i], pool[j]);
        }
        pool.resize(k);
        return pool;
    }

    const Matrix& X_;
    std::span<const int> y_;
    std::size_t n_classes_;
    TreeConfig cfg_;
    Rng rng_;
    std::vector<std::size_t> all_features_;
};

}  // namespace detail

/// Grow a tree on the given training rows (duplicates allowed, as produced by
/// bootstrap resampling). Leaves form when a node is pure, reaches max_depth,
/// has fewer than min_samples_split rows, or admits no split.
inline TreeModel train_tree(const Matrix& X, std::span<const int> y, std::size_t n_classes, const TreeConfig& cfg,
                            std::vector<std::size_t> rows) {
    if (X.empty()) throw std::invalid_argument("cannot train a tree on an empty matrix");
    if (y.size() != X.rows()) throw std::invalid_argument("label count does not match row count");
    if (rows.empty()) throw std::invalid_argument("cannot train a tree on zero rows");
    validate(cfg, X.cols());
    std::vector<std::size_t> counts;
    count_classes_in(y, n_classes, counts);
    return detail::TreeBuilder(X, y, n_classes, cfg).build(std::move(rows));
}

inline TreeModel train_tree(const Matrix& X, std::span<const int> y, std::size_t n_classes,
                            const TreeConfig& cfg = {}) {
    std::vector<std::size_t> rows(X.rows());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    return train_tree(X, y, n_classes, cfg, std::move(rows));
}

inline const TreeNode& leaf_for(const TreeModel& m, std::span<const double> x) {
    std::size_t i = 0;
    while (!m.nodes[i].is_leaf()) {
        const auto& n = m.nodes[i];
        i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
    }
    return m.nodes[i];
}

inline Labels predict_tree(const TreeModel& m, const Matrix& X) {
    if (X.cols() != m.n_features)
        throw std::invalid_argument("tree expects " + std::to_string(m.n_features) + " features, input has " +
                                    std::to_string(X.cols()));
    Labels out(X.rows());
    for (std::size_t i = 0; i < X.rows(); ++i) out[i] = leaf_for(m, X.row(i)).prediction;
    return out;
}

}  // namespace honeyml

#endif  // HONEYML_TREE_HPP
