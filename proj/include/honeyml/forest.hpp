#ifndef HONEYML_FOREST_HPP
#define HONEYML_FOREST_HPP

// Random forest: bagged CART trees with per-split feature subsampling and
// plurality voting.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "honeyml/random.hpp"
#include "honeyml/tree.hpp"

namespace honeyml {

struct ForestConfig {
    std::size_t n_trees = 100;
    /// Features drawn per split; nullopt means floor(sqrt(n_features)).
    std::optional<std::size_t> mtry;
    bool bootstrap = true;
    std::optional<std::size_t> max_depth;
    std::size_t min_samples_split = 2;
    std::uint64_t seed = 0;

    std::size_t resolved_mtry(std::size_t n_features) const {
        if (mtry) return *mtry;
        return std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n_features)))));
    }
    bool operator==(const ForestConfig&) const = default;
};

struct ForestModel {
    std::size_t n_features = 0;
    std::size_t n_classes = 0;
    std::vector<TreeModel> trees;
    std::vector<std::uint64_t> tree_seeds;
    /// Class counts of the full training set; used to break vote ties.
    std::vector<std::size_t> class_counts;
    ForestConfig config;
    ScalerParams scaler;

    bool operator==(const ForestModel&) const = default;
};

/// Stream seed for tree t. The bootstrap draw uses this stream directly; the
/// tree's feature draws use splitmix64 of it.
constexpr std::uint64_t tree_seed(std::uint64_t master, std::size_t t) noexcept { return derive_seed(master, t); }

/// Trees are independent given their seeds, so `threads` changes only the
/// schedule, never the model.
inline ForestModel train_forest(const Matrix& X, std::span<const int> y, std::size_t n_classes,
                                const ForestConfig& cfg = {}, std::size_t threads = 1) {
    if (X.empty()) throw std::invalid_argument("cannot train a forest on an empty matrix");
    if (y.size() != X.rows()) throw std::invalid_argument("label count does not match row count");
    if (cfg.n_trees == 0) throw std::invalid_argument("n_trees must be >= 1");

    ForestModel m;
    m.n_features = X.cols();
    m.n_classes = n_classes;
    m.config = cfg;
    count_classes_in(y, n_classes, m.class_counts);
    m.trees.resize(cfg.n_trees);
    m.tree_seeds.resize(cfg.n_trees);

    TreeConfig tree_cfg;
    tree_cfg.max_depth = cfg.max_depth;
    tree_cfg.min_samples_split = cfg.min_samples_split;
    tree_cfg.mtry = cfg.resolved_mtry(X.cols());
    validate(tree_cfg, X.cols());

    const std::size_t n = X.rows();
    auto build_one = [&](std::size_t t) {
        const auto s = tree_seed(cfg.seed, t);
        m.tree_seeds[t] = s;
        std::vector<std::size_t> rows(n);
        if (cfg.bootstrap) {
            Rng rng(s);
            for (auto& r : rows) r = static_cast<std::size_t>(rng.below(n));
        } else {
            std::iota(rows.begin(), rows.end(), std::size_t{0});
        }
        TreeConfig c = tree_cfg;
        c.rng_seed = splitmix64(s);
        m.trees[t] = train_tree(X, y, n_classes, c, std::move(rows));
    };

    threads = std::clamp<std::size_t>(threads, 1, cfg.n_trees);
    if (threads == 1) {
        for (std::size_t t = 0; t < cfg.n_trees; ++t) build_one(t);
        return m;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < threads; ++w)
            pool.emplace_back([&] {
                for (std::size_t t = next++; t < cfg.n_trees; t = next++) {
                    try {
                        build_one(t);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                    }
                }
            });
    }
    if (failure) std::rethrow_exception(failure);
    return m;
}

/// Plurality vote; ties go to the class with more training samples, then to
/// the lower class code.
inline int resolve_vote(std::span<const std::size_t> votes, std::span<const std::size_t> class_counts) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < votes.size(); ++c) {
        if (votes[c] > votes[best] || (votes[c] == votes[best] && class_counts[c] > class_counts[best])) best = c;
    }
    return static_cast<int>(best);
}

inline Labels predict_forest(const ForestModel& m, const Matrix& X) {
    if (X.cols() != m.n_features)
        throw std::invalid_argument("forest expects " + std::to_string(m.n_features) + " features, input has " +
                                    std::to_string(X.cols()));
    Labels out(X.rows());
    std::vector<std::size_t> votes(m.n_classes);
    for (std::size_t i = 0; i < X.rows(); ++i) {
        std::fill(votes.begin(), votes.end(), 0);
        for (const auto& t : m.trees) ++votes[static_cast<std::size_t>(leaf_for(t, X.row(i)).prediction)];
        out[i] = resolve_vote(votes, m.class_counts);
    }
    return out;
}

}  // namespace honeyml

#endif  // HONEYML_FOREST_HPP
