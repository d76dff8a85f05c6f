#ifndef HONEYML_IMPORTANCE_HPP
#define HONEYML_IMPORTANCE_HPP

#include <algorithm>
#include <numeric>
#include <vector>

#include "honeyml/forest.hpp"
#include "honeyml/tree.hpp"

namespace honeyml {

struct ImportanceVector {
    std::vector<double> scores;
    /// Feature indices by descending score; equal scores keep index order.
    std::vector<std::size_t> order;
    /// Set when no tree contains a split; all scores are then zero.
    bool degenerate = false;
};

namespace detail {

/// Unnormalised mean-decrease-in-impurity credits of one tree: at each split,
/// (parent Gini - weighted child Gini) scaled by the node's share of the
/// root sample count.
inline void accumulate_mdi(const TreeModel& t, std::vector<double>& credit) {
    const double root = static_cast<double>(t.nodes.front().samples());
    for (const auto& node : t.nodes) {
        if (node.is_leaf()) continue;
        const auto& l = t.nodes[static_cast<std::size_t>(node.left)];
        const auto& r = t.nodes[static_cast<std::size_t>(node.right)];
        const double n = static_cast<double>(node.samples());
        const double nl = static_cast<double>(l.samples());
        const double nr = static_cast<double>(r.samples());
        const double decrease = gini_impurity(node.counts) - (nl / n) * gini_impurity(l.counts) -
                                (nr / n) * gini_impurity(r.counts);
        credit[static_cast<std::size_t>(node.feature)] += std::max(0.0, decrease) * (n / root);
    }
}

inline ImportanceVector finish(std::vector<double> scores) {
    ImportanceVector v;
    const double total = std::accumulate(scores.begin(), scores.end(), 0.0);
    v.degenerate = !(total > 0.0);
    if (!v.degenerate)
        for (auto& s : scores) s /= total;
    else
        std::fill(scores.begin(), scores.end(), 0.0);
    v.order.resize(scores.size());
    std::iota(v.order.begin(), v.order.end(), std::size_t{0});
    std::stable_sort(v.order.begin(), v.order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    v.scores = std::move(scores);
    return v;
}

}  // namespace detail

/// Mean decrease in impurity, averaged over trees and normalised to sum 1.
inline ImportanceVector mdi_importance(const ForestModel& m) {
    std::vector<double> credit(m.n_features, 0.0);
    for (const auto& t : m.trees) detail::accumulate_mdi(t, credit);
    for (auto& c : credit) c /= static_cast<double>(m.trees.size());
    return detail::finish(std::move(credit));
}

inline ImportanceVector mdi_importance(const TreeModel& t) {
    std::vector<double> credit(t.n_features, 0.0);
    detail::accumulate_mdi(t, credit);
    return detail::finish(std::move(credit));
}

}  // namespace honeyml

#endif  // HONEYML_IMPORTANCE_HPP
