#ifndef HONEYML_TESTS_ORACLES_HPP
#define HONEYML_TESTS_ORACLES_HPP

// Test-only reference implementations. These deliberately share no code with
// the library paths they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <set>
#include <vector>

#include "honeyml/core.hpp"

namespace oracle {

using Rows = std::vector<std::vector<double>>;

inline long double gini(const std::vector<int>& labels, std::size_t n_classes) {
    std::vector<long double> p(n_classes, 0.0L);
    for (int v : labels) p[static_cast<std::size_t>(v)] += 1.0L;
    long double s = 0.0L;
    for (auto& c : p) {
        c /= static_cast<long double>(labels.size());
        s += c * c;
    }
    return 1.0L - s;
}

/// Brute-force CART: tries every feature and every midpoint, recomputing
/// child impurities from scratch. Ties within 1e-12 keep the earlier
/// (feature, threshold) candidate. Zero-gain splits are accepted.
struct Node {
    int label = 0;
    int feature = -1;
    double threshold = 0.0;
    std::unique_ptr<Node> left, right;
};

inline std::unique_ptr<Node> grow(const Rows& X, const std::vector<int>& y, std::size_t n_classes) {
    auto node = std::make_unique<Node>();
    std::vector<std::size_t> counts(n_classes, 0);
    for (int v : y) ++counts[static_cast<std::size_t>(v)];
    std::size_t best_c = 0;
    for (std::size_t c = 1; c < n_classes; ++c)
        if (counts[c] > counts[best_c]) best_c = c;
    node->label = static_cast<int>(best_c);
    if (counts[best_c] == y.size() || y.size() < 2) return node;

    const std::size_t d = X.front().size();
    long double best = 10.0L;
    bool found = false;
    for (std::size_t f = 0; f < d; ++f) {
        std::set<double> distinct;
        for (const auto& r : X) distinct.insert(r[f]);
        std::vector<double> vals(distinct.begin(), distinct.end());
        for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
            const double thr = (vals[i] + vals[i + 1]) / 2.0;
            std::vector<int> l, r;
            for (std::size_t s = 0; s < X.size(); ++s) (X[s][f] <= thr ? l : r).push_back(y[s]);
            const long double n = static_cast<long double>(y.size());
            const long double imp = (static_cast<long double>(l.size()) / n) * gini(l, n_classes) +
                                    (static_cast<long double>(r.size()) / n) * gini(r, n_classes);
            if (!found || imp < best - 1e-12L) {
                best = imp;
                found = true;
                node->feature = static_cast<int>(f);
                node->threshold = thr;
            }
        }
    }
    if (!found) return node;
    Rows lx, rx;
    std::vector<int> ly, ry;
    for (std::size_t s = 0; s < X.size(); ++s) {
        if (X[s][static_cast<std::size_t>(node->feature)] <= node->threshold) {
            lx.push_back(X[s]);
            ly.push_back(y[s]);
        } else {
            rx.push_back(X[s]);
            ry.push_back(y[s]);
        }
    }
    node->left = grow(lx, ly, n_classes);
    node->right = grow(rx, ry, n_classes);
    return node;
}

inline int classify(const Node& n, const std::vector<double>& x) {
    if (n.feature < 0) return n.label;
    return classify(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? *n.left : *n.right, x);
}

/// Random small classification problem with heavy value ties.
struct SmallProblem {
    honeyml::Matrix X;
    Rows rows;
    std::vector<int> y;
    std::size_t n_classes = 2;
};

inline SmallProblem random_small_problem(std::mt19937_64& gen, std::size_t max_samples = 8, std::size_t max_features = 3) {
    SmallProblem p;
    const std::size_t n = 1 + gen() % max_samples;
    const std::size_t d = 1 + gen() % max_features;
    p.n_classes = 2 + gen() % 2;
    p.X = honeyml::Matrix(n, d);
    p.rows.assign(n, std::vector<double>(d));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t f = 0; f < d; ++f) {
            const double v = static_cast<double>(gen() % 4) * 0.5;
            p.X(i, f) = v;
            p.rows[i][f] = v;
        }
        p.y.push_back(static_cast<int>(gen() % p.n_classes));
    }
    return p;
}

/// Central finite-difference derivative of f at x along coordinate slot.
inline double central_difference(const std::function<double()>& f, double& slot, double h) {
    const double saved = slot;
    slot = saved + h;
    const double up = f();
    slot = saved - h;
    const double down = f();
    slot = saved;
    return (up - down) / (2.0 * h);
}

}  // namespace oracle

#endif  // HONEYML_TESTS_ORACLES_HPP
