#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "honeyml/eval.hpp"
#include "honeyml/importance.hpp"

using namespace honeyml;

namespace {

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

bool is_permutation_of_range(const std::vector<std::size_t>& order) {
    std::vector<std::size_t> s = order;
    std::sort(s.begin(), s.end());
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s[i] != i) return false;
    return true;
}

}  // namespace

TEST(Mdi, SingleInformativeFeatureTakesAllCredit) {
    // Only Ba varies, so every split must use it.
    const std::size_t n = 40;
    Matrix X(n, kNumFeatures, 1.0);
    Labels y(n);
    for (std::size_t i = 0; i < n; ++i) {
        X(i, index(Mineral::Ba)) = static_cast<double>(i);
        y[i] = static_cast<int>((i / 7) % 3);
    }
    ForestConfig cfg;
    cfg.n_trees = 10;
    cfg.mtry = kNumFeatures;
    const auto imp = mdi_importance(train_forest(X, y, 3, cfg));
    EXPECT_FALSE(imp.degenerate);
    EXPECT_DOUBLE_EQ(imp.scores[index(Mineral::Ba)], 1.0);
    EXPECT_EQ(imp.order.front(), index(Mineral::Ba));
    for (std::size_t f = 0; f < kNumFeatures; ++f)
        if (f != index(Mineral::Ba)) {
            EXPECT_EQ(imp.scores[f], 0.0);
        }
}

TEST(Mdi, PlantedFeatureRanksFirst) {
    for (auto m : {Mineral::Ba, Mineral::Zn, Mineral::Al}) {
        const auto ds = generate_synthetic(planted_preset(m), 21);
        ForestConfig cfg;
        cfg.seed = 3;
        const auto model = std::get<ForestModel>(train_on_dataset(cfg, ds));
        const auto imp = mdi_importance(model);
        EXPECT_EQ(imp.order.front(), index(m));
        EXPECT_NEAR(sum(imp.scores), 1.0, 1e-9);
        EXPECT_TRUE(is_permutation_of_range(imp.order));
    }
}

TEST(Mdi, DegenerateForest) {
    Matrix X(5, 3, 0.5);
    ForestConfig cfg;
    cfg.n_trees = 4;
    cfg.mtry = 3;
    const auto imp = mdi_importance(train_forest(X, Labels{0, 1, 0, 1, 1}, 2, cfg));
    EXPECT_TRUE(imp.degenerate);
    for (double s : imp.scores) EXPECT_EQ(s, 0.0);
    EXPECT_TRUE(is_permutation_of_range(imp.order));
}

TEST(Mdi, ConstantFeatureGetsZero) {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(0, 1);
    Matrix X(120, 5);
    Labels y(120);
    for (std::size_t i = 0; i < 120; ++i) {
        for (std::size_t f = 0; f < 5; ++f) X(i, f) = f == 2 ? 7.0 : u(gen);
        y[i] = static_cast<int>(gen() % 3);
    }
    ForestConfig cfg;
    cfg.n_trees = 20;
    const auto imp = mdi_importance(train_forest(X, y, 3, cfg));
    EXPECT_EQ(imp.scores[2], 0.0);
    for (double s : imp.scores) EXPECT_GE(s, 0.0);
    EXPECT_NEAR(sum(imp.scores), 1.0, 1e-9);
}

TEST(Mdi, RowOrderDoesNotMatterForFixedSamples) {
    // Same bootstrap multiset expressed through permuted row indices.
    std::mt19937_64 gen(4);
    std::uniform_real_distribution<double> u(0, 1);
    const std::size_t n = 90, d = 6;
    Matrix X(n, d);
    Labels y(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t f = 0; f < d; ++f) X(i, f) = u(gen);
        y[i] = static_cast<int>(X(i, 1) + X(i, 3) > 1.0) + static_cast<int>(gen() % 5 == 0);
    }
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), gen);
    std::vector<std::size_t> inverse(n);
    for (std::size_t i = 0; i < n; ++i) inverse[perm[i]] = i;
    const Matrix Xp = X.select_rows(perm);
    Labels yp(n);
    for (std::size_t i = 0; i < n; ++i) yp[i] = y[perm[i]];

    for (int t = 0; t < 10; ++t) {
        std::vector<std::size_t> boot(n);
        for (auto& b : boot) b = gen() % n;
        std::vector<std::size_t> boot_p(n);
        for (std::size_t i = 0; i < n; ++i) boot_p[i] = inverse[boot[i]];
        TreeConfig cfg;
        cfg.mtry = 2;
        cfg.rng_seed = 99 + static_cast<std::uint64_t>(t);
        const auto a = mdi_importance(train_tree(X, y, 3, cfg, boot));
        const auto b = mdi_importance(train_tree(Xp, yp, 3, cfg, boot_p));
        for (std::size_t f = 0; f < d; ++f) EXPECT_NEAR(a.scores[f], b.scores[f], 1e-12);
    }
}
