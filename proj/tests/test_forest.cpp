#include <gtest/gtest.h>

#include <random>

#include "honeyml/dataset.hpp"
#include "honeyml/forest.hpp"
#include "oracles.hpp"

using namespace honeyml;

namespace {

struct Problem {
    Matrix X;
    Labels y;
};

Problem random_problem(std::mt19937_64& gen, std::size_t n, std::size_t d, std::size_t classes) {
    std::uniform_real_distribution<double> u(0, 1);
    Problem p{Matrix(n, d), Labels(n)};
    for (auto& v : p.X.data()) v = std::round(u(gen) * 20.0) / 20.0;
    for (std::size_t i = 0; i < n; ++i) p.y[i] = static_cast<int>((p.X(i, 0) > 0.5) + (gen() % 4 == 0)) % static_cast<int>(classes);
    return p;
}

}  // namespace

TEST(ForestConfig, DefaultMtryIsFloorSqrt) {
    EXPECT_EQ(ForestConfig{}.resolved_mtry(12), 3u);
    EXPECT_EQ(ForestConfig{}.resolved_mtry(1), 1u);
    EXPECT_EQ(ForestConfig{}.n_trees, 100u);
}

TEST(TrainForest, DegenerateForestEqualsTree) {
    std::mt19937_64 gen(4);
    for (int trial = 0; trial < 30; ++trial) {
        auto p = random_problem(gen, 20 + gen() % 60, 12, 3);
        ForestConfig cfg;
        cfg.n_trees = 1;
        cfg.bootstrap = false;
        cfg.mtry = 12;
        cfg.seed = gen();
        const auto forest = train_forest(p.X, p.y, 3, cfg);
        const auto tree = train_tree(p.X, p.y, 3, TreeConfig{});
        auto probe = random_problem(gen, 50, 12, 3);
        EXPECT_EQ(predict_forest(forest, probe.X), predict_tree(tree, probe.X));
        EXPECT_EQ(forest.trees[0].nodes, tree.nodes);
    }
}

TEST(TrainForest, IdenticalTreesVoteLikeOneTree) {
    std::mt19937_64 gen(5);
    auto p = random_problem(gen, 80, 4, 3);
    ForestConfig cfg;
    cfg.n_trees = 7;
    cfg.bootstrap = false;
    cfg.mtry = 4;
    const auto forest = train_forest(p.X, p.y, 3, cfg);
    for (const auto& t : forest.trees) EXPECT_EQ(t.nodes, forest.trees[0].nodes);
    auto probe = random_problem(gen, 40, 4, 3);
    EXPECT_EQ(predict_forest(forest, probe.X), predict_tree(forest.trees[0], probe.X));
}

TEST(TrainForest, ThreadCountDoesNotChangeModel) {
    const auto ds = generate_synthetic(planted_preset(), 3);
    const auto X = impute_missing(ds);
    const auto y = ds.labels();
    ForestConfig cfg;
    cfg.n_trees = 40;
    cfg.seed = 1234;
    const auto one = train_forest(X, y, 3, cfg, 1);
    const auto eight = train_forest(X, y, 3, cfg, 8);
    EXPECT_EQ(one, eight);
    EXPECT_EQ(one.trees.size(), 40u);
    for (std::size_t t = 0; t < 40; ++t) EXPECT_EQ(one.tree_seeds[t], tree_seed(1234, t));
    cfg.seed = 1235;
    EXPECT_NE(train_forest(X, y, 3, cfg, 1).trees, one.trees);
}

TEST(TrainForest, TreesDifferUnderBootstrap) {
    std::mt19937_64 gen(6);
    auto p = random_problem(gen, 100, 6, 2);
    ForestConfig cfg;
    cfg.n_trees = 5;
    const auto f = train_forest(p.X, p.y, 2, cfg);
    EXPECT_NE(f.trees[0].nodes, f.trees[1].nodes);
    EXPECT_EQ(f.class_counts.size(), 2u);
    EXPECT_EQ(f.class_counts[0] + f.class_counts[1], 100u);
}

TEST(TrainForest, Errors) {
    EXPECT_THROW(train_forest(Matrix{}, Labels{}, 2), std::invalid_argument);
    ForestConfig cfg;
    cfg.n_trees = 0;
    EXPECT_THROW(train_forest(Matrix(2, 2), Labels{0, 1}, 2, cfg), std::invalid_argument);
    cfg = {};
    cfg.mtry = 3;
    EXPECT_THROW(train_forest(Matrix(2, 2), Labels{0, 1}, 2, cfg), std::invalid_argument);
}

TEST(ResolveVote, Rules) {
    const std::vector<std::size_t> counts3 = {10, 10, 10};
    EXPECT_EQ(resolve_vote(std::vector<std::size_t>{2, 1, 0}, counts3), 0);
    EXPECT_EQ(resolve_vote(std::vector<std::size_t>{1, 1, 0}, std::vector<std::size_t>{100, 50, 0}), 0);
    EXPECT_EQ(resolve_vote(std::vector<std::size_t>{1, 1, 0}, std::vector<std::size_t>{50, 100, 0}), 1);
    EXPECT_EQ(resolve_vote(std::vector<std::size_t>{0, 3, 3}, std::vector<std::size_t>{5, 7, 7}), 1);
    EXPECT_EQ(resolve_vote(std::vector<std::size_t>{0, 3, 3}, std::vector<std::size_t>{5, 7, 9}), 2);
}

TEST(PredictForest, ShapeChecked) {
    std::mt19937_64 gen(7);
    auto p = random_problem(gen, 30, 3, 2);
    ForestConfig cfg;
    cfg.n_trees = 3;
    const auto f = train_forest(p.X, p.y, 2, cfg);
    EXPECT_THROW(predict_forest(f, Matrix(1, 4)), std::invalid_argument);
}

TEST(TrainForest, MonotoneTransformInvariance) {
    std::mt19937_64 gen(13);
    for (int trial = 0; trial < 20; ++trial) {
        auto p = random_problem(gen, 60, 5, 3);
        Matrix T = p.X;
        for (auto& v : T.data()) v = std::exp(3.0 * v) + 2.0;
        ForestConfig cfg;
        cfg.n_trees = 15;
        cfg.seed = gen();
        EXPECT_EQ(predict_forest(train_forest(p.X, p.y, 3, cfg), p.X), predict_forest(train_forest(T, p.y, 3, cfg), T));
    }
}
