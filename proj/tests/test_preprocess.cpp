#include <gtest/gtest.h>

#include <random>

#include "honeyml/preprocess.hpp"

using namespace honeyml;

namespace {

Matrix column(std::initializer_list<double> v) {
    Matrix m(v.size(), 1);
    std::size_t i = 0;
    for (double x : v) m(i++, 0) = x;
    return m;
}

Matrix random_matrix(std::mt19937_64& gen, std::size_t rows, std::size_t cols) {
    std::uniform_real_distribution<double> d(-50.0, 50.0);
    Matrix m(rows, cols);
    for (auto& x : m.data()) x = d(gen);
    return m;
}

}  // namespace

TEST(Impute, NdBecomesZero) {
    Sample s;
    for (std::size_t f = 0; f < kNumFeatures; ++f) s.values[f] = 1.0 + static_cast<double>(f);
    s.values[index(Mineral::Ba)].reset();
    Sample empty;
    const auto X = impute_missing(Dataset({s, empty}));
    EXPECT_EQ(X(0, index(Mineral::Ba)), 0.0);
    EXPECT_EQ(X(0, index(Mineral::Al)), 1.0);
    for (std::size_t f = 0; f < kNumFeatures; ++f) EXPECT_EQ(X(1, f), 0.0);
}

TEST(Impute, IdentityOnCompleteRows) {
    const auto ds = generate_synthetic(separable_preset(), 3);
    const auto X = impute_missing(ds);
    for (std::size_t i = 0; i < ds.size(); ++i)
        for (std::size_t f = 0; f < kNumFeatures; ++f) EXPECT_EQ(X(i, f), *ds[i].values[f]);
}

TEST(FitScaler, Extrema) {
    auto p = fit_scaler(column({2, 4, 6}));
    EXPECT_EQ(p.min[0], 2);
    EXPECT_EQ(p.max[0], 6);
    p = fit_scaler(column({3, 3, 3}));
    EXPECT_EQ(p.min[0], 3);
    EXPECT_EQ(p.max[0], 3);
    Matrix one(1, 3);
    one(0, 0) = 1;
    one(0, 1) = -2;
    one(0, 2) = 7;
    p = fit_scaler(one);
    EXPECT_EQ(p.min, p.max);
    EXPECT_EQ(p.min, (std::vector<double>{1, -2, 7}));
    EXPECT_THROW(fit_scaler(Matrix{}), std::invalid_argument);
}

TEST(ApplyScaler, Examples) {
    const auto X = column({2, 4, 6});
    const auto Y = apply_scaler(fit_scaler(X), X);
    EXPECT_EQ(Y(0, 0), 0.0);
    EXPECT_EQ(Y(1, 0), 0.5);
    EXPECT_EQ(Y(2, 0), 1.0);

    const auto C = column({3, 3, 3});
    const auto Z = apply_scaler(fit_scaler(C), C);
    for (double v : Z.data()) EXPECT_EQ(v, 0.0);

    const ScalerParams p{{2.0}, {6.0}};
    EXPECT_DOUBLE_EQ(apply_scaler(p, column({8}))(0, 0), 1.5);
    EXPECT_THROW(apply_scaler(p, Matrix(1, 2)), std::invalid_argument);
}

TEST(ApplyScaler, FittedColumnsInUnitIntervalProperty) {
    std::mt19937_64 gen(1);
    for (int trial = 0; trial < 100; ++trial) {
        auto X = random_matrix(gen, 1 + gen() % 30, 1 + gen() % 6);
        if (gen() % 3 == 0)
            for (std::size_t r = 0; r < X.rows(); ++r) X(r, 0) = 4.25;
        const auto p = fit_scaler(X);
        const auto Y = apply_scaler(p, X);
        for (std::size_t c = 0; c < X.cols(); ++c)
            for (std::size_t r = 0; r < X.rows(); ++r) {
                if (p.max[c] == p.min[c]) {
                    EXPECT_EQ(Y(r, c), 0.0);
                } else {
                    EXPECT_GE(Y(r, c), 0.0);
                    EXPECT_LE(Y(r, c), 1.0);
                }
            }
    }
}

TEST(ApplyScaler, AffineProperty) {
    // Scaling alpha*X + beta (alpha > 0) with its own fit gives the same
    // output as scaling X with its own fit.
    std::mt19937_64 gen(2);
    std::uniform_real_distribution<double> ab(0.1, 10.0);
    for (int trial = 0; trial < 50; ++trial) {
        const auto X = random_matrix(gen, 2 + gen() % 20, 4);
        const double alpha = ab(gen), beta = ab(gen) - 5.0;
        Matrix Z = X;
        for (auto& v : Z.data()) v = alpha * v + beta;
        const auto a = apply_scaler(fit_scaler(X), X);
        const auto b = apply_scaler(fit_scaler(Z), Z);
        for (std::size_t i = 0; i < a.data().size(); ++i) EXPECT_NEAR(a.data()[i], b.data()[i], 1e-9);

        // And apply(p, X) is affine in X for a fixed p.
        const auto p = fit_scaler(X);
        const auto pa = apply_scaler(p, Z);
        for (std::size_t r = 0; r < X.rows(); ++r)
            for (std::size_t c = 0; c < X.cols(); ++c) {
                const double range = p.max[c] - p.min[c];
                EXPECT_NEAR(pa(r, c), alpha * a(r, c) + (alpha * p.min[c] + beta - p.min[c]) / range, 1e-9);
            }
    }
}

TEST(Impute, PrecedesScaling) {
    Sample a, b;
    a.values.fill(10.0);
    b.values.fill(20.0);
    b.values[index(Mineral::K)].reset();
    const auto X = impute_missing(Dataset({a, b}));
    const auto p = fit_scaler(X);
    EXPECT_EQ(p.min[index(Mineral::K)], 0.0);
    EXPECT_EQ(apply_scaler(p, X)(1, index(Mineral::K)), 0.0);
}
