#ifndef HONEYML_LOGISTIC_HPP
#define HONEYML_LOGISTIC_HPP

// Multinomial (softmax) logistic regression trained by full-batch gradient
// descent from a zero start.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "honeyml/core.hpp"
#include "honeyml/preprocess.hpp"

namespace honeyml {

struct LRConfig {
    double learning_rate = 0.1;
    std::size_t max_iters = 5000;
    /// Stop once the gradient infinity-norm drops below this.
    double tolerance = 1e-6;
    double l2_lambda = 1e-4;

    bool operator==(const LRConfig&) const = default;
};

inline void validate(const LRConfig& cfg) {
    if (!(cfg.learning_rate > 0.0) || !std::isfinite(cfg.learning_rate))
        throw std::invalid_argument("learning_rate must be positive");
    if (cfg.max_iters == 0) throw std::invalid_argument("max_iters must be positive");
    if (!(cfg.tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
    if (!(cfg.l2_lambda >= 0.0) || !std::isfinite(cfg.l2_lambda))
        throw std::invalid_argument("l2_lambda must be >= 0");
}

struct LRModel {
    Matrix weights;  ///< classes x features
    std::vector<double> bias;
    LRConfig config;
    ScalerParams scaler;
    std::size_t iterations = 0;

    std::size_t n_classes() const noexcept { return weights.rows(); }
    std::size_t n_features() const noexcept { return weights.cols(); }
    bool operator==(const LRModel&) const = default;
};

struct LossGradient {
    double loss = 0.0;
    Matrix grad_weights;
    std::vector<double> grad_bias;
};

namespace detail {

/// In-place softmax of one row of logits, max-shifted.
inline void softmax(std::span<double> z) {
    const double m = *std::max_element(z.begin(), z.end());
    double sum = 0.0;
    for (auto& v : z) {
        v = std::exp(v - m);
        sum += v;
    }
    for (auto& v : z) v /= sum;
}

inline void check_lr_shapes(const Matrix& W, std::span<const double> b, const Matrix& X) {
    if (W.rows() != b.size())
        throw std::invalid_argument("weight rows (" + std::to_string(W.rows()) + ") and bias length (" +
                                    std::to_string(b.size()) + ") differ");
    if (W.cols() != X.cols())
        throw std::invalid_argument("weights expect " + std::to_string(W.cols()) + " features, input has " +
                                    std::to_string(X.cols()));
}

inline Matrix logits(const Matrix& W, std::span<const double> b, const Matrix& X) {
    Matrix Z(X.rows(), W.rows());
    for (std::size_t i = 0; i < X.rows(); ++i)
        for (std::size_t c = 0; c < W.rows(); ++c) {
            double s = b[c];
            for (std::size_t f = 0; f < X.cols(); ++f) s += W(c, f) * X(i, f);
            Z(i, c) = s;
        }
    return Z;
}

}  // namespace detail

/// Mean softmax cross-entropy plus (l2_lambda / 2) * ||W||^2 and its exact
/// gradient. The bias is not penalised.
inline LossGradient lr_loss_gradient(const Matrix& W, std::span<const double> b, const Matrix& X,
                                     std::span<const int> y, double l2_lambda) {
    detail::check_lr_shapes(W, b, X);
    if (y.size() != X.rows())
        throw std::invalid_argument("label count " + std::to_string(y.size()) + " != row count " +
                                    std::to_string(X.rows()));
    if (X.rows() == 0) throw std::invalid_argument("loss of an empty batch is undefined");
    const std::size_t C = W.rows();
    const std::size_t d = W.cols();
    const double inv_n = 1.0 / static_cast<double>(X.rows());

    LossGradient out{0.0, Matrix(C, d), std::vector<double>(C, 0.0)};
    Matrix P = detail::logits(W, b, X);
    double nll = 0.0;
    for (std::size_t i = 0; i < X.rows(); ++i) {
        if (y[i] < 0 || static_cast<std::size_t>(y[i]) >= C)
            throw std::invalid_argument("label " + std::to_string(y[i]) + " outside the model's classes");
        auto z = P.row(i);
        const double m = *std::max_element(z.begin(), z.end());
        double lse = 0.0;
        for (double v : z) lse += std::exp(v - m);
        nll += m + std::log(lse) - z[static_cast<std::size_t>(y[i])];
        detail::softmax(z);
        for (std::size_t c = 0; c < C; ++c) {
            const double r = z[c] - (static_cast<std::size_t>(y[i]) == c ? 1.0 : 0.0);
            out.grad_bias[c] += r;
            for (std::size_t f = 0; f < d; ++f) out.grad_weights(c, f) += r * X(i, f);
        }
    }
    double sq = 0.0;
    for (std::size_t c = 0; c < C; ++c) {
        out.grad_bias[c] *= inv_n;
        for (std::size_t f = 0; f < d; ++f) {
            out.grad_weights(c, f) = out.grad_weights(c, f) * inv_n + l2_lambda * W(c, f);
            sq += W(c, f) * W(c, f);
        }
    }
    out.loss = nll * inv_n + 0.5 * l2_lambda * sq;
    return out;
}

inline LRModel train_logistic(const Matrix& X, std::span<const int> y, std::size_t n_classes,
                              const LRConfig& cfg = {}) {
    validate(cfg);
    if (y.size() != X.rows()) throw std::invalid_argument("label count does not match row count");
    std::vector<std::size_t> counts;
    if (count_classes_in(y, n_classes, counts) < 2)
        throw std::invalid_argument("logistic regression needs at least two classes in the training labels");

    LRModel m{Matrix(n_classes, X.cols()), std::vector<double>(n_classes, 0.0), cfg, {}, 0};
    for (std::size_t it = 0; it < cfg.max_iters; ++it) {
        const auto g = lr_loss_gradient(m.weights, m.bias, X, y, cfg.l2_lambda);
        double norm = 0.0;
        for (double v : g.grad_weights.data()) norm = std::max(norm, std::abs(v));
        for (double v : g.grad_bias) norm = std::max(norm, std::abs(v));
        if (norm < cfg.tolerance) break;
        for (std::size_t k = 0; k < m.weights.data().size(); ++k)
            m.weights.data()[k] -= cfg.learning_rate * g.grad_weights.data()[k];
        for (std::size_t c = 0; c < n_classes; ++c) m.bias[c] -= cfg.learning_rate * g.grad_bias[c];
        m.iterations = it + 1;
    }
    return m;
}

struct LRPrediction {
    Labels labels;
    Matrix probabilities;  ///< rows x classes
};

/// Softmax probabilities and argmax labels; ties go to the lowest class code.
inline LRPrediction predict_logistic(const LRModel& m, const Matrix& X) {
    detail::check_lr_shapes(m.weights, m.bias, X);
    LRPrediction out{Labels(X.rows()), detail::logits(m.weights, m.bias, X)};
    for (std::size_t i = 0; i < X.rows(); ++i) {
        auto p = out.probabilities.row(i);
        detail::softmax(p);
        out.labels[i] = static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
    }
    return out;
}

}  // namespace honeyml

#endif  // HONEYML_LOGISTIC_HPP
