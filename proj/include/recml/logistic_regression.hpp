#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "recml/classify.hpp"
#include "recml/matrix.hpp"

namespace recml {

/// 1 / (1 + e^-r), branch on sign so neither tail overflows.
inline double sigmoid(double r) {
    if (r >= 0.0) return 1.0 / (1.0 + std::exp(-r));
    const double e = std::exp(r);
    return e / (1.0 + e);
}

struct LrHyperparams {
    double learning_rate = 0.1;
    int max_iterations = 1000;
    double tolerance = 1e-6;
    bool operator==(const LrHyperparams&) const = default;
};

/// One-vs-rest multinomial logistic model: one weight row and bias per class.
struct LrModel {
    Matrix weights;  // c x d
    std::vector<double> biases;
    LrHyperparams hp;
    int n_classes = 0;
    int n_features = 0;

    bool operator==(const LrModel&) const = default;
};

/// Mean log-loss of one binary regressor. softplus(z) - y*z, evaluated
/// stably for large |z|.
inline double binary_log_loss(const Matrix& x, std::span<const int> y01,
                              std::span<const double> w, double b) {
    double loss = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        double z = b;
        for (std::size_t j = 0; j < x.cols(); ++j) z += w[j] * x(i, j);
        const double softplus = std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
        loss += softplus - (y01[i] ? z : 0.0);
    }
    return loss / static_cast<double>(x.rows());
}

/// Gradient of the mean log-loss: (1/n) X^T (sigmoid(z) - y).
inline void binary_log_loss_gradient(const Matrix& x, std::span<const int> y01,
                                     std::span<const double> w, double b,
                                     std::span<double> grad_w, double& grad_b) {
    std::fill(grad_w.begin(), grad_w.end(), 0.0);
    grad_b = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        double z = b;
        for (std::size_t j = 0; j < x.cols(); ++j) z += w[j] * x(i, j);
        const double err = sigmoid(z) - (y01[i] ? 1.0 : 0.0);
        for (std::size_t j = 0; j < x.cols(); ++j) grad_w[j] += err * x(i, j);
        grad_b += err;
    }
    const double inv_n = 1.0 / static_cast<double>(x.rows());
    for (double& g : grad_w) g *= inv_n;
    grad_b *= inv_n;
}

/// Full-batch gradient descent on log-loss, one binary regressor per class,
/// zero-initialized. Stops when the loss decrease falls below the tolerance
/// or the iteration cap is reached. `loss_history`, when given, receives the
/// per-iteration loss of each class regressor.
inline LrModel train_lr(const Matrix& x, const std::vector<int>& y, LrHyperparams hp = {},
                        std::vector<std::vector<double>>* loss_history = nullptr) {
    if (x.rows() != y.size()) throw DimensionMismatch("feature/label row counts differ");
    if (hp.learning_rate <= 0.0 || hp.max_iterations < 1 || hp.tolerance < 0.0)
        throw BadConfig("bad logistic regression hyperparameters");
    const int k = detail::infer_n_classes(y);
    const std::size_t d = x.cols();

    LrModel model;
    model.hp = hp;
    model.n_classes = k;
    model.n_features = static_cast<int>(d);
    model.weights = Matrix(static_cast<std::size_t>(k), d);
    model.biases.assign(static_cast<std::size_t>(k), 0.0);
    if (loss_history) loss_history->assign(static_cast<std::size_t>(k), {});

    std::vector<int> y01(y.size());
    std::vector<double> grad_w(d);
    for (int c = 0; c < k; ++c) {
        for (std::size_t i = 0; i < y.size(); ++i) y01[i] = y[i] == c ? 1 : 0;
        auto w = model.weights.row(static_cast<std::size_t>(c));
        double& b = model.biases[static_cast<std::size_t>(c)];

        double prev_loss = binary_log_loss(x, y01, w, b);
        if (loss_history) (*loss_history)[static_cast<std::size_t>(c)].push_back(prev_loss);
        for (int iter = 0; iter < hp.max_iterations; ++iter) {
            double grad_b = 0.0;
            binary_log_loss_gradient(x, y01, w, b, grad_w, grad_b);
            for (std::size_t j = 0; j < d; ++j) w[j] -= hp.learning_rate * grad_w[j];
            b -= hp.learning_rate * grad_b;

            const double loss = binary_log_loss(x, y01, w, b);
            if (!std::isfinite(loss))
                throw NonFiniteLoss("log-loss diverged; lower the learning rate");
            if (loss_history) (*loss_history)[static_cast<std::size_t>(c)].push_back(loss);
            if (prev_loss - loss < hp.tolerance) break;
            prev_loss = loss;
        }
    }
    return model;
}

/// Per-class OVR sigmoid scores normalized to sum 1.
inline Matrix predict_proba_lr(const LrModel& model, const Matrix& x) {
    detail::check_feature_count(static_cast<std::size_t>(model.n_features), x.cols());
    const auto k = static_cast<std::size_t>(model.n_classes);
    Matrix proba(x.rows(), k);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        double total = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            double z = model.biases[c];
            for (std::size_t j = 0; j < x.cols(); ++j) z += model.weights(c, j) * x(i, j);
            proba(i, c) = sigmoid(z);
            total += proba(i, c);
        }
        for (std::size_t c = 0; c < k; ++c) proba(i, c) /= total;
    }
    return proba;
}

inline std::vector<int> predict_lr(const LrModel& model, const Matrix& x) {
    const Matrix proba = predict_proba_lr(model, x);
    std::vector<int> labels(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) labels[i] = detail::argmax(proba.row(i));
    return labels;
}

}  // namespace recml
