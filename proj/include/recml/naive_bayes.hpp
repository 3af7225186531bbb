#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "recml/classify.hpp"
#include "recml/matrix.hpp"

namespace recml {

/// Gaussian naive Bayes: class priors plus per-class per-feature Gaussian
/// moments. Variances carry an additive smoothing floor so no density ever
/// divides by zero.
struct GnbModel {
    std::vector<double> priors;  // length c, sums to 1
    Matrix means;                // c x d
    Matrix variances;            // c x d, all >= variance_floor > 0
    double variance_floor = 0.0;
    int n_classes = 0;
    int n_features = 0;

    bool operator==(const GnbModel&) const = default;
};

inline GnbModel train_gnb(const Matrix& x, const std::vector<int>& y) {
    if (x.rows() != y.size()) throw DimensionMismatch("feature/label row counts differ");
    const int k = detail::infer_n_classes(y);
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();

    GnbModel model;
    model.n_classes = k;
    model.n_features = static_cast<int>(d);
    model.means = Matrix(static_cast<std::size_t>(k), d);
    model.variances = Matrix(static_cast<std::size_t>(k), d);

    const std::vector<int> counts = detail::class_counts(y, k);
    model.priors.resize(static_cast<std::size_t>(k));
    for (int c = 0; c < k; ++c)
        model.priors[c] = static_cast<double>(counts[c]) / static_cast<double>(n);

    for (std::size_t i = 0; i < n; ++i) {
        const auto c = static_cast<std::size_t>(y[i]);
        for (std::size_t j = 0; j < d; ++j) model.means(c, j) += x(i, j);
    }
    for (int c = 0; c < k; ++c)
        for (std::size_t j = 0; j < d; ++j)
            model.means(static_cast<std::size_t>(c), j) /= counts[c];

    // Population variance (divisor n_c) per class and feature.
    for (std::size_t i = 0; i < n; ++i) {
        const auto c = static_cast<std::size_t>(y[i]);
        for (std::size_t j = 0; j < d; ++j) {
            const double dev = x(i, j) - model.means(c, j);
            model.variances(c, j) += dev * dev;
        }
    }
    for (int c = 0; c < k; ++c)
        for (std::size_t j = 0; j < d; ++j)
            model.variances(static_cast<std::size_t>(c), j) /= counts[c];

    // Smoothing floor: 1e-9 times the largest overall feature variance.
    double max_feature_variance = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += x(i, j);
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double dev = x(i, j) - mean;
            var += dev * dev;
        }
        max_feature_variance = std::max(max_feature_variance, var / static_cast<double>(n));
    }
    model.variance_floor = 1e-9 * max_feature_variance;
    if (model.variance_floor <= 0.0) model.variance_floor = 1e-9;
    for (int c = 0; c < k; ++c)
        for (std::size_t j = 0; j < d; ++j)
            model.variances(static_cast<std::size_t>(c), j) += model.variance_floor;

    return model;
}

/// Posterior P(class | row) computed in log space and normalized, so
/// queries far from every class mean stay finite.
inline Matrix predict_proba_gnb(const GnbModel& model, const Matrix& x) {
    detail::check_feature_count(static_cast<std::size_t>(model.n_features), x.cols());
    const auto k = static_cast<std::size_t>(model.n_classes);
    Matrix proba(x.rows(), k);
    std::vector<double> log_post(k);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        for (std::size_t c = 0; c < k; ++c) {
            double lp = std::log(model.priors[c]);
            for (std::size_t j = 0; j < x.cols(); ++j) {
                const double var = model.variances(c, j);
                const double dev = x(i, j) - model.means(c, j);
                lp += -0.5 * std::log(2.0 * std::numbers::pi * var) -
                      dev * dev / (2.0 * var);
            }
            log_post[c] = lp;
        }
        const double peak = *std::max_element(log_post.begin(), log_post.end());
        double total = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            proba(i, c) = std::exp(log_post[c] - peak);
            total += proba(i, c);
        }
        for (std::size_t c = 0; c < k; ++c) proba(i, c) /= total;
    }
    return proba;
}

inline std::vector<int> predict_gnb(const GnbModel& model, const Matrix& x) {
    const Matrix proba = predict_proba_gnb(model, x);
    std::vector<int> labels(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) labels[i] = detail::argmax(proba.row(i));
    return labels;
}

}  // namespace recml
