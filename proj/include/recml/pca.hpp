#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "recml/matrix.hpp"

namespace recml {

namespace detail {

/// Cyclic Jacobi eigendecomposition of a symmetric matrix. Returns the
/// eigenvalues; `vectors` receives the eigenvectors as columns. Iterates
/// sweeps until the off-diagonal mass is negligible.
inline std::vector<double> jacobi_eigh(Matrix a, Matrix& vectors) {
    const std::size_t d = a.rows();
    vectors = Matrix(d, d);
    for (std::size_t i = 0; i < d; ++i) vectors(i, i) = 1.0;
    if (d < 2) return d == 1 ? std::vector<double>{a(0, 0)} : std::vector<double>{};

    double frob = 0.0;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) frob += a(i, j) * a(i, j);
    const double tol = 1e-30 * std::max(frob, 1e-300);

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < d; ++p)
            for (std::size_t q = p + 1; q < d; ++q) off += a(p, q) * a(p, q);
        if (off <= tol) break;

        for (std::size_t p = 0; p < d; ++p) {
            for (std::size_t q = p + 1; q < d; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (std::size_t i = 0; i < d; ++i) {
                    const double aip = a(i, p);
                    const double aiq = a(i, q);
                    a(i, p) = c * aip - s * aiq;
                    a(i, q) = s * aip + c * aiq;
                }
                for (std::size_t i = 0; i < d; ++i) {
                    const double api = a(p, i);
                    const double aqi = a(q, i);
                    a(p, i) = c * api - s * aqi;
                    a(q, i) = s * api + c * aqi;
                }
                for (std::size_t i = 0; i < d; ++i) {
                    const double vip = vectors(i, p);
                    const double viq = vectors(i, q);
                    vectors(i, p) = c * vip - s * viq;
                    vectors(i, q) = s * vip + c * viq;
                }
            }
        }
    }
    std::vector<double> eigenvalues(d);
    for (std::size_t i = 0; i < d; ++i) eigenvalues[i] = a(i, i);
    return eigenvalues;
}

}  // namespace detail

/// Fitted principal component analysis: centering/scaling vectors, an
/// orthonormal component basis and the retained eigenvalue spectrum.
struct PcaModel {
    std::vector<double> mean;         // length d
    std::vector<double> scale;        // length d; all 1s when standardization off
    Matrix components;                // d x k, orthonormal columns
    std::vector<double> eigenvalues;  // length k, nonincreasing, >= 0
    double total_variance = 0.0;      // sum of all d eigenvalues at fit time

    std::size_t d() const { return components.rows(); }
    std::size_t k() const { return components.cols(); }

    bool operator==(const PcaModel&) const = default;
};

namespace detail {

struct PcaBasis {
    std::vector<double> mean;
    std::vector<double> scale;
    Matrix vectors;                   // d x d eigenvector columns, sorted
    std::vector<double> eigenvalues;  // length d, nonincreasing, clamped >= 0
    double total_variance = 0.0;
};

inline PcaBasis pca_full_basis(const Matrix& x, bool standardize) {
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();
    if (n < 2) throw DegenerateInput("PCA needs at least 2 rows");
    if (d < 1) throw DegenerateInput("PCA needs at least 1 column");

    PcaBasis basis;
    basis.mean.assign(d, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) basis.mean[j] += x(i, j);
    for (double& m : basis.mean) m /= static_cast<double>(n);

    basis.scale.assign(d, 1.0);
    if (standardize) {
        for (std::size_t j = 0; j < d; ++j) {
            double ss = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double dev = x(i, j) - basis.mean[j];
                ss += dev * dev;
            }
            const double sd = std::sqrt(ss / static_cast<double>(n - 1));
            if (sd > 0.0) basis.scale[j] = sd;  // zero-variance column stays at 1
        }
    }

    Matrix cov(d, d);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t a = 0; a < d; ++a) {
            const double za = (x(i, a) - basis.mean[a]) / basis.scale[a];
            for (std::size_t b = a; b < d; ++b) {
                const double zb = (x(i, b) - basis.mean[b]) / basis.scale[b];
                cov(a, b) += za * zb;
            }
        }
    }
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = a; b < d; ++b) {
            cov(a, b) /= static_cast<double>(n - 1);
            cov(b, a) = cov(a, b);
        }

    basis.total_variance = 0.0;
    for (std::size_t j = 0; j < d; ++j) basis.total_variance += cov(j, j);
    if (basis.total_variance == 0.0)
        throw ZeroVariance("every column has zero variance");

    Matrix vectors;
    std::vector<double> raw = detail::jacobi_eigh(cov, vectors);

    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return raw[a] > raw[b]; });

    basis.vectors = Matrix(d, d);
    basis.eigenvalues.resize(d);
    for (std::size_t j = 0; j < d; ++j) {
        const std::size_t src = order[j];
        basis.eigenvalues[j] = std::max(raw[src], 0.0);
        // Sign convention: the entry of largest magnitude is nonnegative.
        std::size_t pivot = 0;
        for (std::size_t i = 1; i < d; ++i)
            if (std::abs(vectors(i, src)) > std::abs(vectors(pivot, src))) pivot = i;
        const double flip = vectors(pivot, src) < 0.0 ? -1.0 : 1.0;
        for (std::size_t i = 0; i < d; ++i) basis.vectors(i, j) = flip * vectors(i, src);
    }
    return basis;
}

inline PcaModel pca_from_basis(PcaBasis&& basis, std::size_t k) {
    PcaModel model;
    model.mean = std::move(basis.mean);
    model.scale = std::move(basis.scale);
    model.total_variance = basis.total_variance;
    model.components = Matrix(basis.vectors.rows(), k);
    for (std::size_t i = 0; i < basis.vectors.rows(); ++i)
        for (std::size_t j = 0; j < k; ++j) model.components(i, j) = basis.vectors(i, j);
    model.eigenvalues.assign(basis.eigenvalues.begin(),
                             basis.eigenvalues.begin() + static_cast<long>(k));
    return model;
}

}  // namespace detail

/// Fit with a fixed component count 1 <= k <= d.
inline PcaModel fit_pca(const Matrix& x, std::size_t k, bool standardize = true) {
    auto basis = detail::pca_full_basis(x, standardize);
    if (k < 1 || k > x.cols()) throw BadConfig("component count out of range");
    return detail::pca_from_basis(std::move(basis), k);
}

/// Fit keeping the smallest k whose eigenvalue sum reaches
/// `variance_target` (in (0, 1]) of the total variance.
inline PcaModel fit_pca_variance(const Matrix& x, double variance_target,
                                 bool standardize = true) {
    if (!(variance_target > 0.0 && variance_target <= 1.0))
        throw BadConfig("variance target must be in (0, 1]");
    auto basis = detail::pca_full_basis(x, standardize);
    const double goal = variance_target * basis.total_variance;
    double cumulative = 0.0;
    std::size_t k = basis.eigenvalues.size();
    for (std::size_t j = 0; j < basis.eigenvalues.size(); ++j) {
        cumulative += basis.eigenvalues[j];
        if (cumulative >= goal) {
            k = j + 1;
            break;
        }
    }
    return detail::pca_from_basis(std::move(basis), k);
}

/// Project rows onto the component basis: ((x - mean) / scale) * components.
inline Matrix pca_transform(const PcaModel& model, const Matrix& x) {
    if (x.cols() != model.d())
        throw DimensionMismatch("PCA transform expects " + std::to_string(model.d()) +
                                " columns, got " + std::to_string(x.cols()));
    Matrix out(x.rows(), model.k());
    for (std::size_t i = 0; i < x.rows(); ++i) {
        for (std::size_t j = 0; j < model.k(); ++j) {
            double sum = 0.0;
            for (std::size_t l = 0; l < model.d(); ++l)
                sum += (x(i, l) - model.mean[l]) / model.scale[l] * model.components(l, j);
            out(i, j) = sum;
        }
    }
    return out;
}

/// Map reduced rows back to the original feature space.
inline Matrix pca_inverse_transform(const PcaModel& model, const Matrix& reduced) {
    if (reduced.cols() != model.k())
        throw DimensionMismatch("PCA inverse expects " + std::to_string(model.k()) +
                                " columns, got " + std::to_string(reduced.cols()));
    Matrix out(reduced.rows(), model.d());
    for (std::size_t i = 0; i < reduced.rows(); ++i) {
        for (std::size_t l = 0; l < model.d(); ++l) {
            double sum = 0.0;
            for (std::size_t j = 0; j < model.k(); ++j)
                sum += reduced(i, j) * model.components(l, j);
            out(i, l) = sum * model.scale[l] + model.mean[l];
        }
    }
    return out;
}

}  // namespace recml
