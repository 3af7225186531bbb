#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "recml/pca.hpp"
#include "recml/rng.hpp"

using namespace recml;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

Matrix random_matrix(Rng& rng, std::size_t n, std::size_t d, double spread = 2.0) {
    Matrix x(n, d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j)
            x(i, j) = rng.next_normal() * spread + static_cast<double>(j);
    return x;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
    return worst;
}

double squared_error(const Matrix& a, const Matrix& b) {
    double total = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const double diff = a(i, j) - b(i, j);
            total += diff * diff;
        }
    return total;
}

}  // namespace

TEST_CASE("perfectly correlated points", "[pca]") {
    const Matrix x = Matrix::from_rows({{1, 1}, {2, 2}, {3, 3}});
    const PcaModel m = fit_pca(x, 2, /*standardize=*/false);

    // Oracle: covariance is [[1,1],[1,1]]; closed-form eigenvalues from the
    // characteristic polynomial are trace/2 +- sqrt((trace/2)^2 - det).
    const double trace = 2.0, det = 0.0;
    const double lo = trace / 2.0 - std::sqrt(trace * trace / 4.0 - det);
    const double hi = trace / 2.0 + std::sqrt(trace * trace / 4.0 - det);
    REQUIRE_THAT(m.eigenvalues[0], WithinAbs(hi, 1e-12));
    REQUIRE_THAT(m.eigenvalues[1], WithinAbs(lo, 1e-12));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    REQUIRE_THAT(m.components(0, 0), WithinAbs(inv_sqrt2, 1e-12));
    REQUIRE_THAT(m.components(1, 0), WithinAbs(inv_sqrt2, 1e-12));
    REQUIRE_THAT(m.total_variance, WithinRel(2.0, 1e-12));
}

TEST_CASE("axis-aligned covariance keeps axis components", "[pca]") {
    const double s = std::sqrt(3.0);
    const Matrix x = Matrix::from_rows(
        {{-s, -s / 2}, {s, -s / 2}, {-s, s / 2}, {s, s / 2}});
    const PcaModel m = fit_pca(x, 2, false);
    REQUIRE_THAT(m.eigenvalues[0], WithinAbs(4.0, 1e-12));
    REQUIRE_THAT(m.eigenvalues[1], WithinAbs(1.0, 1e-12));
    REQUIRE_THAT(m.components(0, 0), WithinAbs(1.0, 1e-12));
    REQUIRE_THAT(m.components(1, 0), WithinAbs(0.0, 1e-12));
}

TEST_CASE("full-rank round trip", "[pca]") {
    Rng rng(8);
    for (bool standardize : {false, true}) {
        const Matrix x = random_matrix(rng, 8, 4);
        const PcaModel m = fit_pca(x, 4, standardize);
        const Matrix back = pca_inverse_transform(m, pca_transform(m, x));
        REQUIRE(max_abs_diff(x, back) < 1e-6);
    }
}

TEST_CASE("transforming the mean row gives zero", "[pca]") {
    Rng rng(3);
    const Matrix x = random_matrix(rng, 10, 3);
    const PcaModel m = fit_pca(x, 3, true);
    Matrix mean_row(1, 3);
    for (std::size_t j = 0; j < 3; ++j) mean_row(0, j) = m.mean[j];
    const Matrix out = pca_transform(m, mean_row);
    for (std::size_t j = 0; j < 3; ++j) REQUIRE_THAT(out(0, j), WithinAbs(0.0, 1e-12));
}

TEST_CASE("empty input passes through", "[pca]") {
    Rng rng(5);
    const Matrix x = random_matrix(rng, 6, 3);
    const PcaModel m = fit_pca(x, 2, true);
    const Matrix out = pca_transform(m, Matrix(0, 3));
    REQUIRE(out.rows() == 0);
    REQUIRE(out.cols() == 2);
}

TEST_CASE("projected variances equal the eigenvalues", "[pca]") {
    Rng rng(12);
    const Matrix x = random_matrix(rng, 30, 4);
    const PcaModel m = fit_pca(x, 4, false);
    const Matrix z = pca_transform(m, x);
    for (std::size_t j = 0; j < 4; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < z.rows(); ++i) mean += z(i, j);
        mean /= static_cast<double>(z.rows());
        double var = 0.0;
        for (std::size_t i = 0; i < z.rows(); ++i) {
            const double dev = z(i, j) - mean;
            var += dev * dev;
        }
        var /= static_cast<double>(z.rows() - 1);
        if (m.eigenvalues[j] > 1e-12)
            REQUIRE_THAT(var, WithinRel(m.eigenvalues[j], 1e-8));
        else
            REQUIRE_THAT(var, WithinAbs(0.0, 1e-10));
    }
}

TEST_CASE("inverse of zero rows is the mean", "[pca]") {
    Rng rng(14);
    const Matrix x = random_matrix(rng, 7, 3);
    const PcaModel m = fit_pca(x, 2, true);
    const Matrix back = pca_inverse_transform(m, Matrix(2, 2, 0.0));
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            REQUIRE_THAT(back(i, j), WithinAbs(m.mean[j], 1e-12));
}

TEST_CASE("dropped-eigenvalue reconstruction identity", "[pca]") {
    Rng rng(21);
    const Matrix x = random_matrix(rng, 5, 3);
    for (std::size_t k = 1; k < 3; ++k) {
        const PcaModel full = fit_pca(x, 3, false);
        const PcaModel m = fit_pca(x, k, false);
        const Matrix back = pca_inverse_transform(m, pca_transform(m, x));
        double dropped = 0.0;
        for (std::size_t j = k; j < 3; ++j) dropped += full.eigenvalues[j];
        const double expected = static_cast<double>(x.rows() - 1) * dropped;
        REQUIRE_THAT(squared_error(x, back), WithinRel(expected, 1e-6));
    }
}

TEST_CASE("components stay orthonormal", "[pca]") {
    Rng rng(30);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 3 + rng.next_index(30);
        const std::size_t d = 1 + rng.next_index(6);
        const Matrix x = random_matrix(rng, n, d);
        const std::size_t k = 1 + rng.next_index(d);
        const PcaModel m = fit_pca(x, k, trial % 2 == 0);
        for (std::size_t a = 0; a < k; ++a) {
            for (std::size_t b = 0; b < k; ++b) {
                double dot = 0.0;
                for (std::size_t i = 0; i < d; ++i)
                    dot += m.components(i, a) * m.components(i, b);
                REQUIRE_THAT(dot, WithinAbs(a == b ? 1.0 : 0.0, 1e-8));
            }
        }
    }
}

TEST_CASE("reconstruction error is nonincreasing in k", "[pca]") {
    Rng rng(33);
    const Matrix x = random_matrix(rng, 12, 5);
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k <= 5; ++k) {
        const PcaModel m = fit_pca(x, k, false);
        const double err = squared_error(x, pca_inverse_transform(m, pca_transform(m, x)));
        REQUIRE(err <= prev + 1e-9);
        prev = err;
    }
}

TEST_CASE("standardization makes transforms scale invariant", "[pca]") {
    Rng rng(40);
    Matrix x = random_matrix(rng, 15, 3);
    const PcaModel before = fit_pca(x, 3, true);
    const Matrix z_before = pca_transform(before, x);
    for (std::size_t i = 0; i < x.rows(); ++i) x(i, 1) *= 37.0;
    const PcaModel after = fit_pca(x, 3, true);
    const Matrix z_after = pca_transform(after, x);
    REQUIRE(max_abs_diff(z_before, z_after) < 1e-8);
}

TEST_CASE("zero-variance column is kept constant, not an error", "[pca]") {
    Matrix x = Matrix::from_rows({{1, 5}, {2, 5}, {3, 5}});
    const PcaModel m = fit_pca(x, 2, true);
    REQUIRE(m.scale[1] == 1.0);
    const Matrix z = pca_transform(m, x);
    REQUIRE(std::isfinite(z(0, 0)));

    const Matrix all_const = Matrix::from_rows({{5, 5}, {5, 5}});
    REQUIRE_THROWS_AS(fit_pca(all_const, 1, true), ZeroVariance);
}

TEST_CASE("variance-target selection", "[pca]") {
    const double s = std::sqrt(3.0);
    const Matrix x = Matrix::from_rows(
        {{-s, -s / 2}, {s, -s / 2}, {-s, s / 2}, {s, s / 2}});
    // Eigenvalues (4, 1): 4/5 of the variance sits in the first component.
    REQUIRE(fit_pca_variance(x, 0.79, false).k() == 1);
    REQUIRE(fit_pca_variance(x, 0.81, false).k() == 2);
    REQUIRE(fit_pca_variance(x, 1.0, false).k() == 2);
    REQUIRE_THROWS_AS(fit_pca_variance(x, 0.0, false), BadConfig);
    REQUIRE_THROWS_AS(fit_pca_variance(x, 1.5, false), BadConfig);
}

TEST_CASE("pca input validation", "[pca]") {
    const Matrix one_row(1, 3, 1.0);
    REQUIRE_THROWS_AS(fit_pca(one_row, 1, false), DegenerateInput);
    const Matrix x = Matrix::from_rows({{1, 2}, {3, 4}});
    REQUIRE_THROWS_AS(fit_pca(x, 0, false), BadConfig);
    REQUIRE_THROWS_AS(fit_pca(x, 3, false), BadConfig);
    const PcaModel m = fit_pca(x, 2, false);
    REQUIRE_THROWS_AS(pca_transform(m, Matrix(2, 3, 0.0)), DimensionMismatch);
    REQUIRE_THROWS_AS(pca_inverse_transform(m, Matrix(2, 3, 0.0)), DimensionMismatch);
}

TEST_CASE("jacobi eigenvalues of PSD matrices stay above the clamp", "[pca]") {
    Rng rng(50);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t d = 1 + rng.next_index(6);
        const Matrix b = random_matrix(rng, d + 1, d);
        Matrix psd(d, d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) {
                double sum = 0.0;
                for (std::size_t r = 0; r < b.rows(); ++r) sum += b(r, i) * b(r, j);
                psd(i, j) = sum;
            }
        Matrix vectors;
        for (double ev : detail::jacobi_eigh(psd, vectors)) REQUIRE(ev >= -1e-10);
    }
}
