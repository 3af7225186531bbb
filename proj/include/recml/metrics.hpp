#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "recml/errors.hpp"
#include "recml/numfmt.hpp"

namespace recml {

/// Evaluation summary. Regression-style metrics (r_square, mse, rmse, mae)
/// are computed over the integer label codes treated as numbers, which is
/// how negative R-squared values arise for bad classifiers. r_square is
/// empty when the truth vector is constant (undefined, not an error).
struct MetricReport {
    double accuracy = 0.0;
    std::optional<double> r_square;
    double mse = 0.0;
    double rmse = 0.0;
    double mae = 0.0;
    std::size_t n = 0;

    /// Fixed table row "accuracy% ,r2, mse, mae" matching the report tables.
    std::string table_row() const {
        std::string row = format_percent(accuracy);
        row += ',';
        row += r_square ? shortest_repr(*r_square) : std::string();
        row += ',';
        row += shortest_repr(mse);
        row += ',';
        row += shortest_repr(mae);
        return row;
    }
};

namespace detail {

inline void check_lengths(std::size_t a, std::size_t b) {
    if (a != b)
        throw DimensionMismatch("length mismatch: " + std::to_string(a) + " vs " +
                                std::to_string(b));
    if (a == 0) throw EmptyInput("empty metric input");
}

}  // namespace detail

inline double accuracy(std::span<const int> y_true, std::span<const int> y_pred) {
    detail::check_lengths(y_true.size(), y_pred.size());
    std::size_t matches = 0;
    for (std::size_t i = 0; i < y_true.size(); ++i)
        if (y_true[i] == y_pred[i]) ++matches;
    return static_cast<double>(matches) / static_cast<double>(y_true.size());
}

/// 1 - SS_res / SS_tot. May be negative; throws ConstantTruth when SS_tot = 0.
inline double r_square(std::span<const double> y_true, std::span<const double> y_pred) {
    detail::check_lengths(y_true.size(), y_pred.size());
    if (y_true.size() < 2) throw ConstantTruth("r_square needs at least 2 samples");
    double mean = 0.0;
    for (double v : y_true) mean += v;
    mean /= static_cast<double>(y_true.size());
    double ss_res = 0.0;
    double ss_tot = 0.0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const double res = y_true[i] - y_pred[i];
        const double dev = y_true[i] - mean;
        ss_res += res * res;
        ss_tot += dev * dev;
    }
    if (ss_tot == 0.0) throw ConstantTruth("r_square undefined for constant truth");
    return 1.0 - ss_res / ss_tot;
}

inline double mse(std::span<const double> y_true, std::span<const double> y_pred) {
    detail::check_lengths(y_true.size(), y_pred.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const double diff = y_true[i] - y_pred[i];
        sum += diff * diff;
    }
    return sum / static_cast<double>(y_true.size());
}

inline double rmse(std::span<const double> y_true, std::span<const double> y_pred) {
    return std::sqrt(mse(y_true, y_pred));
}

inline double mae(std::span<const double> y_true, std::span<const double> y_pred) {
    detail::check_lengths(y_true.size(), y_pred.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < y_true.size(); ++i) sum += std::abs(y_true[i] - y_pred[i]);
    return sum / static_cast<double>(y_true.size());
}

/// All five metrics over integer label vectors.
inline MetricReport evaluate(std::span<const int> y_true, std::span<const int> y_pred) {
    detail::check_lengths(y_true.size(), y_pred.size());
    std::vector<double> t(y_true.begin(), y_true.end());
    std::vector<double> p(y_pred.begin(), y_pred.end());

    MetricReport report;
    report.n = y_true.size();
    report.accuracy = accuracy(y_true, y_pred);
    report.mse = mse(t, p);
    report.rmse = std::sqrt(report.mse);
    report.mae = mae(t, p);
    try {
        report.r_square = r_square(t, p);
    } catch (const ConstantTruth&) {
        report.r_square = std::nullopt;
    }
    return report;
}

}  // namespace recml
