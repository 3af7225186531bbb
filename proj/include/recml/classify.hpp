#pragma once

#include <span>
#include <vector>

#include "recml/errors.hpp"
#include "recml/matrix.hpp"

namespace recml::detail {

/// Class count k = max label + 1. Labels must be nonnegative, cover at
/// least two classes, and every class in [0, k) must appear.
inline int infer_n_classes(std::span<const int> labels) {
    if (labels.empty()) throw EmptyInput("no training labels");
    int max_label = 0;
    for (int y : labels) {
        if (y < 0) throw Error("negative class label");
        max_label = std::max(max_label, y);
    }
    const int k = max_label + 1;
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (int y : labels) ++counts[static_cast<std::size_t>(y)];
    for (int c = 0; c < k; ++c)
        if (counts[static_cast<std::size_t>(c)] == 0)
            throw Error("class " + std::to_string(c) + " has no training samples");
    if (k < 2) throw SingleClass("training labels contain a single class");
    return k;
}

inline std::vector<int> class_counts(std::span<const int> labels, int n_classes) {
    std::vector<int> counts(static_cast<std::size_t>(n_classes), 0);
    for (int y : labels) ++counts[static_cast<std::size_t>(y)];
    return counts;
}

/// Index of the largest value; ties break to the smallest index.
template <typename T>
int argmax(std::span<const T> values) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] > values[best]) best = i;
    return static_cast<int>(best);
}

inline void check_feature_count(std::size_t model_d, std::size_t x_d) {
    if (model_d != x_d)
        throw DimensionMismatch("model expects " + std::to_string(model_d) +
                                " features, got " + std::to_string(x_d));
}

}  // namespace recml::detail
