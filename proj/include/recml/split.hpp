#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "recml/encoding.hpp"
#include "recml/rng.hpp"

namespace recml {

/// Disjoint cover of row indices 0..n-1. Identical (n, ratio, seed) always
/// produces identical index lists.
struct TrainTestSplit {
    std::vector<std::size_t> train_indices;
    std::vector<std::size_t> test_indices;
    std::uint64_t seed = 0;
    double train_ratio = 0.75;
};

/// Seeded Fisher-Yates shuffle of 0..n-1; the first floor(ratio * n) indices
/// become the training set.
inline TrainTestSplit split_indices(std::size_t n, double ratio, std::uint64_t seed) {
    if (!(ratio > 0.0 && ratio < 1.0)) throw BadConfig("train ratio must be in (0, 1)");
    if (n < 2) throw TooFewRows("need at least 2 rows to split");
    const auto n_train =
        static_cast<std::size_t>(std::floor(ratio * static_cast<double>(n)));
    if (n_train == 0 || n_train == n)
        throw TooFewRows("split would leave an empty train or test set");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    rng.shuffle(order);

    TrainTestSplit split;
    split.seed = seed;
    split.train_ratio = ratio;
    split.train_indices.assign(order.begin(), order.begin() + static_cast<long>(n_train));
    split.test_indices.assign(order.begin() + static_cast<long>(n_train), order.end());
    return split;
}

inline TrainTestSplit split_dataset(const EncodedDataset& ds, double ratio,
                                    std::uint64_t seed) {
    return split_indices(ds.n(), ratio, seed);
}

}  // namespace recml
