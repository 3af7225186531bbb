#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>

#include "recml/rng.hpp"
#include "recml/split.hpp"

using namespace recml;

TEST_CASE("75/25 sizes", "[split]") {
    const TrainTestSplit s = split_indices(100, 0.75, 3);
    REQUIRE(s.train_indices.size() == 75);
    REQUIRE(s.test_indices.size() == 25);

    const TrainTestSplit tiny = split_indices(4, 0.75, 3);
    REQUIRE(tiny.train_indices.size() == 3);
    REQUIRE(tiny.test_indices.size() == 1);
}

TEST_CASE("same seed, same split", "[split]") {
    const TrainTestSplit a = split_indices(50, 0.75, 42);
    const TrainTestSplit b = split_indices(50, 0.75, 42);
    REQUIRE(a.train_indices == b.train_indices);
    REQUIRE(a.test_indices == b.test_indices);
}

TEST_CASE("splits partition the index range", "[split]") {
    Rng rng(9);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 2 + rng.next_index(200);
        const std::uint64_t seed = rng.next_u64();
        const double ratio = 0.1 + 0.8 * rng.next_real();
        TrainTestSplit s;
        try {
            s = split_indices(n, ratio, seed);
        } catch (const TooFewRows&) {
            continue;  // floor(ratio*n) hit 0 or n; nothing to check
        }
        std::vector<std::size_t> all = s.train_indices;
        all.insert(all.end(), s.test_indices.begin(), s.test_indices.end());
        std::sort(all.begin(), all.end());
        std::vector<std::size_t> expected(n);
        std::iota(expected.begin(), expected.end(), std::size_t{0});
        REQUIRE(all == expected);
    }
}

TEST_CASE("different seeds usually differ", "[split]") {
    int distinct = 1;
    const TrainTestSplit first = split_indices(40, 0.75, 0);
    for (std::uint64_t seed = 1; seed < 10; ++seed) {
        if (split_indices(40, 0.75, seed).train_indices != first.train_indices)
            ++distinct;
    }
    REQUIRE(distinct >= 2);
}

TEST_CASE("split error paths", "[split]") {
    REQUIRE_THROWS_AS(split_indices(1, 0.75, 0), TooFewRows);
    REQUIRE_THROWS_AS(split_indices(2, 0.4, 0), TooFewRows);  // floor(0.8) = 0
    REQUIRE_THROWS_AS(split_indices(10, 0.0, 0), BadConfig);
    REQUIRE_THROWS_AS(split_indices(10, 1.0, 0), BadConfig);
}
