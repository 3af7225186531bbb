#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "recml/decision_tree.hpp"

namespace recml {

struct RfHyperparams {
    int n_trees = 100;
    int features_per_split = 0;  // 0 = ceil(sqrt(d))
    bool bootstrap = true;
    std::uint64_t seed = 0;
    // Forest trees default to min_samples = 5 so single mislabeled rows do
    // not carve out their own leaves; the vote absorbs the slack.
    DtHyperparams tree{-1, 5};
    bool operator==(const RfHyperparams&) const = default;
};

struct RfModel {
    std::vector<DtModel> trees;
    RfHyperparams hp;
    int n_classes = 0;
    int n_features = 0;

    bool operator==(const RfModel&) const = default;
};

/// Bagged forest: each tree fits a bootstrap resample (size n, with
/// replacement) and restricts every split search to a fresh random feature
/// subset. Per-tree seeds are all drawn from the master seed up front, so
/// the forest is identical no matter how tree training is scheduled.
inline RfModel train_rf(const Matrix& x, const std::vector<int>& y, RfHyperparams hp = {},
                        std::vector<FeatureKind> feature_kinds = {}) {
    if (x.rows() != y.size()) throw DimensionMismatch("feature/label row counts differ");
    if (x.rows() < 2) throw TooFewRows("random forest needs at least 2 rows");
    if (hp.n_trees < 1) throw BadConfig("n_trees must be >= 1");
    const int d = static_cast<int>(x.cols());
    if (hp.features_per_split < 0 || hp.features_per_split > d)
        throw BadConfig("features_per_split out of range");
    if (hp.tree.min_samples < 1) throw BadConfig("min_samples must be >= 1");

    const int features_per_split =
        hp.features_per_split > 0
            ? hp.features_per_split
            : static_cast<int>(std::ceil(std::sqrt(static_cast<double>(d))));

    RfModel model;
    model.hp = hp;
    model.n_features = d;
    int max_label = 0;
    for (int label : y) {
        if (label < 0) throw Error("negative class label");
        max_label = std::max(max_label, label);
    }
    model.n_classes = max_label + 1;
    const auto kinds = detail::resolve_kinds(std::move(feature_kinds), x.cols());

    Rng master(hp.seed);
    std::vector<std::uint64_t> tree_seeds(static_cast<std::size_t>(hp.n_trees));
    for (auto& seed : tree_seeds) seed = master.next_u64();

    model.trees.reserve(tree_seeds.size());
    for (std::uint64_t seed : tree_seeds) {
        Rng rng(seed);
        std::vector<std::size_t> rows(x.rows());
        if (hp.bootstrap) {
            for (auto& row : rows) row = rng.next_index(x.rows());
        } else {
            std::iota(rows.begin(), rows.end(), std::size_t{0});
        }
        detail::TreeBuilder builder(x, y, hp.tree, kinds, model.n_classes, &rng,
                                    features_per_split);
        DtModel tree;
        tree.hp = hp.tree;
        tree.n_classes = model.n_classes;
        tree.n_features = d;
        tree.feature_kinds = kinds;
        tree.nodes = builder.build(std::move(rows));
        model.trees.push_back(std::move(tree));
    }
    return model;
}

/// Per-row majority vote across trees; ties break to the smallest label.
inline std::vector<int> predict_rf(const RfModel& model, const Matrix& x) {
    detail::check_feature_count(static_cast<std::size_t>(model.n_features), x.cols());
    std::vector<int> labels(x.rows());
    std::vector<int> votes(static_cast<std::size_t>(model.n_classes));
    for (std::size_t i = 0; i < x.rows(); ++i) {
        std::fill(votes.begin(), votes.end(), 0);
        for (const DtModel& tree : model.trees)
            ++votes[static_cast<std::size_t>(detail::route_row(tree, x.row(i)))];
        labels[i] = detail::argmax(std::span<const int>(votes));
    }
    return labels;
}

}  // namespace recml
