#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <span>
#include <vector>

#include "recml/classify.hpp"
#include "recml/matrix.hpp"
#include "recml/rng.hpp"

namespace recml {

namespace detail {

/// Shannon entropy in bits from per-class counts, iterated in ascending
/// class order. Every gain computation in this module funnels through here
/// so candidate gains are bitwise comparable.
inline double entropy_from_counts(std::span<const int> counts, std::size_t total) {
    double h = 0.0;
    for (int count : counts) {
        if (count == 0) continue;
        const double p = static_cast<double>(count) / static_cast<double>(total);
        h -= p * std::log2(p);
    }
    return h;
}

}  // namespace detail

/// Shannon entropy of a label multiset; 0 log 0 counts as 0.
inline double entropy(std::span<const int> labels) {
    if (labels.empty()) throw EmptyInput("entropy of empty label set");
    int max_label = 0;
    for (int y : labels) {
        if (y < 0) throw Error("negative class label");
        max_label = std::max(max_label, y);
    }
    std::vector<int> counts(static_cast<std::size_t>(max_label) + 1, 0);
    for (int y : labels) ++counts[static_cast<std::size_t>(y)];
    return detail::entropy_from_counts(counts, labels.size());
}

/// Entropy(S) minus the size-weighted child entropies, children taken in the
/// order given. The partition must cover `labels` exactly (as a multiset).
inline double information_gain(std::span<const int> labels,
                               const std::vector<std::vector<int>>& partition) {
    if (labels.empty()) throw EmptyInput("information gain of empty label set");
    std::vector<int> combined;
    combined.reserve(labels.size());
    for (const auto& subset : partition)
        combined.insert(combined.end(), subset.begin(), subset.end());
    std::vector<int> sorted_labels(labels.begin(), labels.end());
    std::sort(sorted_labels.begin(), sorted_labels.end());
    std::sort(combined.begin(), combined.end());
    if (combined != sorted_labels)
        throw BadPartition("partition does not cover the label set");

    const double parent = entropy(labels);
    double child_sum = 0.0;
    for (const auto& subset : partition) {
        if (subset.empty()) continue;
        const double weight =
            static_cast<double>(subset.size()) / static_cast<double>(labels.size());
        child_sum += weight * entropy(subset);
    }
    return parent - child_sum;
}

struct DtHyperparams {
    int max_depth = -1;   // -1 = unlimited
    int min_samples = 2;  // nodes with fewer rows become leaves
    bool operator==(const DtHyperparams&) const = default;
};

/// Tree node. Internal nodes keep their majority label too: rows carrying a
/// categorical value unseen at fit time fall back to it.
struct DtNode {
    bool leaf = true;
    int label = 0;
    std::vector<int> counts;  // class distribution of the node's fit rows

    int feature = -1;
    bool categorical = false;
    double threshold = 0.0;           // numeric split: x <= threshold goes left
    std::vector<double> categories;   // categorical split: sorted branch values
    std::vector<int> children;        // node indices; numeric splits have 2

    bool operator==(const DtNode&) const = default;
};

struct DtModel {
    std::vector<DtNode> nodes;  // root at index 0
    DtHyperparams hp;
    int n_classes = 0;
    int n_features = 0;
    std::vector<FeatureKind> feature_kinds;

    bool operator==(const DtModel&) const = default;
};

namespace detail {

struct SplitDecision {
    int feature = -1;
    bool categorical = false;
    double threshold = 0.0;
    double gain = 0.0;
    bool valid = false;
};

/// Greedy split search over the given feature indices (ascending). Ties
/// break to the earlier feature and, within a numeric feature, the smaller
/// threshold. Returns valid=false when no candidate has positive gain.
inline SplitDecision best_split(const Matrix& x, const std::vector<int>& y,
                                std::span<const std::size_t> rows,
                                std::span<const int> features,
                                std::span<const FeatureKind> kinds, int n_classes) {
    std::vector<int> parent_counts(static_cast<std::size_t>(n_classes), 0);
    for (std::size_t row : rows) ++parent_counts[static_cast<std::size_t>(y[row])];
    const double parent_entropy = entropy_from_counts(parent_counts, rows.size());

    SplitDecision best;
    std::vector<int> left_counts(static_cast<std::size_t>(n_classes));
    std::vector<int> right_counts(static_cast<std::size_t>(n_classes));
    std::vector<std::pair<double, int>> ordered;

    for (int f : features) {
        if (kinds[static_cast<std::size_t>(f)] == FeatureKind::categorical) {
            // Multiway partition by distinct value, ascending.
            std::map<double, std::vector<int>> groups;
            for (std::size_t row : rows) {
                auto& counts = groups[x(row, static_cast<std::size_t>(f))];
                if (counts.empty()) counts.assign(static_cast<std::size_t>(n_classes), 0);
                ++counts[static_cast<std::size_t>(y[row])];
            }
            if (groups.size() < 2) continue;
            double child_sum = 0.0;
            for (const auto& [value, counts] : groups) {
                std::size_t size = 0;
                for (int c : counts) size += static_cast<std::size_t>(c);
                const double weight =
                    static_cast<double>(size) / static_cast<double>(rows.size());
                child_sum += weight * entropy_from_counts(counts, size);
            }
            const double gain = parent_entropy - child_sum;
            if (gain > best.gain) {
                best = {f, true, 0.0, gain, true};
            }
        } else {
            // Binary threshold at midpoints between sorted distinct values.
            ordered.clear();
            for (std::size_t row : rows)
                ordered.emplace_back(x(row, static_cast<std::size_t>(f)), y[row]);
            std::sort(ordered.begin(), ordered.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            std::fill(left_counts.begin(), left_counts.end(), 0);

            std::size_t i = 0;
            while (i < ordered.size()) {
                const double value = ordered[i].first;
                while (i < ordered.size() && ordered[i].first == value) {
                    ++left_counts[static_cast<std::size_t>(ordered[i].second)];
                    ++i;
                }
                if (i == ordered.size()) break;  // last distinct value: no boundary
                const std::size_t n_left = i;
                const std::size_t n_right = ordered.size() - i;
                for (std::size_t c = 0; c < left_counts.size(); ++c)
                    right_counts[c] = parent_counts[c] - left_counts[c];
                double child_sum = 0.0;
                child_sum += static_cast<double>(n_left) /
                             static_cast<double>(rows.size()) *
                             entropy_from_counts(left_counts, n_left);
                child_sum += static_cast<double>(n_right) /
                             static_cast<double>(rows.size()) *
                             entropy_from_counts(right_counts, n_right);
                const double gain = parent_entropy - child_sum;
                if (gain > best.gain) {
                    best = {f, false, (value + ordered[i].first) / 2.0, gain, true};
                }
            }
        }
    }
    return best;
}

class TreeBuilder {
public:
    TreeBuilder(const Matrix& x, const std::vector<int>& y, DtHyperparams hp,
                std::span<const FeatureKind> kinds, int n_classes,
                Rng* rng = nullptr, int features_per_split = 0)
        : x_(x), y_(y), hp_(hp), kinds_(kinds), n_classes_(n_classes), rng_(rng),
          features_per_split_(features_per_split) {}

    std::vector<DtNode> build(std::vector<std::size_t> rows) {
        nodes_.clear();
        grow(std::move(rows), 0);
        return std::move(nodes_);
    }

private:
    int grow(std::vector<std::size_t> rows, int depth) {
        const int index = static_cast<int>(nodes_.size());
        nodes_.emplace_back();

        std::vector<int> counts(static_cast<std::size_t>(n_classes_), 0);
        for (std::size_t row : rows) ++counts[static_cast<std::size_t>(y_[row])];
        nodes_[index].counts = counts;
        nodes_[index].label = argmax(std::span<const int>(counts));

        const bool pure =
            std::count(counts.begin(), counts.end(), 0) == n_classes_ - 1;
        if (pure || rows.size() < static_cast<std::size_t>(hp_.min_samples) ||
            (hp_.max_depth >= 0 && depth >= hp_.max_depth))
            return index;

        const std::vector<int> features = candidate_features();
        const SplitDecision split = best_split(x_, y_, rows, features, kinds_, n_classes_);
        if (!split.valid) return index;

        const auto f = static_cast<std::size_t>(split.feature);
        if (split.categorical) {
            std::map<double, std::vector<std::size_t>> groups;
            for (std::size_t row : rows) groups[x_(row, f)].push_back(row);
            rows.clear();
            rows.shrink_to_fit();
            std::vector<double> values;
            std::vector<std::vector<std::size_t>> subsets;
            for (auto& [value, subset] : groups) {
                values.push_back(value);
                subsets.push_back(std::move(subset));
            }
            std::vector<int> children;
            for (auto& subset : subsets) children.push_back(grow(std::move(subset), depth + 1));
            nodes_[index].leaf = false;
            nodes_[index].feature = split.feature;
            nodes_[index].categorical = true;
            nodes_[index].categories = std::move(values);
            nodes_[index].children = std::move(children);
        } else {
            std::vector<std::size_t> left, right;
            for (std::size_t row : rows)
                (x_(row, f) <= split.threshold ? left : right).push_back(row);
            rows.clear();
            rows.shrink_to_fit();
            const int left_child = grow(std::move(left), depth + 1);
            const int right_child = grow(std::move(right), depth + 1);
            nodes_[index].leaf = false;
            nodes_[index].feature = split.feature;
            nodes_[index].categorical = false;
            nodes_[index].threshold = split.threshold;
            nodes_[index].children = {left_child, right_child};
        }
        return index;
    }

    /// All feature indices, or a fresh random subset of features_per_split
    /// of them (sorted ascending) when a sampler is attached.
    std::vector<int> candidate_features() {
        const int d = static_cast<int>(x_.cols());
        std::vector<int> all(static_cast<std::size_t>(d));
        std::iota(all.begin(), all.end(), 0);
        if (!rng_ || features_per_split_ <= 0 || features_per_split_ >= d) return all;
        for (int i = 0; i < features_per_split_; ++i) {
            const auto j = i + static_cast<int>(rng_->next_index(
                                   static_cast<std::size_t>(d - i)));
            std::swap(all[static_cast<std::size_t>(i)], all[static_cast<std::size_t>(j)]);
        }
        all.resize(static_cast<std::size_t>(features_per_split_));
        std::sort(all.begin(), all.end());
        return all;
    }

    const Matrix& x_;
    const std::vector<int>& y_;
    DtHyperparams hp_;
    std::span<const FeatureKind> kinds_;
    int n_classes_;
    Rng* rng_;
    int features_per_split_;
    std::vector<DtNode> nodes_;
};

inline std::vector<FeatureKind> resolve_kinds(std::vector<FeatureKind> kinds,
                                              std::size_t d) {
    if (kinds.empty()) kinds.assign(d, FeatureKind::numeric);
    if (kinds.size() != d)
        throw DimensionMismatch("feature kind list does not match feature count");
    return kinds;
}

}  // namespace detail

/// Greedy recursive construction: at each node pick the feature (categorical
/// multiway, numeric best threshold) with maximal information gain; stop on
/// purity, non-positive gain, depth or sample limits.
inline DtModel train_dt(const Matrix& x, const std::vector<int>& y, DtHyperparams hp = {},
                        std::vector<FeatureKind> feature_kinds = {}) {
    if (x.rows() != y.size()) throw DimensionMismatch("feature/label row counts differ");
    if (x.rows() == 0) throw EmptyInput("no training rows");
    if (hp.min_samples < 1) throw BadConfig("min_samples must be >= 1");

    DtModel model;
    model.hp = hp;
    model.n_features = static_cast<int>(x.cols());
    model.feature_kinds = detail::resolve_kinds(std::move(feature_kinds), x.cols());
    int max_label = 0;
    for (int label : y) {
        if (label < 0) throw Error("negative class label");
        max_label = std::max(max_label, label);
    }
    model.n_classes = max_label + 1;

    std::vector<std::size_t> rows(x.rows());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    detail::TreeBuilder builder(x, y, hp, model.feature_kinds, model.n_classes);
    model.nodes = builder.build(std::move(rows));
    return model;
}

namespace detail {

inline int route_row(const DtModel& model, std::span<const double> row) {
    int index = 0;
    while (!model.nodes[static_cast<std::size_t>(index)].leaf) {
        const DtNode& node = model.nodes[static_cast<std::size_t>(index)];
        const double value = row[static_cast<std::size_t>(node.feature)];
        if (node.categorical) {
            const auto it =
                std::lower_bound(node.categories.begin(), node.categories.end(), value);
            if (it == node.categories.end() || *it != value)
                return node.label;  // unseen category: node majority fallback
            index = node.children[static_cast<std::size_t>(it - node.categories.begin())];
        } else {
            index = node.children[value <= node.threshold ? 0 : 1];
        }
    }
    return model.nodes[static_cast<std::size_t>(index)].label;
}

}  // namespace detail

inline std::vector<int> predict_dt(const DtModel& model, const Matrix& x) {
    detail::check_feature_count(static_cast<std::size_t>(model.n_features), x.cols());
    std::vector<int> labels(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i)
        labels[i] = detail::route_row(model, x.row(i));
    return labels;
}

/// Depth of the tree (root-only trees have depth 0).
inline int tree_depth(const DtModel& model) {
    std::vector<int> depth(model.nodes.size(), 0);
    int max_depth = 0;
    for (std::size_t i = 0; i < model.nodes.size(); ++i) {
        for (int child : model.nodes[i].children) {
            depth[static_cast<std::size_t>(child)] = depth[i] + 1;
            max_depth = std::max(max_depth, depth[i] + 1);
        }
    }
    return max_depth;
}

}  // namespace recml
