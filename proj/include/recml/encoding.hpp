#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "recml/csv.hpp"
#include "recml/matrix.hpp"
#include "recml/schema.hpp"

namespace recml {

/// Bijection between category strings and integer codes 0..k-1. Codes are
/// assigned in ascending lexicographic order of the category strings.
class LabelEncoder {
public:
    LabelEncoder() = default;

    static LabelEncoder fit(std::span<const std::string> column) {
        if (column.empty()) throw EmptyInput("cannot fit label encoder on empty column");
        std::set<std::string> distinct(column.begin(), column.end());
        LabelEncoder enc;
        enc.categories_.assign(distinct.begin(), distinct.end());
        return enc;
    }

    int encode(const std::string& category) const {
        const auto it = std::lower_bound(categories_.begin(), categories_.end(), category);
        if (it == categories_.end() || *it != category)
            throw UnseenCategory("unseen category: '" + category + "'");
        return static_cast<int>(it - categories_.begin());
    }

    const std::string& decode(int code) const {
        if (code < 0 || static_cast<std::size_t>(code) >= categories_.size())
            throw Error("label code " + std::to_string(code) + " out of range");
        return categories_[static_cast<std::size_t>(code)];
    }

    std::size_t size() const { return categories_.size(); }
    const std::vector<std::string>& categories() const { return categories_; }

    bool operator==(const LabelEncoder&) const = default;

private:
    std::vector<std::string> categories_;  // sorted; code == index
};

/// Everything needed to re-apply a fitted encoding to new tables: the schema,
/// the per-column encoders and the target encoder.
struct DatasetCodec {
    Schema schema;
    std::vector<std::string> feature_names;  // schema order, target excluded
    std::vector<FeatureKind> feature_kinds;
    std::map<std::string, LabelEncoder> feature_encoders;  // categorical features only
    LabelEncoder target_encoder;

    Matrix encode_features(const RawTable& table) const;
    std::vector<int> encode_target(const RawTable& table) const;
    const std::string& decode_label(int code) const { return target_encoder.decode(code); }

    bool operator==(const DatasetCodec&) const = default;
};

/// Label-encoded feature matrix plus integer class targets.
struct EncodedDataset {
    Matrix features;          // n x d
    std::vector<int> target;  // length n, values in [0, n_classes)
    DatasetCodec codec;
    int n_classes = 0;

    std::size_t n() const { return features.rows(); }
    std::size_t d() const { return features.cols(); }
};

namespace detail {

inline double parse_numeric_cell(const std::string& cell, const std::string& column,
                                 std::size_t row) {
    double value = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc() || res.ptr != end)
        throw ParseError("column '" + column + "', row " + std::to_string(row + 1) +
                         ": not a number: '" + cell + "'");
    if (!std::isfinite(value))
        throw ParseError("column '" + column + "', row " + std::to_string(row + 1) +
                         ": non-finite value: '" + cell + "'");
    return value;
}

/// Maps each schema column to its position in the table header. The header
/// must contain exactly the schema's columns (any order, no extras).
inline std::vector<std::size_t> resolve_columns(const RawTable& table, const Schema& schema) {
    if (table.header.size() != schema.columns.size())
        throw SchemaMismatch("table has " + std::to_string(table.header.size()) +
                             " columns, schema expects " +
                             std::to_string(schema.columns.size()));
    std::vector<std::size_t> positions;
    positions.reserve(schema.columns.size());
    for (const auto& col : schema.columns) {
        const auto it = std::find(table.header.begin(), table.header.end(), col.name);
        if (it == table.header.end())
            throw SchemaMismatch("column '" + col.name + "' missing from table header");
        positions.push_back(static_cast<std::size_t>(it - table.header.begin()));
    }
    return positions;
}

/// Header position of one named column; used when only a subset of the
/// schema must be present (prediction-time feature encoding).
inline std::size_t find_column(const RawTable& table, const std::string& name) {
    const auto it = std::find(table.header.begin(), table.header.end(), name);
    if (it == table.header.end())
        throw SchemaMismatch("column '" + name + "' missing from table header");
    return static_cast<std::size_t>(it - table.header.begin());
}

}  // namespace detail

inline Matrix DatasetCodec::encode_features(const RawTable& table) const {
    std::vector<std::size_t> positions;
    positions.reserve(feature_names.size());
    for (const auto& name : feature_names)
        positions.push_back(detail::find_column(table, name));

    Matrix features(table.n_rows(), feature_names.size());
    for (std::size_t i = 0; i < table.n_rows(); ++i) {
        const auto& row = table.rows[i];
        for (std::size_t j = 0; j < feature_names.size(); ++j) {
            const std::string& cell = row[positions[j]];
            if (feature_kinds[j] == FeatureKind::categorical) {
                features(i, j) = feature_encoders.at(feature_names[j]).encode(cell);
            } else {
                features(i, j) = detail::parse_numeric_cell(cell, feature_names[j], i);
            }
        }
    }
    return features;
}

inline std::vector<int> DatasetCodec::encode_target(const RawTable& table) const {
    const std::size_t pos = detail::find_column(table, schema.target_column);
    std::vector<int> target;
    target.reserve(table.n_rows());
    for (const auto& row : table.rows) target.push_back(target_encoder.encode(row[pos]));
    return target;
}

/// Fits encoders on `table` under `schema` and produces the encoded dataset:
/// categorical features become integer codes, numeric features pass through,
/// identifier/freetext columns are dropped, the target column is encoded
/// separately.
inline EncodedDataset encode_dataset(const RawTable& table, const Schema& schema) {
    schema.validate();
    const auto positions = detail::resolve_columns(table, schema);
    if (table.rows.empty()) throw EmptyInput("table has no data rows");

    EncodedDataset ds;
    ds.codec.schema = schema;

    std::vector<std::size_t> feature_positions;
    for (std::size_t c = 0; c < schema.columns.size(); ++c) {
        const Column& col = schema.columns[c];
        if (col.name == schema.target_column) continue;
        if (col.kind != ColumnKind::categorical && col.kind != ColumnKind::numeric) continue;
        ds.codec.feature_names.push_back(col.name);
        ds.codec.feature_kinds.push_back(col.kind == ColumnKind::categorical
                                             ? FeatureKind::categorical
                                             : FeatureKind::numeric);
        feature_positions.push_back(positions[c]);
    }

    // Fit one encoder per categorical feature column.
    std::vector<std::string> buffer(table.n_rows());
    for (std::size_t j = 0; j < ds.codec.feature_names.size(); ++j) {
        if (ds.codec.feature_kinds[j] != FeatureKind::categorical) continue;
        for (std::size_t i = 0; i < table.n_rows(); ++i)
            buffer[i] = table.rows[i][feature_positions[j]];
        ds.codec.feature_encoders[ds.codec.feature_names[j]] = LabelEncoder::fit(buffer);
    }

    const std::size_t target_pos = detail::find_column(table, schema.target_column);
    for (std::size_t i = 0; i < table.n_rows(); ++i) buffer[i] = table.rows[i][target_pos];
    ds.codec.target_encoder = LabelEncoder::fit(buffer);
    if (ds.codec.target_encoder.size() < 2)
        throw DegenerateTarget("target column '" + schema.target_column +
                               "' has a single distinct value");

    ds.features = ds.codec.encode_features(table);
    ds.target = ds.codec.encode_target(table);
    ds.n_classes = static_cast<int>(ds.codec.target_encoder.size());
    return ds;
}

}  // namespace recml
