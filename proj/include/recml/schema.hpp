#pragma once

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "recml/errors.hpp"

namespace recml {

/// Column roles. Only categorical and numeric columns become features;
/// identifier and freetext columns are dropped before training.
enum class ColumnKind { categorical, numeric, identifier, freetext };

inline std::string_view to_string(ColumnKind kind) {
    switch (kind) {
        case ColumnKind::categorical: return "categorical";
        case ColumnKind::numeric: return "numeric";
        case ColumnKind::identifier: return "identifier";
        case ColumnKind::freetext: return "freetext";
    }
    return "?";
}

inline ColumnKind column_kind_from_string(std::string_view text) {
    if (text == "categorical") return ColumnKind::categorical;
    if (text == "numeric") return ColumnKind::numeric;
    if (text == "identifier") return ColumnKind::identifier;
    if (text == "freetext") return ColumnKind::freetext;
    throw BadConfig("unknown column kind: '" + std::string(text) + "'");
}

struct Column {
    std::string name;
    ColumnKind kind;
    bool operator==(const Column&) const = default;
};

struct Schema {
    std::vector<Column> columns;
    std::string target_column;

    const Column* find(std::string_view name) const {
        for (const auto& col : columns)
            if (col.name == name) return &col;
        return nullptr;
    }

    /// Columns that become features: categorical or numeric, minus the target.
    std::vector<Column> feature_columns() const {
        std::vector<Column> out;
        for (const auto& col : columns) {
            if (col.name == target_column) continue;
            if (col.kind == ColumnKind::categorical || col.kind == ColumnKind::numeric)
                out.push_back(col);
        }
        return out;
    }

    void validate() const {
        if (columns.empty()) throw BadConfig("schema has no columns");
        std::unordered_set<std::string_view> seen;
        for (const auto& col : columns) {
            if (col.name.empty()) throw BadConfig("empty column name");
            if (!seen.insert(col.name).second)
                throw BadConfig("duplicate column name: '" + col.name + "'");
        }
        const Column* target = find(target_column);
        if (!target) throw BadConfig("target column '" + target_column + "' not in schema");
        if (target->kind != ColumnKind::categorical)
            throw BadConfig("target column '" + target_column + "' must be categorical");
    }

    /// The 11-column e-commerce survey schema. "product model" is the
    /// prediction target; quantity, price and order status are the features.
    static Schema default_survey() {
        Schema s;
        s.columns = {
            {"customer id", ColumnKind::identifier},
            {"name", ColumnKind::identifier},
            {"email", ColumnKind::identifier},
            {"product model", ColumnKind::categorical},
            {"product quantity", ColumnKind::numeric},
            {"product price", ColumnKind::numeric},
            {"customer address", ColumnKind::identifier},
            {"phone number", ColumnKind::identifier},
            {"order date", ColumnKind::identifier},
            {"order status", ColumnKind::categorical},
            {"customer feedback message", ColumnKind::freetext},
        };
        s.target_column = "product model";
        return s;
    }

    bool operator==(const Schema&) const = default;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

}  // namespace detail

/// Plain-text schema config: one "column name = kind" line per column, in
/// column order. Kind "target" marks the (categorical) prediction target.
/// '#' starts a comment; blank lines are ignored.
inline Schema parse_schema_config(std::string_view text) {
    Schema schema;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = std::min(text.find('\n', pos), text.size());
        std::string_view raw = text.substr(pos, eol - pos);
        pos = eol + 1;
        const std::size_t hash = raw.find('#');
        if (hash != std::string_view::npos) raw = raw.substr(0, hash);
        raw = detail::trim(raw);
        if (raw.empty()) {
            if (eol == text.size()) break;
            continue;
        }
        const std::size_t eq = raw.find('=');
        if (eq == std::string_view::npos)
            throw BadConfig("schema config line missing '=': '" + std::string(raw) + "'");
        const std::string name(detail::trim(raw.substr(0, eq)));
        const std::string_view kind = detail::trim(raw.substr(eq + 1));
        if (kind == "target") {
            if (!schema.target_column.empty())
                throw BadConfig("schema config names two targets");
            schema.columns.push_back({name, ColumnKind::categorical});
            schema.target_column = name;
        } else {
            schema.columns.push_back({name, column_kind_from_string(kind)});
        }
        if (eol == text.size()) break;
    }
    if (schema.target_column.empty()) throw BadConfig("schema config names no target");
    schema.validate();
    return schema;
}

}  // namespace recml
