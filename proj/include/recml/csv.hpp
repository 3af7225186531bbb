#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "recml/errors.hpp"
#include "recml/io.hpp"

namespace recml {

/// Parsed tabular text data: a header and string-valued rows, every row with
/// exactly header.size() fields.
struct RawTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t n_rows() const { return rows.size(); }
    std::size_t n_cols() const { return header.size(); }

    bool operator==(const RawTable&) const = default;
};

/// RFC-4180 CSV parser: comma delimiter, double-quote quoting with ""
/// escapes, quoted fields may contain commas and newlines. Accepts \n and
/// \r\n record ends. First record is the header.
inline RawTable parse_csv(std::string_view text) {
    if (text.empty()) throw EmptyInput("empty CSV input");

    std::vector<std::vector<std::string>> records;
    std::vector<std::string> fields;
    std::string field;
    std::vector<std::size_t> record_lines;  // physical line where each record starts

    std::size_t line = 1;
    std::size_t record_start_line = 1;
    bool in_quotes = false;
    bool field_was_quoted = false;
    bool at_field_start = true;

    auto end_field = [&] {
        fields.push_back(std::move(field));
        field.clear();
        at_field_start = true;
        field_was_quoted = false;
    };
    auto end_record = [&] {
        end_field();
        records.push_back(std::move(fields));
        record_lines.push_back(record_start_line);
        fields.clear();
        record_start_line = line;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field += c;
            }
            continue;
        }
        switch (c) {
            case '"':
                if (at_field_start) {
                    in_quotes = true;
                    field_was_quoted = true;
                    at_field_start = false;
                } else {
                    throw ParseError(field_was_quoted ? "text after closing quote"
                                                      : "quote inside unquoted field",
                                     record_start_line);
                }
                break;
            case ',':
                end_field();
                break;
            case '\r':
                if (i + 1 < text.size() && text[i + 1] == '\n') break;  // consumed below
                throw ParseError("bare carriage return", record_start_line);
            case '\n':
                ++line;
                end_record();
                break;
            default:
                field += c;
                at_field_start = false;
                break;
        }
    }
    if (in_quotes) throw ParseError("unterminated quoted field", record_start_line);
    // Final record without trailing newline.
    if (!field.empty() || !fields.empty() || field_was_quoted) end_record();

    if (records.empty()) throw EmptyInput("no header record");

    RawTable table;
    table.header = std::move(records.front());
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() != table.header.size())
            throw ParseError("ragged row: expected " + std::to_string(table.header.size()) +
                                 " fields, got " + std::to_string(records[r].size()),
                             record_lines[r]);
        table.rows.push_back(std::move(records[r]));
    }
    return table;
}

namespace detail {

inline void write_csv_field(std::string& out, const std::string& value) {
    const bool needs_quotes =
        value.find_first_of(",\"\n\r") != std::string::npos;
    if (!needs_quotes) {
        out += value;
        return;
    }
    out += '"';
    for (char c : value) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
}

}  // namespace detail

inline std::string write_csv(const RawTable& table) {
    std::string out;
    auto write_record = [&](const std::vector<std::string>& record) {
        for (std::size_t i = 0; i < record.size(); ++i) {
            if (i) out += ',';
            detail::write_csv_field(out, record[i]);
        }
        out += '\n';
    };
    write_record(table.header);
    for (const auto& row : table.rows) write_record(row);
    return out;
}

inline RawTable load_table(const std::filesystem::path& path) {
    return parse_csv(read_file(path));
}

inline void save_table(const std::filesystem::path& path, const RawTable& table) {
    write_file_atomic(path, write_csv(table));
}

}  // namespace recml
