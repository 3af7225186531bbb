#pragma once

#include <charconv>
#include <cmath>
#include <string>
#include <string_view>
#include <system_error>

#include "recml/errors.hpp"

namespace recml {

/// Shortest decimal string that parses back to exactly `v`.
inline std::string shortest_repr(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

/// Accuracy-style percentage, e.g. 0.998 -> "99.8%".
inline std::string format_percent(double ratio) {
    return shortest_repr(ratio * 100.0) + "%";
}

/// Strict full-string double parse. Accepts a trailing '%' (value is then
/// divided by 100). Non-finite results are rejected.
inline double parse_double(std::string_view text) {
    bool percent = !text.empty() && text.back() == '%';
    if (percent) text.remove_suffix(1);
    double value = 0.0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
        throw ParseError("not a number: '" + std::string(text) + "'");
    if (!std::isfinite(value))
        throw ParseError("non-finite value: '" + std::string(text) + "'");
    return percent ? value / 100.0 : value;
}

}  // namespace recml
