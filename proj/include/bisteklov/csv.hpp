#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>

namespace bisteklov::csv {

/// Real in 17 significant digits with '.' as decimal separator.
inline std::string real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string integer(const mpz_class& v) { return v.get_str(); }
inline std::string integer(long long v) { return std::to_string(v); }
inline std::string boolean(bool v) { return v ? "true" : "false"; }

/// Quotes a field when it contains a separator, quote or line break.
inline std::string field(std::string_view text) {
    if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline void row(std::ostream& os, std::initializer_list<std::string> fields) {
    bool first = true;
    for (const auto& f : fields) {
        if (!first) os << ',';
        first = false;
        os << field(f);
    }
    os << '\n';
}

}  // namespace bisteklov::csv
