#pragma once

// Deterministic cell formatting shared by the CLI and its regression tests:
// reals carry 12 significant digits, CSV rows are comma-joined with LF.

#include <cstdio>
#include <string>
#include <vector>

namespace nonres {

inline std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline std::string format_int(std::uint64_t v) { return std::to_string(v); }

inline std::string csv_join(const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) line += ',';
        line += cells[i];
    }
    line += '\n';
    return line;
}

}  // namespace nonres
