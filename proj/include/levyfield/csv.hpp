#ifndef LEVYFIELD_CSV_HPP
#define LEVYFIELD_CSV_HPP

#include <cstdio>
#include <string>

namespace levyfield::csv {

/// 17 significant digits: round-trips every double bit-exactly.
inline std::string full(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline std::string sig(double x, int digits) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, x);
    return buf;
}

} // namespace levyfield::csv

#endif
