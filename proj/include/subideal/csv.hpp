#pragma once

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "subideal/types.hpp"

namespace subideal {

// Shortest round-trip decimal form, locale-independent.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
}

// '#'-prefixed key=value lines carried above the header of every output file.
using Metadata = std::vector<std::pair<std::string, std::string>>;

inline void write_metadata(std::ostream& os, const Metadata& meta) {
    for (const auto& [k, v] : meta) os << "# " << k << "=" << v << "\n";
}

inline void write_signal_csv(std::ostream& os, const SampledSignal& x, const Metadata& meta = {}) {
    write_metadata(os, meta);
    os << "t,value\n";
    for (Index j = 0; j < x.size(); ++j)
        os << format_double(x.time(j)) << "," << format_double(x.values[j]) << "\n";
}

namespace detail {

inline bool parse_fields(const std::string& line, std::vector<double>& out) {
    out.clear();
    const char* p = line.c_str();
    while (true) {
        char* end = nullptr;
        const double v = std::strtod(p, &end);
        if (end == p) return false;
        out.push_back(v);
        while (*end == ' ' || *end == '\t') ++end;
        if (*end == '\0') return true;
        if (*end != ',') return false;
        p = end + 1;
    }
}

inline std::string strip(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace detail

// Reads the `t,value` format written above. Comment lines are skipped; the
// grid must be uniform to 1e-9 relative and hold at least two samples.
inline SampledSignal read_signal_csv(std::istream& is) {
    std::string line;
    bool seen_header = false;
    std::vector<double> ts, vs, fields;
    while (std::getline(is, line)) {
        const std::string s = detail::strip(line);
        if (s.empty() || s[0] == '#') continue;
        if (!seen_header) {
            if (s != "t,value")
                throw std::invalid_argument("signal csv: expected header 't,value'");
            seen_header = true;
            continue;
        }
        if (!detail::parse_fields(s, fields) || fields.size() != 2)
            throw std::invalid_argument("signal csv: malformed row '" + s + "'");
        ts.push_back(fields[0]);
        vs.push_back(fields[1]);
    }
    if (!seen_header)
        throw std::invalid_argument("signal csv: missing header 't,value'");
    if (ts.size() < 2)
        throw std::invalid_argument("signal csv: need at least two samples");

    const double dt = ts[1] - ts[0];
    if (!(dt > 0.0))
        throw std::invalid_argument("signal csv: time column must be strictly increasing");
    for (std::size_t j = 1; j < ts.size(); ++j) {
        const double step = ts[j] - ts[j - 1];
        if (std::abs(step - dt) > 1e-9 * std::abs(dt))
            throw std::invalid_argument("signal csv: non-uniform sampling");
    }
    ArrayXd v(static_cast<Index>(vs.size()));
    for (std::size_t j = 0; j < vs.size(); ++j) v[static_cast<Index>(j)] = vs[j];
    return SampledSignal(ts[0], dt, std::move(v));
}

}  // namespace subideal
