#pragma once

// Minimal line-oriented CSV reading for the fixed pipeline schemas.
// Fields never contain commas or quotes, so a plain split is enough;
// anything fancier belongs to the producer of the files.

#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "tokentopo/ingest.hpp"

namespace tokentopo::ingest::detail {

inline std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return fields;
}

inline std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

/// Opens `path`, checks the exact `expected_header`, and calls `row` with
/// (line_number, fields) for every non-empty data line.
inline void for_each_row(const std::string& path, const std::string& expected_header,
                         const std::function<void(std::size_t, const std::vector<std::string>&)>& row) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open input file: " + path);

    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw ParseError(path, 1, "missing header");
    ++line_no;
    if (strip_cr(line) != expected_header)
        throw ParseError(path, 1, "expected header '" + expected_header + "', got '" + line + "'");

    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        row(line_no, split_fields(line));
    }
}

/// Strict full-string parse helpers; reject partial matches like "1.5x".
inline bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    try {
        std::size_t consumed = 0;
        out = std::stod(s, &consumed);
        return consumed == s.size();
    } catch (const std::exception&) {
        return false;
    }
}

inline bool parse_int64(const std::string& s, std::int64_t& out) {
    if (s.empty()) return false;
    try {
        std::size_t consumed = 0;
        out = std::stoll(s, &consumed);
        return consumed == s.size();
    } catch (const std::exception&) {
        return false;
    }
}

}  // namespace tokentopo::ingest::detail
