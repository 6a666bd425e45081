#pragma once

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "engine.hpp"

namespace mecsim {

// Trace line format, one processed event per line:
//   <fire_at seconds, 6 decimals>\t<kind>\t<key=value key=value ...>
// Payload pairs are sorted by key and separated by single spaces.

inline std::string trace_line(const TraceRecord& rec) {
    std::string out = format_fixed(rec.fire_at.secs, 6);
    out += '\t';
    out += to_string(rec.kind);
    out += '\t';
    bool first = true;
    for (const auto& [k, v] : rec.payload) {
        if (!first) out += ' ';
        out += k;
        out += '=';
        out += v;
        first = false;
    }
    return out;
}

inline void write_trace(std::ostream& os, const std::vector<TraceRecord>& trace) {
    for (const auto& rec : trace) os << trace_line(rec) << '\n';
}

inline std::string serialize_trace(const std::vector<TraceRecord>& trace) {
    std::ostringstream oss;
    write_trace(oss, trace);
    return oss.str();
}

struct TraceParseError : std::runtime_error {
    int line;
    TraceParseError(int line_no, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line_no) + ": " + msg), line(line_no) {}
};

namespace detail {

inline double parse_double(std::string_view s, int line_no, const char* what) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw TraceParseError(line_no, std::string("malformed ") + what + " '" + std::string(s) + "'");
    return value;
}

}  // namespace detail

inline TraceRecord parse_trace_line(std::string_view line, int line_no) {
    auto tab1 = line.find('\t');
    auto tab2 = tab1 == std::string_view::npos ? tab1 : line.find('\t', tab1 + 1);
    if (tab1 == std::string_view::npos || tab2 == std::string_view::npos)
        throw TraceParseError(line_no, "expected three tab-separated fields");

    TraceRecord rec;
    rec.fire_at = SimTime{detail::parse_double(line.substr(0, tab1), line_no, "timestamp")};
    auto kind = event_kind_from(line.substr(tab1 + 1, tab2 - tab1 - 1));
    if (!kind)
        throw TraceParseError(line_no, "unknown event kind '" +
                                           std::string(line.substr(tab1 + 1, tab2 - tab1 - 1)) + "'");
    rec.kind = *kind;

    std::string_view payload = line.substr(tab2 + 1);
    std::string last_key;
    while (!payload.empty()) {
        auto space = payload.find(' ');
        std::string_view pair = payload.substr(0, space);
        payload = space == std::string_view::npos ? std::string_view{} : payload.substr(space + 1);
        auto eq = pair.find('=');
        if (eq == std::string_view::npos || eq == 0)
            throw TraceParseError(line_no, "malformed payload pair '" + std::string(pair) + "'");
        std::string key(pair.substr(0, eq));
        if (!last_key.empty() && !(last_key < key))
            throw TraceParseError(line_no, "payload keys not sorted ('" + last_key + "' before '" + key + "')");
        rec.payload.emplace(key, std::string(pair.substr(eq + 1)));
        last_key = std::move(key);
    }
    return rec;
}

// Parses a serialized trace and checks the processing-order invariants:
// timestamps never decrease and every line is well-formed. Sequence numbers
// are implicit in line order.
inline std::vector<TraceRecord> parse_trace(std::istream& is) {
    std::vector<TraceRecord> out;
    std::string line;
    int line_no = 0;
    SimTime last{};
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) throw TraceParseError(line_no, "blank line");
        TraceRecord rec = parse_trace_line(line, line_no);
        if (!out.empty() && rec.fire_at < last)
            throw TraceParseError(line_no, "timestamp decreases");
        last = rec.fire_at;
        rec.sequence = static_cast<std::uint64_t>(line_no - 1);
        out.push_back(std::move(rec));
    }
    return out;
}

}  // namespace mecsim
