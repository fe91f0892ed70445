#include "rvpipe/trace.hpp"

#include <cctype>
#include <charconv>
#include <istream>
#include <ostream>

namespace rvpipe {

namespace {

bool is_hex_string(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isxdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

uint64_t parse_hex(const std::string& s, size_t line, const char* field) {
    if (!is_hex_string(s) || s.size() > 16)
        throw ParseError(line, std::string("malformed hex ") + field + " field '" + s + "'");
    uint64_t v = 0;
    std::from_chars(s.data(), s.data() + s.size(), v, 16);
    return v;
}

std::string hex_u64(uint64_t v) {
    char buf[17];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v, 16);
    return std::string(buf, p);
}

std::string hex_fixed(uint32_t v, int digits) {
    static const char* d = "0123456789abcdef";
    std::string s(digits, '0');
    for (int i = digits - 1; i >= 0; --i) {
        s[i] = d[v & 0xF];
        v >>= 4;
    }
    return s;
}

struct RawLine {
    TraceEntry entry;
    std::string annotation;  // text after " @", empty if none
    bool has_annotation = false;
};

// Splits one non-comment line into pc, raw, disasm and (for the annotated
// format) the " @<cycle>" suffix.
RawLine parse_line(const std::string& line, size_t lineno, bool annotated) {
    RawLine out;

    std::string body = line;
    size_t at = annotated ? body.rfind(" @") : std::string::npos;
    if (at != std::string::npos) {
        std::string suffix = body.substr(at + 2);
        bool digits = !suffix.empty();
        for (char c : suffix)
            if (!std::isdigit(static_cast<unsigned char>(c))) digits = false;
        if (digits) {
            out.has_annotation = true;
            out.annotation = suffix;
            body = body.substr(0, at);
        }
    }

    size_t p = 0;
    auto skip_ws = [&] { while (p < body.size() && (body[p] == ' ' || body[p] == '\t')) ++p; };
    auto next_tok = [&] {
        skip_ws();
        size_t start = p;
        while (p < body.size() && body[p] != ' ' && body[p] != '\t') ++p;
        return body.substr(start, p - start);
    };

    std::string pc_tok = next_tok();
    std::string raw_tok = next_tok();
    if (pc_tok.empty() || raw_tok.empty())
        throw ParseError(lineno, "expected '<pc> <encoding> [disasm]'");

    out.entry.pc = parse_hex(pc_tok, lineno, "pc");

    if (raw_tok.size() != 4 && raw_tok.size() != 8)
        throw ParseError(lineno, "encoding must be 4 or 8 hex digits, got '" + raw_tok + "'");
    uint64_t raw = parse_hex(raw_tok, lineno, "encoding");
    bool uncompressed = (raw & 0x3) == 0x3;
    if (raw_tok.size() == 4 && uncompressed)
        throw ParseError(lineno, "4-digit encoding '" + raw_tok + "' has low bits 0b11 (32-bit length)");
    if (raw_tok.size() == 8 && !uncompressed)
        throw ParseError(lineno, "8-digit encoding '" + raw_tok + "' has low bits != 0b11 (16-bit length)");
    out.entry.raw = static_cast<uint32_t>(raw);

    skip_ws();
    out.entry.disasm = body.substr(p);
    // drop trailing blanks so write->parse round-trips
    while (!out.entry.disasm.empty() && (out.entry.disasm.back() == ' ' || out.entry.disasm.back() == '\t'))
        out.entry.disasm.pop_back();
    return out;
}

template <typename Fn>
void for_each_line(std::istream& in, Fn fn) {
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        size_t first = line.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        if (line[first] == '#') continue;
        fn(line, lineno);
    }
}

}  // namespace

std::vector<TraceEntry> parse_trace(std::istream& in) {
    std::vector<TraceEntry> entries;
    for_each_line(in, [&](const std::string& line, size_t lineno) {
        RawLine rl = parse_line(line, lineno, false);
        rl.entry.index = entries.size();
        entries.push_back(std::move(rl.entry));
    });
    return entries;
}

AnnotatedParseResult parse_annotated(std::istream& in) {
    AnnotatedParseResult res;
    for_each_line(in, [&](const std::string& line, size_t lineno) {
        RawLine rl = parse_line(line, lineno, true);
        if (!rl.has_annotation)
            throw ParseError(lineno, "missing ' @<commit cycle>' annotation");
        uint64_t cycle = 0;
        auto [p, ec] = std::from_chars(rl.annotation.data(),
                                       rl.annotation.data() + rl.annotation.size(), cycle, 10);
        if (ec != std::errc{} || p != rl.annotation.data() + rl.annotation.size())
            throw ParseError(lineno, "bad commit cycle '" + rl.annotation + "'");
        rl.entry.index = res.entries.size();
        if (!res.entries.empty() && cycle < res.entries.back().commit_cycle)
            res.warnings.push_back("line " + std::to_string(lineno) +
                                   ": commit cycle " + std::to_string(cycle) +
                                   " below previous " + std::to_string(res.entries.back().commit_cycle));
        res.entries.push_back(AnnotatedEntry{std::move(rl.entry), cycle});
    });
    return res;
}

std::string format_entry(const TraceEntry& e) {
    bool compressed = (e.raw & 0x3) != 0x3;
    std::string s = hex_u64(e.pc) + ' ' + hex_fixed(e.raw, compressed ? 4 : 8);
    if (!e.disasm.empty()) {
        s += ' ';
        s += e.disasm;
    }
    return s;
}

std::string format_annotated(const AnnotatedEntry& e) {
    return format_entry(e.entry) + " @" + std::to_string(e.commit_cycle);
}

void write_trace(const std::vector<TraceEntry>& entries, std::ostream& out) {
    for (const auto& e : entries) out << format_entry(e) << '\n';
}

void write_annotated(const std::vector<AnnotatedEntry>& entries, std::ostream& out) {
    for (const auto& e : entries) out << format_annotated(e) << '\n';
}

}  // namespace rvpipe
