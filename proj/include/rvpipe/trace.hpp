#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace rvpipe {

// One dynamic instruction from the input trace.
struct TraceEntry {
    uint64_t pc = 0;
    uint32_t raw = 0;       // low 16 bits used when compressed
    std::string disasm;     // carried verbatim, never interpreted
    size_t index = 0;       // 0-based position in the trace

    bool operator==(const TraceEntry&) const = default;
};

// A trace entry plus the cycle its instruction committed.
struct AnnotatedEntry {
    TraceEntry entry;
    uint64_t commit_cycle = 0;

    bool operator==(const AnnotatedEntry&) const = default;
};

struct ParseError : std::runtime_error {
    ParseError(size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line(line) {}
    size_t line;
};

struct AnnotatedParseResult {
    std::vector<AnnotatedEntry> entries;
    std::vector<std::string> warnings;
};

// Trace format, one instruction per line:
//   <pc hex> <raw 4-or-8 hex digits> [<disasm: rest of line>]
// '#' starts a comment, blank lines are skipped. Compressed encodings are
// written with exactly 4 hex digits, uncompressed with 8; the parser
// cross-checks the digit count against the low-2-bits length rule.
std::vector<TraceEntry> parse_trace(std::istream& in);

// Annotated format: same line plus " @<commit cycle, decimal>".
AnnotatedParseResult parse_annotated(std::istream& in);

void write_trace(const std::vector<TraceEntry>& entries, std::ostream& out);
void write_annotated(const std::vector<AnnotatedEntry>& entries, std::ostream& out);

// Canonical single-line forms (no trailing newline).
std::string format_entry(const TraceEntry& e);
std::string format_annotated(const AnnotatedEntry& e);

}  // namespace rvpipe
