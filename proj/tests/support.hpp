#pragma once

// Shared helpers for building synthetic traces in tests. The encoders pack
// fields independently of the decoder; they exist so tests can state
// operands instead of raw hex.

#include <cstdint>
#include <string>
#include <vector>

#include "rvpipe/trace.hpp"

namespace testsup {

inline uint32_t enc_r(unsigned f7, unsigned rs2, unsigned rs1, unsigned f3, unsigned rd,
                      unsigned op = 0x33) {
    return f7 << 25 | rs2 << 20 | rs1 << 15 | f3 << 12 | rd << 7 | op;
}

inline uint32_t enc_i(int imm, unsigned rs1, unsigned f3, unsigned rd, unsigned op) {
    return (static_cast<uint32_t>(imm) & 0xFFF) << 20 | rs1 << 15 | f3 << 12 | rd << 7 | op;
}

inline uint32_t enc_s(int imm, unsigned rs2, unsigned rs1, unsigned f3, unsigned op = 0x23) {
    uint32_t u = static_cast<uint32_t>(imm);
    return ((u >> 5) & 0x7F) << 25 | rs2 << 20 | rs1 << 15 | f3 << 12 | (u & 0x1F) << 7 | op;
}

inline uint32_t enc_b(int imm, unsigned rs2, unsigned rs1, unsigned f3, unsigned op = 0x63) {
    uint32_t u = static_cast<uint32_t>(imm) & 0x1FFF;
    return ((u >> 12) & 1) << 31 | ((u >> 5) & 0x3F) << 25 | rs2 << 20 | rs1 << 15 | f3 << 12 |
           ((u >> 1) & 0xF) << 8 | ((u >> 11) & 1) << 7 | op;
}

inline uint32_t enc_j(int imm, unsigned rd, unsigned op = 0x6F) {
    uint32_t u = static_cast<uint32_t>(imm) & 0x1FFFFF;
    return ((u >> 20) & 1) << 31 | ((u >> 1) & 0x3FF) << 21 | ((u >> 11) & 1) << 20 |
           ((u >> 12) & 0xFF) << 12 | rd << 7 | op;
}

inline uint32_t add_op(unsigned rd, unsigned rs1, unsigned rs2) { return enc_r(0, rs2, rs1, 0, rd); }
inline uint32_t mul_op(unsigned rd, unsigned rs1, unsigned rs2) { return enc_r(1, rs2, rs1, 0, rd); }
inline uint32_t lw_op(unsigned rd, unsigned rs1, int off = 0) { return enc_i(off, rs1, 2, rd, 0x03); }
inline uint32_t sw_op(unsigned rs2, unsigned rs1, int off = 0) { return enc_s(off, rs2, rs1, 2); }
inline uint32_t beq_op(unsigned rs1, unsigned rs2, int off) { return enc_b(off, rs2, rs1, 0); }
inline uint32_t jal_op(unsigned rd, int off) { return enc_j(off, rd); }
inline uint32_t jalr_op(unsigned rd, unsigned rs1) { return enc_i(0, rs1, 0, rd, 0x67); }

// Builds a trace with a consistent pc stream: entries advance by their
// length unless the previous instruction redirected the flow.
class TraceBuilder {
public:
    explicit TraceBuilder(uint64_t start_pc = 0x80000000) : pc_(start_pc) {}

    TraceBuilder& add(uint32_t raw, const std::string& disasm = "") {
        rvpipe::TraceEntry e;
        e.pc = pc_;
        e.raw = raw;
        e.disasm = disasm;
        e.index = entries_.size();
        entries_.push_back(e);
        pc_ += (raw & 0x3) != 0x3 ? 2 : 4;
        return *this;
    }

    // Redirects the pc of the NEXT entry (taken branch/jump/return target).
    TraceBuilder& redirect(uint64_t target) {
        pc_ = target;
        return *this;
    }

    uint64_t next_pc() const { return pc_; }
    const std::vector<rvpipe::TraceEntry>& entries() const { return entries_; }

private:
    uint64_t pc_;
    std::vector<rvpipe::TraceEntry> entries_;
};

}  // namespace testsup
