#pragma once

#include <cstdint>
#include <optional>

namespace rvpipe {

enum class OpClass {
    Alu,
    Mul,           // multiplier unit class; divisions share it
    Load,
    Store,
    Branch,        // conditional
    JumpDirect,    // jal, c.jal, c.j
    JumpIndirect,  // jalr family
    Csr,           // csr/fence/system
    NopOther,      // unmodeled or unrecognized
};

const char* to_string(OpClass c);

// Functional-unit class, operand registers and control-flow attributes of
// one encoding. Semantics (immediates, addresses) are never evaluated.
struct DecodedOp {
    OpClass cls = OpClass::NopOther;
    std::optional<uint8_t> rd;   // x0 writes normalized to none
    std::optional<uint8_t> rs1;
    std::optional<uint8_t> rs2;
    uint8_t length_bytes = 4;
    bool is_call = false;    // jal/jalr with rd in {x1, x5}
    bool is_return = false;  // jalr with rs1 in {x1, x5}, rs1 != rd
    bool unknown = false;    // decode warning: NopOther fallback was taken

    bool operator==(const DecodedOp&) const = default;
};

// RV32IMC + Zba/Zbb/Zbc/Zbs + CSR/system classifier. Unrecognized and
// floating-point encodings classify as NopOther with the warning flag set;
// the timing model never aborts on them.
DecodedOp decode(uint32_t raw);

unsigned insn_length(uint32_t raw);

}  // namespace rvpipe
