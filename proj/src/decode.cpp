#include "rvpipe/decode.hpp"

namespace rvpipe {

const char* to_string(OpClass c) {
    switch (c) {
        case OpClass::Alu: return "alu";
        case OpClass::Mul: return "mul";
        case OpClass::Load: return "load";
        case OpClass::Store: return "store";
        case OpClass::Branch: return "branch";
        case OpClass::JumpDirect: return "jump_direct";
        case OpClass::JumpIndirect: return "jump_indirect";
        case OpClass::Csr: return "csr";
        case OpClass::NopOther: return "nop_other";
    }
    return "?";
}

unsigned insn_length(uint32_t raw) {
    return (raw & 0x3u) != 0x3u ? 2 : 4;
}

namespace {

constexpr bool is_link_reg(unsigned r) { return r == 1 || r == 5; }

struct Builder {
    DecodedOp op;

    Builder& cls(OpClass c) { op.cls = c; return *this; }
    Builder& rd(unsigned r) {
        if (r != 0) op.rd = static_cast<uint8_t>(r);
        return *this;
    }
    Builder& rs1(unsigned r) { op.rs1 = static_cast<uint8_t>(r); return *this; }
    Builder& rs2(unsigned r) { op.rs2 = static_cast<uint8_t>(r); return *this; }
    Builder& unknown() {
        op = DecodedOp{};
        op.cls = OpClass::NopOther;
        op.unknown = true;
        return *this;
    }
};

DecodedOp decode32(uint32_t raw) {
    const unsigned opcode = raw & 0x7F;
    const unsigned f3 = (raw >> 12) & 0x7;
    const unsigned f7 = (raw >> 25) & 0x7F;
    const unsigned rd_f = (raw >> 7) & 0x1F;
    const unsigned rs1_f = (raw >> 15) & 0x1F;
    const unsigned rs2_f = (raw >> 20) & 0x1F;

    Builder b;
    switch (opcode) {
        case 0x37:  // lui
        case 0x17:  // auipc
            b.cls(OpClass::Alu).rd(rd_f);
            break;
        case 0x6F:  // jal
            b.cls(OpClass::JumpDirect).rd(rd_f);
            b.op.is_call = is_link_reg(rd_f);
            break;
        case 0x67:  // jalr
            if (f3 != 0) return Builder{}.unknown().op;
            b.cls(OpClass::JumpIndirect).rd(rd_f).rs1(rs1_f);
            b.op.is_call = is_link_reg(rd_f);
            b.op.is_return = is_link_reg(rs1_f) && rs1_f != rd_f;
            break;
        case 0x63:  // beq/bne/blt/bge/bltu/bgeu
            if (f3 == 2 || f3 == 3) return Builder{}.unknown().op;
            b.cls(OpClass::Branch).rs1(rs1_f).rs2(rs2_f);
            break;
        case 0x03:  // lb/lh/lw/lbu/lhu
            if (f3 == 3 || f3 == 6 || f3 == 7) return Builder{}.unknown().op;
            b.cls(OpClass::Load).rd(rd_f).rs1(rs1_f);
            break;
        case 0x23:  // sb/sh/sw
            if (f3 > 2) return Builder{}.unknown().op;
            b.cls(OpClass::Store).rs1(rs1_f).rs2(rs2_f);
            break;
        case 0x13: {  // op-imm, incl. Zbb/Zbs immediate forms
            bool ok = true;
            if (f3 == 1) {
                // slli / bseti / bclri / binvi / clz ctz cpop sext.b sext.h
                switch (f7) {
                    case 0x00: case 0x14: case 0x24: case 0x34: break;
                    case 0x30: ok = rs2_f <= 2 || rs2_f == 4 || rs2_f == 5; break;
                    default: ok = false;
                }
            } else if (f3 == 5) {
                // srli / srai / bexti / rori / rev8 / orc.b
                switch (f7) {
                    case 0x00: case 0x20: case 0x24: case 0x30: break;
                    case 0x34: ok = rs2_f == 0x18; break;
                    case 0x14: ok = rs2_f == 0x07; break;
                    default: ok = false;
                }
            }
            if (!ok) return Builder{}.unknown().op;
            b.cls(OpClass::Alu).rd(rd_f).rs1(rs1_f);
            break;
        }
        case 0x33: {  // op: base, M, Zba/Zbb/Zbc/Zbs
            OpClass cls = OpClass::Alu;
            bool ok = true;
            switch (f7) {
                case 0x01: cls = OpClass::Mul; break;  // mul*/div*/rem*
                case 0x00: break;
                case 0x20: ok = f3 == 0 || f3 >= 4; break;      // sub sra xnor orn andn
                case 0x10: ok = f3 == 2 || f3 == 4 || f3 == 6; break;  // sh1add..sh3add
                case 0x05: ok = f3 >= 1; break;                 // clmul* min* max*
                case 0x30: ok = f3 == 1 || f3 == 5; break;      // rol ror
                case 0x24: ok = f3 == 1 || f3 == 5; break;      // bclr bext
                case 0x34: ok = f3 == 1; break;                 // binv
                case 0x14: ok = f3 == 1; break;                 // bset
                case 0x04: ok = f3 == 4 && rs2_f == 0; break;   // zext.h
                default: ok = false;
            }
            if (!ok) return Builder{}.unknown().op;
            b.cls(cls).rd(rd_f).rs1(rs1_f).rs2(rs2_f);
            break;
        }
        case 0x0F:  // fence / fence.i
            if (f3 > 1) return Builder{}.unknown().op;
            b.cls(OpClass::Csr).rd(rd_f).rs1(rs1_f);
            break;
        case 0x73: {  // system
            if (f3 == 1 || f3 == 2 || f3 == 3) {
                b.cls(OpClass::Csr).rd(rd_f).rs1(rs1_f);  // csrrw/csrrs/csrrc
            } else if (f3 == 5 || f3 == 6 || f3 == 7) {
                b.cls(OpClass::Csr).rd(rd_f);  // csrr*i: uimm in the rs1 slot
            } else if (f3 == 0) {
                const unsigned f12 = raw >> 20;
                if (f12 == 0x000 || f12 == 0x001 || f12 == 0x102 || f12 == 0x302 ||
                    f12 == 0x105) {
                    b.cls(OpClass::Csr);  // ecall/ebreak/sret/mret/wfi
                } else if (f7 == 0x09) {
                    b.cls(OpClass::Csr).rs1(rs1_f).rs2(rs2_f);  // sfence.vma
                } else {
                    return Builder{}.unknown().op;
                }
            } else {
                return Builder{}.unknown().op;
            }
            break;
        }
        default:
            // Floating-point opcodes (0x07, 0x27, 0x43..0x4F, 0x53), atomics
            // and anything unrecognized: unmodeled.
            return Builder{}.unknown().op;
    }
    b.op.length_bytes = 4;
    return b.op;
}

DecodedOp decode16(uint32_t c) {
    const unsigned quadrant = c & 0x3;
    const unsigned f3 = (c >> 13) & 0x7;
    const unsigned r_full = (c >> 7) & 0x1F;   // CI/CR rd/rs1 field
    const unsigned r2_full = (c >> 2) & 0x1F;  // CR rs2 field
    const unsigned r1c = 8 + ((c >> 7) & 0x7);  // rs1'/rd'
    const unsigned r2c = 8 + ((c >> 2) & 0x7);  // rs2'/rd'
    const unsigned bit12 = (c >> 12) & 0x1;

    Builder b;
    if (quadrant == 0) {
        switch (f3) {
            case 0:  // c.addi4spn
                if ((c & 0xFFFF) == 0) return Builder{}.unknown().op;
                b.cls(OpClass::Alu).rd(r2c).rs1(2);
                break;
            case 2:  // c.lw
                b.cls(OpClass::Load).rd(r2c).rs1(r1c);
                break;
            case 6:  // c.sw
                b.cls(OpClass::Store).rs1(r1c).rs2(r2c);
                break;
            default:  // c.fld/c.flw/c.fsd/c.fsw and reserved
                return Builder{}.unknown().op;
        }
    } else if (quadrant == 1) {
        switch (f3) {
            case 0:  // c.addi (c.nop when rd = x0)
                b.cls(OpClass::Alu).rd(r_full).rs1(r_full);
                break;
            case 1:  // c.jal (RV32)
                b.cls(OpClass::JumpDirect).rd(1);
                b.op.is_call = true;
                break;
            case 2:  // c.li
                b.cls(OpClass::Alu).rd(r_full).rs1(0);
                break;
            case 3:  // c.addi16sp / c.lui
                if (r_full == 2) b.cls(OpClass::Alu).rd(2).rs1(2);
                else b.cls(OpClass::Alu).rd(r_full);
                break;
            case 4: {
                const unsigned f2 = (c >> 10) & 0x3;
                if (f2 == 0 || f2 == 1) {  // c.srli / c.srai
                    if (bit12) return Builder{}.unknown().op;  // shamt >= 32 on RV32
                    b.cls(OpClass::Alu).rd(r1c).rs1(r1c);
                } else if (f2 == 2) {  // c.andi
                    b.cls(OpClass::Alu).rd(r1c).rs1(r1c);
                } else {
                    if (bit12) return Builder{}.unknown().op;  // c.subw/c.addw are RV64
                    b.cls(OpClass::Alu).rd(r1c).rs1(r1c).rs2(r2c);  // c.sub/xor/or/and
                }
                break;
            }
            case 5:  // c.j
                b.cls(OpClass::JumpDirect);
                break;
            case 6:  // c.beqz
            case 7:  // c.bnez
                b.cls(OpClass::Branch).rs1(r1c).rs2(0);
                break;
        }
    } else {  // quadrant 2
        switch (f3) {
            case 0:  // c.slli
                if (bit12) return Builder{}.unknown().op;
                b.cls(OpClass::Alu).rd(r_full).rs1(r_full);
                break;
            case 2:  // c.lwsp
                b.cls(OpClass::Load).rd(r_full).rs1(2);
                break;
            case 4:
                if (bit12 == 0) {
                    if (r2_full != 0) {  // c.mv
                        b.cls(OpClass::Alu).rd(r_full).rs1(0).rs2(r2_full);
                    } else {  // c.jr
                        if (r_full == 0) return Builder{}.unknown().op;
                        b.cls(OpClass::JumpIndirect).rs1(r_full);
                        b.op.is_return = is_link_reg(r_full);
                    }
                } else {
                    if (r2_full != 0) {  // c.add
                        b.cls(OpClass::Alu).rd(r_full).rs1(r_full).rs2(r2_full);
                    } else if (r_full != 0) {  // c.jalr
                        b.cls(OpClass::JumpIndirect).rd(1).rs1(r_full);
                        b.op.is_call = true;
                        b.op.is_return = is_link_reg(r_full) && r_full != 1;
                    } else {  // c.ebreak
                        b.cls(OpClass::Csr);
                    }
                }
                break;
            case 6:  // c.swsp
                b.cls(OpClass::Store).rs1(2).rs2(r2_full);
                break;
            default:  // c.fldsp/c.flwsp/c.fsdsp/c.fswsp
                return Builder{}.unknown().op;
        }
    }
    b.op.length_bytes = 2;
    return b.op;
}

}  // namespace

DecodedOp decode(uint32_t raw) {
    DecodedOp op = insn_length(raw) == 2 ? decode16(raw & 0xFFFF) : decode32(raw);
    op.length_bytes = static_cast<uint8_t>(insn_length(raw));
    return op;
}

}  // namespace rvpipe
