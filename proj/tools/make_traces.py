#!/usr/bin/env python3
"""Regenerates the bundled microtraces and the mixed corpus under traces/.

The corpus traces are built so that, under single-issue, instruction
completion times are strictly increasing: a load is followed either by a
consumer of its destination register or by another 2-cycle instruction, a
store by a 2-cycle instruction, and control transfers only follow 1-cycle
ops or the multiplier (whose write-back port carryover already spaces the
follower). With completions strictly increasing, at most one instruction is
ever waiting to retire, so commit-width variation cannot change the
schedule and the width sweeps in the test suite measure issue effects only.

Code at a given pc is fixed: loop bodies and function bodies are templates
emitted verbatim on every dynamic visit.

Deterministic: fixed seeds, stable output bytes. Regenerate deliberately and
re-freeze tests/golden afterwards (see README).
"""

import argparse
import os
import random

# ---- encoders ------------------------------------------------------------


def enc_r(f7, rs2, rs1, f3, rd, op=0x33):
    return f7 << 25 | rs2 << 20 | rs1 << 15 | f3 << 12 | rd << 7 | op


def enc_i(imm, rs1, f3, rd, op):
    return (imm & 0xFFF) << 20 | rs1 << 15 | f3 << 12 | rd << 7 | op


def enc_s(imm, rs2, rs1, f3, op=0x23):
    return ((imm >> 5) & 0x7F) << 25 | rs2 << 20 | rs1 << 15 | f3 << 12 | (imm & 0x1F) << 7 | op


def enc_b(imm, rs2, rs1, f3):
    imm &= 0x1FFF
    return (((imm >> 12) & 1) << 31 | ((imm >> 5) & 0x3F) << 25 | rs2 << 20 | rs1 << 15
            | f3 << 12 | ((imm >> 1) & 0xF) << 8 | ((imm >> 11) & 1) << 7 | 0x63)


def enc_j(imm, rd):
    imm &= 0x1FFFFF
    return (((imm >> 20) & 1) << 31 | ((imm >> 1) & 0x3FF) << 21 | ((imm >> 11) & 1) << 20
            | ((imm >> 12) & 0xFF) << 12 | rd << 7 | 0x6F)


def x(n):
    return f"x{n}"


# ops are (raw, disasm, kind, rd) tuples; kind drives follower constraints


def op_add(rd, rs1, rs2):
    return enc_r(0, rs2, rs1, 0, rd), f"add {x(rd)},{x(rs1)},{x(rs2)}", "alu", rd


def op_sub(rd, rs1, rs2):
    return enc_r(0x20, rs2, rs1, 0, rd), f"sub {x(rd)},{x(rs1)},{x(rs2)}", "alu", rd


def op_xor(rd, rs1, rs2):
    return enc_r(0, rs2, rs1, 4, rd), f"xor {x(rd)},{x(rs1)},{x(rs2)}", "alu", rd


def op_and(rd, rs1, rs2):
    return enc_r(0, rs2, rs1, 7, rd), f"and {x(rd)},{x(rs1)},{x(rs2)}", "alu", rd


def op_sltu(rd, rs1, rs2):
    return enc_r(0, rs2, rs1, 3, rd), f"sltu {x(rd)},{x(rs1)},{x(rs2)}", "alu", rd


def op_sh1add(rd, rs1, rs2):
    return enc_r(0x10, rs2, rs1, 2, rd), f"sh1add {x(rd)},{x(rs1)},{x(rs2)}", "alu", rd


def op_andn(rd, rs1, rs2):
    return enc_r(0x20, rs2, rs1, 7, rd), f"andn {x(rd)},{x(rs1)},{x(rs2)}", "alu", rd


def op_addi(rd, rs1, imm):
    return enc_i(imm, rs1, 0, rd, 0x13), f"addi {x(rd)},{x(rs1)},{imm}", "alu", rd


def op_cmv(rd, rs2):
    return 0x8 << 12 | rd << 7 | rs2 << 2 | 2, f"c.mv {x(rd)},{x(rs2)}", "alu", rd


def op_cadd(rd, rs2):
    return 0x9 << 12 | rd << 7 | rs2 << 2 | 2, f"c.add {x(rd)},{x(rs2)}", "alu", rd


def op_mul(rd, rs1, rs2):
    return enc_r(1, rs2, rs1, 0, rd), f"mul {x(rd)},{x(rs1)},{x(rs2)}", "mul", rd


def op_mulh(rd, rs1, rs2):
    return enc_r(1, rs2, rs1, 1, rd), f"mulh {x(rd)},{x(rs1)},{x(rs2)}", "mul", rd


def op_div(rd, rs1, rs2):
    return enc_r(1, rs2, rs1, 4, rd), f"div {x(rd)},{x(rs1)},{x(rs2)}", "mul", rd


def op_lw(rd, rs1, imm):
    return enc_i(imm, rs1, 2, rd, 0x03), f"lw {x(rd)},{imm}({x(rs1)})", "load", rd


def op_sw(rs2, rs1, imm):
    return enc_s(imm, rs2, rs1, 2), f"sw {x(rs2)},{imm}({x(rs1)})", "store", None


ALU_OPS = [op_add, op_sub, op_xor, op_and, op_sltu, op_sh1add, op_andn]
MUL_OPS = [op_mul, op_mulh, op_div]

REGS = list(range(5, 16)) + list(range(28, 32))
BASE = 8  # nominal address base register


class Stream:
    def __init__(self, start_pc=0x80000000):
        self.pc = start_pc
        self.rows = []

    def emit(self, raw, disasm):
        length = 2 if (raw & 3) != 3 else 4
        self.rows.append((self.pc, raw, disasm))
        self.pc += length

    def redirect(self, target):
        self.pc = target

    def write(self, path, header):
        with open(path, "w") as f:
            f.write(f"# {header}\n")
            for pc, raw, disasm in self.rows:
                enc = f"{raw:04x}" if (raw & 3) != 3 else f"{raw:08x}"
                f.write(f"{pc:x} {enc} {disasm}\n")
        print(f"wrote {path} ({len(self.rows)} instructions)")


class TemplateBuilder:
    """Builds straight-line op sequences whose internal transitions respect
    the follower constraints. prev starts unconstrained (templates are only
    entered after 1-cycle instructions)."""

    def __init__(self, rng):
        self.rng = rng
        self.prev_kind = "alu"
        self.prev_rd = None

    def reg(self):
        return self.rng.choice(REGS)

    def alu_op(self):
        rng = self.rng
        r = rng.random()
        if r < 0.15:
            return op_addi(self.reg(), self.reg(), rng.randrange(-64, 64))
        if r < 0.3:
            a, b = rng.choice(REGS), rng.choice(REGS)
            return op_cmv(a, b) if rng.random() < 0.5 else op_cadd(a, b)
        return rng.choice(ALU_OPS)(self.reg(), self.reg(), self.reg())

    def lat2_op(self):
        rng = self.rng
        r = rng.random()
        if r < 0.35:
            return rng.choice(MUL_OPS)(self.reg(), self.reg(), self.reg())
        if r < 0.70:
            return op_lw(self.reg(), BASE, rng.randrange(0, 32) * 4)
        return op_sw(self.reg(), BASE, rng.randrange(0, 32) * 4)

    def next_op(self, force_alu=False):
        if force_alu:
            # callers need a 1-cycle op (control transfer follows); clear a
            # pending load/store constraint first with its consumer or a mul
            if self.prev_kind == "load" and self.prev_rd is not None:
                op = self.rng.choice(ALU_OPS)(self.reg(), self.prev_rd, self.reg())
            elif self.prev_kind in ("load", "store"):
                op = self.rng.choice(MUL_OPS)(self.reg(), self.reg(), self.reg())
            else:
                op = self.alu_op()
        elif self.prev_kind == "load":
            if self.rng.random() < 0.5 and self.prev_rd is not None:
                f = self.rng.choice(ALU_OPS)
                op = f(self.reg(), self.prev_rd, self.reg())
            else:
                op = self.lat2_op()
        elif self.prev_kind == "store":
            op = self.lat2_op()
        elif self.rng.random() < 0.55:
            op = self.alu_op()
        else:
            op = self.lat2_op()
        self.prev_kind, self.prev_rd = op[2], op[3]
        return op

    def sequence(self, n, tail_alu=False):
        """n ops; with tail_alu the final TWO ops are 1-cycle so a control
        transfer can follow (the first of them clears any load/store)."""
        ops = []
        for i in range(n):
            force = tail_alu and i >= n - 2
            ops.append(self.next_op(force_alu=force))
        return ops


def build_function(rng, base, callee=None):
    """A function template: entry pc, fixed body, optional nested call
    marker. The op before a call marker and before the return is 1-cycle."""
    tb = TemplateBuilder(rng)
    n = rng.randrange(4, 8)
    mid = n // 2
    body = []
    for i in range(n):
        force = (i == mid - 1 and callee is not None) or i >= n - 2
        body.append(tb.next_op(force_alu=force))
        if i == mid - 1 and callee is not None:
            body.append(("call", callee))
    return {"base": base, "body": body}


class CorpusBuilder:
    def __init__(self, seed, start_pc=0x80000000):
        self.rng = random.Random(seed)
        self.s = Stream(start_pc)
        self.tb = TemplateBuilder(self.rng)

    def emit_ops(self, ops):
        for op in ops:
            self.s.emit(op[0], op[1])

    def straight(self, n):
        self.emit_ops(self.tb.sequence(n))

    def loop(self, iters, body_len):
        # the op stream before the loop must end 1-cycle for the back edge
        self.emit_ops(self.tb.sequence(2, tail_alu=True))
        body_tb = TemplateBuilder(self.rng)
        body = body_tb.sequence(body_len, tail_alu=True)
        cond_reg = body[-1][3] or 5
        head = self.s.pc
        body_bytes = sum(2 if (op[0] & 3) != 3 else 4 for op in body)
        for it in range(iters):
            self.emit_ops(body)
            off = head - (head + body_bytes)
            self.s.emit(enc_b(off, 0, cond_reg, 1), f"bnez {x(cond_reg)},{off}")
            if it < iters - 1:
                self.s.redirect(head)
        self.tb.prev_kind, self.tb.prev_rd = "branch", None

    def call(self, fn):
        self.emit_ops(self.tb.sequence(2, tail_alu=True))
        self._emit_call(fn)
        self.tb.prev_kind, self.tb.prev_rd = "branch", None

    def _emit_call(self, fn):
        call_pc = self.s.pc
        self.s.emit(enc_j(fn["base"] - call_pc, 1), f"jal x1,{fn['base'] - call_pc}")
        self.s.redirect(fn["base"])
        for op in fn["body"]:
            if op[0] == "call":
                inner_site = self.s.pc  # the call marker sits at a fixed pc
                self._emit_call(op[1])
                assert self.s.pc == inner_site + 4
            else:
                self.s.emit(op[0], op[1])
        self.s.emit(enc_i(0, 1, 0, 0, 0x67), "ret")
        self.s.redirect(call_pc + 4)

    def epilogue(self):
        self.emit_ops(self.tb.sequence(2, tail_alu=True))
        self.emit_ops([op_mul(9, 5, 5), op_add(10, 9, 9), op_add(11, 10, 10),
                       op_add(12, 11, 11)])

    def forward_branch(self):
        """A one-off forward branch, taken or not."""
        self.emit_ops(self.tb.sequence(2, tail_alu=True))
        taken = self.rng.random() < 0.4
        off = self.rng.randrange(2, 8) * 4
        pc = self.s.pc
        cond = self.rng.choice(REGS)
        self.s.emit(enc_b(off, 0, cond, 0), f"beqz {x(cond)},{off}")
        if taken:
            self.s.redirect(pc + off)
        self.tb.prev_kind, self.tb.prev_rd = "branch", None


def make_mix(seed, path, target, fn_region):
    b = CorpusBuilder(seed)
    leaf = build_function(b.rng, fn_region)
    inner = build_function(b.rng, fn_region + 0x400, callee=leaf)
    outer = build_function(b.rng, fn_region + 0x800, callee=inner)
    funcs = [leaf, leaf, inner, outer]  # leaf calls twice as likely
    while len(b.s.rows) < target - 12:
        r = b.rng.random()
        if r < 0.35:
            b.straight(b.rng.randrange(4, 10))
        elif r < 0.65:
            b.loop(b.rng.randrange(2, 6), b.rng.randrange(3, 7))
        elif r < 0.8:
            b.forward_branch()
        else:
            b.call(b.rng.choice(funcs))
    b.epilogue()
    b.s.write(path, "mixed corpus trace")
    return len(b.s.rows)


def make_micros(outdir):
    s = Stream()
    s.emit(*op_add(1, 31, 31)[:2])
    for i in range(2, 7):
        s.emit(*op_add(i, i - 1, 31)[:2])
    s.write(os.path.join(outdir, "micro_raw_chain.rvft"),
            "read-after-write chain: every op consumes the previous result")

    s = Stream()
    s.emit(*op_mul(6, 5, 5)[:2])
    s.emit(*op_add(7, 6, 1)[:2])
    s.write(os.path.join(outdir, "micro_mul_consumer.rvft"),
            "multiply followed by a dependent consumer")

    s = Stream()
    s.emit(*op_mul(6, 5, 5)[:2])
    s.emit(*op_add(7, 1, 2)[:2])
    s.write(os.path.join(outdir, "micro_mul_port.rvft"),
            "multiply followed by an independent alu op on the shared port")

    s = Stream()
    for i in range(4):
        s.emit(*op_add(10, 5 + i, 28)[:2])
        s.emit(*op_mul(10, 6 + i, 29)[:2])
    s.write(os.path.join(outdir, "micro_waw.rvft"),
            "write-after-write pressure: every op writes x10")

    s = Stream()
    for i in range(4):
        s.emit(*op_add(10 + i, 5, 28)[:2])
        s.emit(*op_mul(20 + i % 4, 6, 29)[:2])
    s.write(os.path.join(outdir, "micro_waw_free.rvft"),
            "same shape with distinct destinations (no write-after-write)")

    # small demo trace: one of everything
    s = Stream()
    s.emit(*op_addi(5, 0, 64)[:2])
    s.emit(*op_lw(6, 5, 0)[:2])
    s.emit(*op_add(7, 6, 5)[:2])
    s.emit(*op_mul(8, 7, 7)[:2])
    s.emit(*op_sw(8, 5, 4)[:2])
    s.emit(*op_mul(9, 8, 5)[:2])
    s.write(os.path.join(outdir, "micro_basic.rvft"), "six-instruction demo trace")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=os.path.join(os.path.dirname(__file__), "..", "traces"))
    args = ap.parse_args()
    outdir = os.path.abspath(args.out)
    os.makedirs(os.path.join(outdir, "corpus"), exist_ok=True)

    make_micros(outdir)
    total = 0
    total += make_mix(101, os.path.join(outdir, "corpus", "mix_a.rvft"), 250, 0x80020000)
    total += make_mix(202, os.path.join(outdir, "corpus", "mix_b.rvft"), 250, 0x80040000)
    total += make_mix(303, os.path.join(outdir, "corpus", "mix_c.rvft"), 300, 0x80060000)
    print(f"corpus total: {total} instructions")
    assert total >= 500


if __name__ == "__main__":
    main()
