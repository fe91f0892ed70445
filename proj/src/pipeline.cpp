#include "rvpipe/pipeline.hpp"

#include <algorithm>
#include <ostream>

namespace rvpipe {

namespace {

bool is_control(OpClass c) {
    return c == OpClass::Branch || c == OpClass::JumpDirect || c == OpClass::JumpIndirect;
}

size_t class_index(OpClass c) { return static_cast<size_t>(c); }

}  // namespace

PipelineSim::PipelineSim(const std::vector<TraceEntry>& trace, const PipelineConfig& cfg,
                         SimOptions opts)
    : trace_(trace),
      cfg_(cfg),
      opts_(opts),
      sb_(cfg.scoreboard_depth),
      ras_(cfg.ras_depth),
      bht_(cfg.bht_entries),
      busy_(cfg.fu_table.size(), false) {
    validate(cfg_);

    decoded_.reserve(trace.size());
    for (const auto& e : trace) {
        decoded_.push_back(decode(e.raw));
        if (decoded_.back().unknown) ++stats_.decode_warnings;
    }

    for (const auto& fu : cfg_.fu_table) units_.push_back(UnitState{fu, std::nullopt});

    // Decoded classes map onto config FU classes; branches and CSR/system
    // ops fall back to the ALU group when no dedicated unit is declared.
    auto units_of = [&](FuClass fc) {
        std::vector<size_t> v;
        for (size_t i = 0; i < cfg_.fu_table.size(); ++i)
            if (cfg_.fu_table[i].cls == fc) v.push_back(i);
        return v;
    };
    auto alu = units_of(FuClass::Alu);
    auto branch = units_of(FuClass::Branch);
    auto csr = units_of(FuClass::Csr);
    class_units_[class_index(OpClass::Alu)] = alu;
    class_units_[class_index(OpClass::Mul)] = units_of(FuClass::Mul);
    class_units_[class_index(OpClass::Load)] = units_of(FuClass::Load);
    class_units_[class_index(OpClass::Store)] = units_of(FuClass::Store);
    class_units_[class_index(OpClass::Branch)] = branch.empty() ? alu : branch;
    class_units_[class_index(OpClass::JumpDirect)] = branch.empty() ? alu : branch;
    class_units_[class_index(OpClass::JumpIndirect)] = branch.empty() ? alu : branch;
    class_units_[class_index(OpClass::Csr)] = csr.empty() ? alu : csr;
    class_units_[class_index(OpClass::NopOther)] = alu;

    for (const auto& op : decoded_)
        if (units_for(op.cls).empty())
            throw ConfigError(std::string("no functional unit for class '") +
                              to_string(op.cls) + "'");

    commit_cycles_.resize(trace.size());
    issue_cycles_.resize(trace.size(), 0);
    issue_unit_.resize(trace.size(), 0);
    unsigned max_latency = 0;
    for (const auto& fu : cfg_.fu_table) max_latency = std::max(max_latency, fu.latency);
    livelock_limit_ = cfg_.scoreboard_depth + max_latency + cfg_.mispredict_penalty;
}

const std::vector<size_t>& PipelineSim::units_for(OpClass cls) const {
    return class_units_[class_index(cls)];
}

bool PipelineSim::window_open() const {
    return last_miss_cycle_ && cycle_ - *last_miss_cycle_ < cfg_.mispredict_penalty;
}

std::optional<PipelineSim::Stall> PipelineSim::issue_hazard(const DecodedOp& op) const {
    if (sb_.occupancy_flags().full) return Stall::Capacity;

    // RAW: stall unless the latest in-flight writer of every source is done
    // (forwarding). Instructions issued earlier this cycle are already in
    // the scoreboard and not done, so same-cycle RAW always stalls.
    for (const auto& src : {op.rs1, op.rs2}) {
        if (!src) continue;
        auto writer = sb_.latest_writer(*src);
        if (writer && !writer->second) return Stall::Raw;
    }

    // WAW: any in-flight writer of rd stalls unless renaming is on.
    if (op.rd && !cfg_.renaming && sb_.latest_writer(*op.rd)) return Stall::Waw;

    for (size_t u : units_for(op.cls))
        if (!busy_[u]) return std::nullopt;
    return Stall::Structural;
}

size_t PipelineSim::pick_unit(const DecodedOp& op) const {
    for (size_t u : units_for(op.cls))
        if (!busy_[u]) return u;
    throw std::logic_error("pick_unit with no free unit");
}

void PipelineSim::count_stall(Stall s) {
    switch (s) {
        case Stall::Raw: ++stats_.stalls.raw; break;
        case Stall::Waw: ++stats_.stalls.waw; break;
        case Stall::Structural: ++stats_.stalls.structural; break;
        case Stall::Capacity: ++stats_.stalls.capacity; break;
        case Stall::Control: ++stats_.stalls.control; break;
    }
}

bool PipelineSim::resolve_control(size_t seq) {
    const TraceEntry& te = trace_[seq];
    const DecodedOp& op = decoded_[seq];
    std::optional<uint64_t> next_pc;
    if (seq + 1 < trace_.size()) next_pc = trace_[seq + 1].pc;

    bool hit = true;
    switch (op.cls) {
        case OpClass::JumpDirect:
            hit = true;  // the frontend computes direct targets
            break;
        case OpClass::JumpIndirect:
            if (op.is_return) {
                auto predicted = ras_.pop();
                if (next_pc) hit = predicted && *predicted == *next_pc;
            } else {
                // no BTB: non-return indirect jumps always miss
                if (next_pc) hit = false;
            }
            break;
        case OpClass::Branch: {
            // A final-instruction branch has no derivable outcome; leave the
            // predictor untouched and count it as a hit.
            if (next_pc) {
                bool taken = *next_pc != te.pc + op.length_bytes;
                hit = bht_.predict(te.pc) == taken;
                bht_.update(te.pc, taken);
            }
            break;
        }
        default:
            break;
    }

    if (op.is_call) ras_.push(te.pc + op.length_bytes);
    return hit;
}

std::vector<size_t> PipelineSim::try_commit() {
    std::vector<size_t> committed;
    for (unsigned k = 0; k < cfg_.commit_width; ++k) {
        if (sb_.empty()) break;
        const ScoreboardEntry& head = sb_.head();
        if (!head.done) break;
        if (head.op.cls == OpClass::Store && k > 0) break;  // store commits via port 0 only
        ScoreboardEntry e = sb_.pop_head();
        committed.push_back(e.seq);
        if (!e.cancelled) {
            commit_cycles_[e.seq] = cycle_;
            ++stats_.retired;
        }
    }
    return committed;
}

std::vector<size_t> PipelineSim::try_execute() { return sb_.tick_counters(); }

std::vector<size_t> PipelineSim::try_issue() {
    std::vector<size_t> issued;
    if (next_issue_ == decoded_.size()) return issued;

    if (window_open()) {
        count_stall(Stall::Control);
        return issued;
    }

    // Per-cycle busy flags, with stage-2 carryover: a multi-stage unit that
    // accepted an instruction recently claims its write-back port, making
    // the units sharing that port busy instead.
    std::fill(busy_.begin(), busy_.end(), false);
    for (size_t u = 0; u < units_.size(); ++u) {
        const auto& us = units_[u];
        if (us.def.stages < 2 || !us.last_accept_cycle) continue;
        uint64_t age = cycle_ - *us.last_accept_cycle;
        if (age >= 1 && age <= us.def.stages - 1)
            for (size_t v = 0; v < units_.size(); ++v)
                if (v != u && units_[v].def.wb_port == us.def.wb_port) busy_[v] = true;
    }

    for (unsigned k = 0; k < cfg_.issue_width && next_issue_ < decoded_.size(); ++k) {
        const size_t seq = next_issue_;
        const DecodedOp& op = decoded_[seq];

        if (auto stall = issue_hazard(op)) {
            count_stall(*stall);
            break;
        }

        size_t u = pick_unit(op);
        busy_[u] = true;
        for (size_t v = 0; v < units_.size(); ++v)
            if (units_[v].def.wb_port == units_[u].def.wb_port) busy_[v] = true;
        units_[u].last_accept_cycle = cycle_;

        sb_.push(ScoreboardEntry{seq, op, 0, units_[u].def.latency, false, false, cycle_});
        issue_cycles_[seq] = cycle_;
        issue_unit_[seq] = u;
        ++stats_.issued_by_class[class_index(op.cls)];
        issued.push_back(seq);
        ++next_issue_;

        if (is_control(op.cls)) {
            bool hit = resolve_control(seq);
            if (!hit) {
                ++stats_.mispredicts;
                last_miss_cycle_ = cycle_;
                miss_seq_ = seq;
                break;  // penalty window opens
            }
            // A resolved-hit control transfer still ends the group unless
            // the speculative scoreboard is enabled.
            if (!cfg_.speculative_sb) break;
        }
    }
    return issued;
}

void PipelineSim::emit_debug_line(const std::vector<std::pair<size_t, size_t>>& issued,
                                  const std::vector<size_t>& done,
                                  const std::vector<size_t>& committed,
                                  std::optional<size_t> miss) {
    std::ostream& out = *opts_.debug;
    out << 'C' << cycle_;
    if (!issued.empty()) {
        out << " | issue:";
        for (size_t i = 0; i < issued.size(); ++i) {
            if (i) out << ',';
            out << issued[i].first << '@' << units_[issued[i].second].def.name;
        }
    }
    auto list = [&](const char* tag, const std::vector<size_t>& v) {
        if (v.empty()) return;
        out << " | " << tag;
        for (size_t i = 0; i < v.size(); ++i) {
            if (i) out << ',';
            out << v[i];
        }
    };
    list("done:", done);
    list("commit:", committed);
    if (miss) out << " | miss@" << *miss;
    out << '\n';
    if (opts_.verbose_sb) {
        out << "sb:";
        for (size_t i = 0; i < sb_.depth(); ++i) {
            const auto& s = sb_.slot(i);
            if (!s) continue;
            out << " slot" << i << '=' << s->seq << ':' << s->counter << '/' << s->latency;
            if (s->done) out << 'd';
            if (s->cancelled) out << 'c';
        }
        out << '\n';
    }
}

void PipelineSim::step() {
    miss_seq_.reset();
    auto committed = try_commit();
    auto done = try_execute();
    auto issued_seqs = try_issue();

    if (opts_.debug) {
        std::vector<std::pair<size_t, size_t>> issued;
        for (size_t seq : issued_seqs) issued.emplace_back(seq, issue_unit_[seq]);
        emit_debug_line(issued, done, committed, miss_seq_);
    }

    bool progress = !committed.empty() || !done.empty() || !issued_seqs.empty();
    if (progress) {
        last_progress_cycle_ = cycle_;
    } else if (!finished() && cycle_ - last_progress_cycle_ > livelock_limit_) {
        throw SimulationStuck("no progress for " + std::to_string(cycle_ - last_progress_cycle_) +
                              " cycles at cycle " + std::to_string(cycle_) +
                              " (next_issue=" + std::to_string(next_issue_) +
                              ", in flight=" + std::to_string(sb_.occupancy()) + ")");
    }
    ++cycle_;
}

SimResult PipelineSim::take_result() {
    SimResult res;
    res.annotated.reserve(trace_.size());
    for (size_t i = 0; i < trace_.size(); ++i)
        if (commit_cycles_[i])
            res.annotated.push_back(AnnotatedEntry{trace_[i], *commit_cycles_[i]});
    stats_.total_cycles = res.annotated.empty() ? 0 : res.annotated.back().commit_cycle + 1;
    stats_.ipc = stats_.total_cycles == 0
                     ? 0.0
                     : static_cast<double>(stats_.retired) / static_cast<double>(stats_.total_cycles);
    res.stats = stats_;
    res.issue_cycles = issue_cycles_;
    return res;
}

SimResult simulate(const std::vector<TraceEntry>& trace, const PipelineConfig& cfg,
                   SimOptions opts) {
    PipelineSim sim(trace, cfg, opts);
    while (!sim.finished()) sim.step();
    return sim.take_result();
}

}  // namespace rvpipe
