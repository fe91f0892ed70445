#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rvpipe/config.hpp"
#include "rvpipe/decode.hpp"
#include "rvpipe/predictors.hpp"
#include "rvpipe/scoreboard.hpp"
#include "rvpipe/trace.hpp"

namespace rvpipe {

struct StallCounts {
    uint64_t raw = 0;
    uint64_t waw = 0;
    uint64_t structural = 0;
    uint64_t capacity = 0;
    uint64_t control = 0;

    uint64_t total() const { return raw + waw + structural + capacity + control; }
};

struct SimStats {
    uint64_t total_cycles = 0;
    uint64_t retired = 0;
    double ipc = 0.0;
    std::array<uint64_t, 9> issued_by_class{};  // indexed by OpClass
    uint64_t mispredicts = 0;
    StallCounts stalls;
    uint64_t decode_warnings = 0;
};

struct SimOptions {
    std::ostream* debug = nullptr;  // per-cycle event stream
    bool verbose_sb = false;        // add scoreboard dumps to the debug stream
};

struct SimResult {
    std::vector<AnnotatedEntry> annotated;
    SimStats stats;
    std::vector<uint64_t> issue_cycles;  // per trace index, diagnostic
};

struct SimulationStuck : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One clock cycle runs the three modeled stages in reverse pipeline order:
// try_commit, try_execute, try_issue. Reverse order makes an instruction
// done during cycle c commit at c+1 at the earliest, while same-cycle issue
// sees fresh done flags for forwarding.
class PipelineSim {
public:
    PipelineSim(const std::vector<TraceEntry>& trace, const PipelineConfig& cfg,
                SimOptions opts = {});

    bool finished() const { return next_issue_ == decoded_.size() && sb_.empty(); }
    uint64_t cycle() const { return cycle_; }

    void step();

    // Pops up to C done head entries; a store only retires through commit
    // port 0. Cancelled entries are acknowledged without annotation.
    std::vector<size_t> try_commit();

    // Advances execution counters once per cycle.
    std::vector<size_t> try_execute();

    // Attempts up to I in-order issues, stopping at the first instruction
    // with a capacity, data, structural or control hazard.
    std::vector<size_t> try_issue();

    SimResult take_result();

    const Scoreboard& scoreboard() const { return sb_; }
    const SimStats& stats() const { return stats_; }
    size_t next_issue() const { return next_issue_; }

private:
    enum class Stall { Raw, Waw, Structural, Capacity, Control };

    struct UnitState {
        FUnit def;
        std::optional<uint64_t> last_accept_cycle;
    };

    bool window_open() const;
    std::optional<Stall> issue_hazard(const DecodedOp& op) const;
    size_t pick_unit(const DecodedOp& op) const;  // first free unit, declaration order
    const std::vector<size_t>& units_for(OpClass cls) const;
    bool resolve_control(size_t seq);  // predicts, updates RAS/BHT; true on hit
    void count_stall(Stall s);
    void emit_debug_line(const std::vector<std::pair<size_t, size_t>>& issued,
                         const std::vector<size_t>& done, const std::vector<size_t>& committed,
                         std::optional<size_t> miss);

    const std::vector<TraceEntry>& trace_;
    PipelineConfig cfg_;
    SimOptions opts_;

    std::vector<DecodedOp> decoded_;
    std::array<std::vector<size_t>, 9> class_units_;

    Scoreboard sb_;
    ReturnAddressStack ras_;
    BranchHistoryTable bht_;
    std::vector<UnitState> units_;
    std::vector<bool> busy_;

    size_t next_issue_ = 0;
    uint64_t cycle_ = 0;
    std::optional<uint64_t> last_miss_cycle_;
    std::optional<size_t> miss_seq_;
    std::vector<size_t> issue_unit_;
    uint64_t last_progress_cycle_ = 0;
    uint64_t livelock_limit_;

    std::vector<std::optional<uint64_t>> commit_cycles_;
    std::vector<uint64_t> issue_cycles_;
    SimStats stats_;
};

// Runs a whole trace. Throws ConfigError if the trace uses an instruction
// class with no functional unit.
SimResult simulate(const std::vector<TraceEntry>& trace, const PipelineConfig& cfg,
                   SimOptions opts = {});

}  // namespace rvpipe
