#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rvpipe/decode.hpp"

namespace rvpipe {

// An issued-but-not-committed instruction.
struct ScoreboardEntry {
    size_t seq = 0;           // trace index
    DecodedOp op;
    unsigned counter = 0;     // cycles elapsed since issue
    unsigned latency = 1;     // required execution cycles
    bool done = false;
    bool cancelled = false;
    uint64_t issue_cycle = 0;
};

struct OccupancyFlags {
    bool full;              // all odd AND all even index entries occupied
    bool at_most_one_free;  // all odd OR all even index entries occupied
};

// Circular FIFO of in-flight instructions with two pointers: issue_ptr
// pushes, commit_ptr pops. Occupied slots form a contiguous (possibly
// wrapped) region between them.
class Scoreboard {
public:
    explicit Scoreboard(unsigned depth);

    // Returns the slot the entry was stored at. Callers check capacity first.
    size_t push(ScoreboardEntry entry);

    ScoreboardEntry pop_head();
    const ScoreboardEntry& head() const;

    // Bit i set iff i lies in the inclusive circular interval [A; B].
    // A > B wraps through N-1 to 0; the result is never zero.
    static uint64_t interval_mask(unsigned a, unsigned b, unsigned n);

    // The odd/even occupancy predicate: full and cannot-issue-a-second.
    // For the contiguous occupancy a FIFO maintains, these equal
    // occupancy == N and occupancy >= N-1.
    OccupancyFlags occupancy_flags() const;

    // Sets the cancelled bit on every occupied entry strictly after
    // branch_slot, up to the issue pointer. Returns how many were cancelled.
    size_t cancel_from(size_t branch_slot);

    // Most recently issued non-cancelled in-flight writer of reg, with its
    // done flag.
    std::optional<std::pair<size_t, bool>> latest_writer(uint8_t reg) const;

    // Advances every occupied not-done entry's counter; entries reaching
    // their latency become done. Returns the seqs that became done.
    std::vector<size_t> tick_counters();

    size_t occupancy() const { return count_; }
    unsigned depth() const { return depth_; }
    bool empty() const { return count_ == 0; }
    size_t issue_ptr() const { return issue_ptr_; }
    size_t commit_ptr() const { return commit_ptr_; }

    const std::optional<ScoreboardEntry>& slot(size_t i) const { return slots_[i]; }
    std::optional<ScoreboardEntry>& slot(size_t i) { return slots_[i]; }

    // Visits in-flight entries in FIFO order.
    template <typename Fn>
    void for_each(Fn fn) const {
        size_t i = commit_ptr_;
        for (size_t k = 0; k < count_; ++k) {
            fn(i, *slots_[i]);
            i = (i + 1) % depth_;
        }
    }

private:
    unsigned depth_;
    std::vector<std::optional<ScoreboardEntry>> slots_;
    size_t issue_ptr_ = 0;
    size_t commit_ptr_ = 0;
    size_t count_ = 0;
};

}  // namespace rvpipe
