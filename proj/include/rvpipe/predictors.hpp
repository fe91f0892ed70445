#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace rvpipe {

// Fixed-capacity LIFO of return addresses. Pushing onto a full stack
// overwrites the oldest entry. Capacity 0 disables the predictor (every
// pop misses).
class ReturnAddressStack {
public:
    explicit ReturnAddressStack(unsigned capacity)
        : buf_(capacity), top_(0), count_(0) {}

    void push(uint64_t pc_after_call) {
        if (buf_.empty()) return;
        top_ = (top_ + 1) % buf_.size();
        buf_[top_] = pc_after_call;
        if (count_ < buf_.size()) ++count_;
    }

    std::optional<uint64_t> pop() {
        if (count_ == 0) return std::nullopt;
        uint64_t v = buf_[top_];
        top_ = (top_ + buf_.size() - 1) % buf_.size();
        --count_;
        return v;
    }

    size_t size() const { return count_; }
    size_t capacity() const { return buf_.size(); }

private:
    std::vector<uint64_t> buf_;
    size_t top_;
    size_t count_;
};

// Table of 2-bit saturating counters indexed by (pc >> 1) so 2-byte-aligned
// compressed branches map to distinct slots. Counters start at 0
// (predict not-taken). Size must be a power of two.
class BranchHistoryTable {
public:
    explicit BranchHistoryTable(unsigned entries)
        : counters_(entries, 0), mask_(entries - 1) {}

    bool predict(uint64_t pc) const { return counters_[index(pc)] >= 2; }

    void update(uint64_t pc, bool taken) {
        uint8_t& c = counters_[index(pc)];
        if (taken) {
            if (c < 3) ++c;
        } else {
            if (c > 0) --c;
        }
    }

    uint8_t counter(uint64_t pc) const { return counters_[index(pc)]; }
    size_t entries() const { return counters_.size(); }

private:
    size_t index(uint64_t pc) const { return (pc >> 1) & mask_; }

    std::vector<uint8_t> counters_;
    uint64_t mask_;
};

}  // namespace rvpipe
