#include "rvpipe/scoreboard.hpp"

#include <stdexcept>

namespace rvpipe {

Scoreboard::Scoreboard(unsigned depth) : depth_(depth), slots_(depth) {
    if (depth < 2 || depth > 64) throw std::logic_error("scoreboard depth out of range");
    if (depth % 2) throw std::logic_error("scoreboard depth must be even");
}

size_t Scoreboard::push(ScoreboardEntry entry) {
    if (count_ == depth_) throw std::logic_error("push on full scoreboard");
    size_t slot = issue_ptr_;
    slots_[slot] = std::move(entry);
    issue_ptr_ = (issue_ptr_ + 1) % depth_;
    ++count_;
    return slot;
}

ScoreboardEntry Scoreboard::pop_head() {
    if (count_ == 0) throw std::logic_error("pop on empty scoreboard");
    ScoreboardEntry e = std::move(*slots_[commit_ptr_]);
    slots_[commit_ptr_].reset();
    commit_ptr_ = (commit_ptr_ + 1) % depth_;
    --count_;
    return e;
}

const ScoreboardEntry& Scoreboard::head() const {
    if (count_ == 0) throw std::logic_error("head of empty scoreboard");
    return *slots_[commit_ptr_];
}

uint64_t Scoreboard::interval_mask(unsigned a, unsigned b, unsigned n) {
    if (n < 1 || n > 64) throw std::logic_error("interval_mask: bad width");
    if (a >= n || b >= n) throw std::logic_error("interval_mask: index out of range");
    uint64_t ones = n == 64 ? ~uint64_t{0} : (uint64_t{1} << n) - 1;
    uint64_t from_a = ones & ~((uint64_t{1} << a) - 1);      // bits [a, n)
    uint64_t to_b = (b == 63 ? ~uint64_t{0} : (uint64_t{1} << (b + 1)) - 1);  // bits [0, b]
    if (a <= b) return from_a & to_b;
    return (from_a | to_b) & ones;  // wrap case
}

OccupancyFlags Scoreboard::occupancy_flags() const {
    bool all_odd = true;
    bool all_even = true;
    for (size_t i = 0; i < depth_; ++i) {
        if (!slots_[i].has_value()) {
            if (i % 2) all_odd = false;
            else all_even = false;
        }
    }
    return {all_odd && all_even, all_odd || all_even};
}

size_t Scoreboard::cancel_from(size_t branch_slot) {
    if (branch_slot >= depth_ || !slots_[branch_slot].has_value())
        throw std::logic_error("cancel_from: slot not occupied");
    size_t first = (branch_slot + 1) % depth_;
    if (first == issue_ptr_) return 0;  // branch is the newest entry
    uint64_t mask = interval_mask(static_cast<unsigned>(first),
                                  static_cast<unsigned>((issue_ptr_ + depth_ - 1) % depth_),
                                  depth_);
    size_t cancelled = 0;
    for (size_t i = 0; i < depth_; ++i) {
        if ((mask >> i) & 1 && slots_[i].has_value() && !slots_[i]->cancelled) {
            slots_[i]->cancelled = true;
            ++cancelled;
        }
    }
    return cancelled;
}

std::optional<std::pair<size_t, bool>> Scoreboard::latest_writer(uint8_t reg) const {
    size_t i = issue_ptr_;
    for (size_t k = 0; k < count_; ++k) {
        i = (i + depth_ - 1) % depth_;
        const auto& e = *slots_[i];
        if (!e.cancelled && e.op.rd && *e.op.rd == reg) return std::pair{i, e.done};
    }
    return std::nullopt;
}

std::vector<size_t> Scoreboard::tick_counters() {
    std::vector<size_t> newly_done;
    for_each([&](size_t i, const ScoreboardEntry&) {
        auto& e = *slots_[i];
        if (e.done) return;
        ++e.counter;
        if (e.counter >= e.latency) {
            e.done = true;
            newly_done.push_back(e.seq);
        }
    });
    return newly_done;
}

}  // namespace rvpipe
