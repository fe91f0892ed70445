#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rvpipe/config.hpp"
#include "rvpipe/pipeline.hpp"
#include "rvpipe/trace.hpp"

namespace rvpipe {

struct AlignmentError : std::runtime_error {
    AlignmentError(size_t index, const std::string& what)
        : std::runtime_error("index " + std::to_string(index) + ": " + what), index(index) {}
    size_t index;
};

// A maximal run of consecutive mismatching delta-t indices.
struct MismatchCluster {
    size_t start = 0;  // first mismatching index (i >= 1)
    size_t end = 0;    // last mismatching index, inclusive
    std::vector<int64_t> left_dt;
    std::vector<int64_t> right_dt;
    std::vector<std::string> context;  // entries start-2 .. end+2
};

struct AccuracyReport {
    size_t n_instructions = 0;
    size_t n_compared = 0;  // delta-t pairs: n_instructions - 1
    size_t n_matching = 0;
    double accuracy = 1.0;
    uint64_t total_cycles_left = 0;
    uint64_t total_cycles_right = 0;
    std::vector<MismatchCluster> mismatches;
};

// Compares commit-to-commit gaps (delta-t) index by index. Both traces must
// carry the same instruction sequence; the first divergence raises an
// AlignmentError naming its index.
AccuracyReport compute_accuracy(const std::vector<AnnotatedEntry>& left,
                                const std::vector<AnnotatedEntry>& right);

// Human-readable summary plus up to `limit` mismatch clusters with +-2
// instructions of context.
void diff_report(const AccuracyReport& report, size_t limit, std::ostream& out);

struct SweepPoint {
    std::vector<std::pair<std::string, std::string>> params;  // key, value
    SimStats stats;
};

// One simulation per Cartesian-product point of the grid. Grid keys are
// global config keys; rows come out in odometer order over the sorted keys
// (last key fastest) regardless of how many workers run them.
std::vector<SweepPoint> sweep(const PipelineConfig& base,
                              const std::vector<std::pair<std::string, std::vector<std::string>>>& grid,
                              const std::vector<TraceEntry>& trace, unsigned jobs = 1);

void write_sweep_csv(const std::vector<SweepPoint>& points, std::ostream& out);

}  // namespace rvpipe
