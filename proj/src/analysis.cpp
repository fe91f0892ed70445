#include "rvpipe/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <mutex>
#include <ostream>
#include <thread>

namespace rvpipe {

AccuracyReport compute_accuracy(const std::vector<AnnotatedEntry>& left,
                                const std::vector<AnnotatedEntry>& right) {
    if (left.size() != right.size())
        throw AlignmentError(std::min(left.size(), right.size()),
                             "traces have different lengths (" + std::to_string(left.size()) +
                                 " vs " + std::to_string(right.size()) + ")");
    for (size_t i = 0; i < left.size(); ++i)
        if (left[i].entry.pc != right[i].entry.pc || left[i].entry.raw != right[i].entry.raw)
            throw AlignmentError(i, "instruction streams diverge");

    AccuracyReport rep;
    rep.n_instructions = left.size();
    rep.n_compared = left.empty() ? 0 : left.size() - 1;
    if (!left.empty()) {
        rep.total_cycles_left = left.back().commit_cycle + 1;
        rep.total_cycles_right = right.back().commit_cycle + 1;
    }

    auto dt = [](const std::vector<AnnotatedEntry>& t, size_t i) {
        return static_cast<int64_t>(t[i].commit_cycle) - static_cast<int64_t>(t[i - 1].commit_cycle);
    };

    size_t i = 1;
    while (i < left.size()) {
        if (dt(left, i) == dt(right, i)) {
            ++rep.n_matching;
            ++i;
            continue;
        }
        MismatchCluster cluster;
        cluster.start = i;
        while (i < left.size() && dt(left, i) != dt(right, i)) {
            cluster.left_dt.push_back(dt(left, i));
            cluster.right_dt.push_back(dt(right, i));
            ++i;
        }
        cluster.end = i - 1;
        size_t ctx_from = cluster.start >= 2 ? cluster.start - 2 : 0;
        size_t ctx_to = std::min(cluster.end + 2, left.size() - 1);
        for (size_t j = ctx_from; j <= ctx_to; ++j) cluster.context.push_back(format_entry(left[j].entry));
        rep.mismatches.push_back(std::move(cluster));
    }
    rep.accuracy = rep.n_compared == 0
                       ? 1.0
                       : static_cast<double>(rep.n_matching) / static_cast<double>(rep.n_compared);
    return rep;
}

void diff_report(const AccuracyReport& rep, size_t limit, std::ostream& out) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", rep.accuracy);
    out << "accuracy=" << buf << '\n';
    out << "compared=" << rep.n_compared << " matching=" << rep.n_matching
        << " mismatching=" << rep.n_compared - rep.n_matching << '\n';
    out << "cycles_left=" << rep.total_cycles_left << " cycles_right=" << rep.total_cycles_right
        << '\n';
    if (limit == 0) return;
    size_t shown = 0;
    for (const auto& c : rep.mismatches) {
        if (shown == limit) {
            out << "... " << rep.mismatches.size() - shown << " more cluster(s)\n";
            break;
        }
        out << "cluster @" << c.start << ".." << c.end << " left_dt=";
        for (size_t i = 0; i < c.left_dt.size(); ++i) out << (i ? "," : "") << c.left_dt[i];
        out << " right_dt=";
        for (size_t i = 0; i < c.right_dt.size(); ++i) out << (i ? "," : "") << c.right_dt[i];
        out << '\n';
        for (const auto& line : c.context) out << "    " << line << '\n';
        ++shown;
    }
}

std::vector<SweepPoint> sweep(
    const PipelineConfig& base,
    const std::vector<std::pair<std::string, std::vector<std::string>>>& grid,
    const std::vector<TraceEntry>& trace, unsigned jobs) {
    auto sorted = grid;
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [key, values] : sorted) {
        if (!is_config_key(key)) throw ConfigError("unknown sweep key '" + key + "'");
        if (values.empty()) throw ConfigError("sweep key '" + key + "' has no values");
    }

    size_t n_points = 1;
    for (const auto& [key, values] : sorted) n_points *= values.size();

    std::vector<SweepPoint> points(n_points);
    for (size_t p = 0; p < n_points; ++p) {
        size_t rem = p;
        // odometer order: last key fastest
        std::vector<std::pair<std::string, std::string>> assignment(sorted.size());
        for (size_t k = sorted.size(); k-- > 0;) {
            const auto& [key, values] = sorted[k];
            assignment[k] = {key, values[rem % values.size()]};
            rem /= values.size();
        }
        points[p].params = std::move(assignment);
    }

    // Validate every point up front so workers cannot race on errors.
    std::vector<PipelineConfig> configs;
    configs.reserve(n_points);
    for (const auto& pt : points) {
        PipelineConfig cfg = base;
        for (const auto& [key, value] : pt.params) set_config_key(cfg, key, value);
        validate(cfg);
        configs.push_back(std::move(cfg));
    }

    if (jobs == 0) jobs = 1;
    std::atomic<size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            size_t p = next.fetch_add(1);
            if (p >= n_points) return;
            try {
                points[p].stats = simulate(trace, configs[p]).stats;
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    if (jobs == 1 || n_points <= 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (unsigned t = 0; t < std::min<size_t>(jobs, n_points); ++t)
            threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);
    return points;
}

void write_sweep_csv(const std::vector<SweepPoint>& points, std::ostream& out) {
    if (points.empty()) return;
    for (const auto& [key, value] : points.front().params) out << key << ',';
    out << "cycles,ipc,stall_raw,stall_waw,stall_structural,stall_capacity,stall_control,"
           "mispredicts\n";
    for (const auto& pt : points) {
        for (const auto& [key, value] : pt.params) out << value << ',';
        char ipc[32];
        std::snprintf(ipc, sizeof ipc, "%.4f", pt.stats.ipc);
        out << pt.stats.total_cycles << ',' << ipc << ',' << pt.stats.stalls.raw << ','
            << pt.stats.stalls.waw << ',' << pt.stats.stalls.structural << ','
            << pt.stats.stalls.capacity << ',' << pt.stats.stalls.control << ','
            << pt.stats.mispredicts << '\n';
    }
}

}  // namespace rvpipe
