// Acceptance suite: exercises every release criterion end to end against
// the bundled traces, configs and golden files. Usage:
//   rvpipe_acceptance <path-to-cli> <repo-root>
// Prints one PASS/FAIL line per criterion; exit status is the failure count.

#include <sys/wait.h>

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "rvpipe/analysis.hpp"
#include "rvpipe/config.hpp"
#include "rvpipe/decode.hpp"
#include "rvpipe/pipeline.hpp"
#include "rvpipe/scoreboard.hpp"
#include "rvpipe/trace.hpp"
#include "support.hpp"

using namespace rvpipe;
namespace fs = std::filesystem;

namespace {

std::string g_cli;
std::string g_root;
std::string g_fail_detail;

#define REQ(cond)                                                              \
    do {                                                                       \
        if (!(cond)) {                                                         \
            g_fail_detail = std::string(#cond) + " (line " +                   \
                            std::to_string(__LINE__) + ")";                    \
            return false;                                                      \
        }                                                                      \
    } while (0)

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<TraceEntry> load_trace(const std::string& rel) {
    std::ifstream in(g_root + "/" + rel);
    if (!in) throw std::runtime_error("cannot open " + rel);
    return parse_trace(in);
}

PipelineConfig load_config(const std::string& rel) {
    std::ifstream in(g_root + "/" + rel);
    if (!in) throw std::runtime_error("cannot open " + rel);
    return parse_config(in);
}

int run_cli(const std::string& args, const std::string& stdout_to) {
    std::string cmd = g_cli + " " + args + " > " + stdout_to + " 2> " + stdout_to + ".err";
    int status = std::system(cmd.c_str());
    if (status == -1) return -1;
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string annotated_bytes(const SimResult& res) {
    std::ostringstream out;
    write_annotated(res.annotated, out);
    return out.str();
}

// 1. interval mask vs brute-force wrapped-interval set builder
bool criterion_interval_mask() {
    for (unsigned n : {4u, 8u, 16u}) {
        for (unsigned a = 0; a < n; ++a) {
            for (unsigned b = 0; b < n; ++b) {
                uint64_t expected = 0;
                unsigned i = a;
                for (;;) {
                    expected |= uint64_t{1} << i;
                    if (i == b) break;
                    i = (i + 1) % n;
                }
                REQ(Scoreboard::interval_mask(a, b, n) == expected);
                REQ(expected != 0);
            }
        }
    }
    return true;
}

// 2. odd/even occupancy predicate vs occupancy counts
bool criterion_occupancy_flags() {
    for (unsigned n = 2; n <= 16; n += 2) {
        for (unsigned start = 0; start < n; ++start) {
            for (unsigned occ = 0; occ <= n; ++occ) {
                Scoreboard sb(n);
                for (unsigned k = 0; k < start; ++k) {
                    sb.push(ScoreboardEntry{});
                    sb.pop_head();
                }
                for (unsigned k = 0; k < occ; ++k) sb.push(ScoreboardEntry{});
                auto flags = sb.occupancy_flags();
                REQ(flags.full == (occ == n));
                REQ(flags.at_most_one_free == (occ >= n - 1));
            }
        }
    }
    return true;
}

// 3. accuracy metric algebra
bool criterion_accuracy_algebra() {
    auto trace = load_trace("traces/corpus/mix_a.rvft");
    auto res = simulate(trace, PipelineConfig::defaults());
    const auto& base = res.annotated;
    size_t n = base.size();
    REQ(n >= 100);

    auto self = compute_accuracy(base, base);
    REQ(self.accuracy == 1.0);
    REQ(self.mismatches.empty());

    auto perturbed = base;
    size_t k = n / 2;
    perturbed[k].commit_cycle += 1;
    auto rep = compute_accuracy(base, perturbed);
    REQ(rep.n_compared == n - 1);
    REQ(rep.n_matching == n - 3);
    REQ(rep.accuracy == static_cast<double>(n - 3) / static_cast<double>(n - 1));

    auto shifted = base;
    for (auto& e : shifted) e.commit_cycle += 17;
    REQ(compute_accuracy(base, shifted).accuracy == 1.0);
    return true;
}

// 4. latency microtraces vs committed golden annotated traces
bool criterion_latency_goldens() {
    PipelineConfig single = load_config("configs/single_issue.cfg");

    auto chain = simulate(load_trace("traces/micro_raw_chain.rvft"), single);
    REQ(annotated_bytes(chain) == slurp(g_root + "/tests/golden/micro_raw_chain.annotated"));
    for (size_t i = 1; i < chain.annotated.size(); ++i) {
        REQ(chain.annotated[i].commit_cycle - chain.annotated[i - 1].commit_cycle == 1);
        REQ(chain.issue_cycles[i] - chain.issue_cycles[i - 1] == 1);
    }

    auto consumer = simulate(load_trace("traces/micro_mul_consumer.rvft"), single);
    REQ(annotated_bytes(consumer) ==
        slurp(g_root + "/tests/golden/micro_mul_consumer.annotated"));
    REQ(consumer.issue_cycles[1] - consumer.issue_cycles[0] == 2);

    PipelineConfig dual_commit = single;
    dual_commit.commit_width = 2;
    auto port_trace = load_trace("traces/micro_mul_port.rvft");
    auto conflict = simulate(port_trace, dual_commit);
    REQ(annotated_bytes(conflict) == slurp(g_root + "/tests/golden/micro_mul_port.annotated"));

    PipelineConfig moved = dual_commit;
    for (auto& fu : moved.fu_table)
        if (fu.cls == FuClass::Mul) fu.wb_port = 9;
    auto free_port = simulate(port_trace, moved);
    unsigned stage2 = 0;
    for (const auto& fu : single.fu_table)
        if (fu.cls == FuClass::Mul) stage2 = fu.stages - 1;
    REQ(stage2 == 1);
    // the shared port delays the independent alu op by exactly the
    // multiplier stage-2 occupancy
    REQ(conflict.issue_cycles[1] - free_port.issue_cycles[1] == stage2);
    REQ(free_port.annotated[1].commit_cycle == 3);
    REQ(conflict.annotated[1].commit_cycle == 4);
    return true;
}

// 5. store commit-port rules on randomized store-dense traces
bool criterion_commit_port_rules() {
    std::mt19937 rng(4242);
    PipelineConfig cfg = load_config("configs/superscalar.cfg");
    cfg.fu_table.push_back({"st1", FuClass::Store, 2, 7, 1});
    cfg.renaming = true;

    for (int round = 0; round < 30; ++round) {
        testsup::TraceBuilder tb;
        for (int i = 0; i < 150; ++i) {
            switch (rng() % 4) {
                case 0:
                case 1: tb.add(testsup::sw_op(1 + rng() % 8, 10 + rng() % 8)); break;
                case 2: tb.add(testsup::add_op(1 + rng() % 8, 10 + rng() % 8, 2)); break;
                default: tb.add(testsup::mul_op(1 + rng() % 8, 10 + rng() % 8, 2)); break;
            }
        }
        auto res = simulate(tb.entries(), cfg);
        REQ(res.annotated.size() == tb.entries().size());
        uint64_t prev = 0;
        unsigned pos = 0;
        uint64_t stores_this_cycle = 0;
        for (size_t i = 0; i < res.annotated.size(); ++i) {
            uint64_t c = res.annotated[i].commit_cycle;
            REQ(c >= prev);
            bool same_cycle = i > 0 && c == prev;
            pos = same_cycle ? pos + 1 : 0;
            if (!same_cycle) stores_this_cycle = 0;
            REQ(pos < cfg.commit_width);
            if (decode(res.annotated[i].entry.raw).cls == OpClass::Store) {
                ++stores_this_cycle;
                REQ(pos == 0);                // never the second retirement
                REQ(stores_this_cycle == 1);  // never two stores in a cycle
            }
            prev = c;
        }
    }
    return true;
}

// 6. control hazards: penalty window and same-cycle issue after a hit
bool criterion_control_hazards() {
    using namespace testsup;
    for (unsigned penalty : {6u, 3u, 1u}) {
        PipelineConfig cfg = PipelineConfig::defaults();
        cfg.mispredict_penalty = penalty;
        TraceBuilder tb;
        tb.add(beq_op(1, 2, 0x40));  // fresh BHT predicts not-taken; taken -> miss
        tb.redirect(tb.next_pc() - 4 + 0x40);
        tb.add(add_op(3, 1, 2));
        auto res = simulate(tb.entries(), cfg);
        REQ(res.stats.mispredicts == 1);
        REQ(res.issue_cycles[1] - res.issue_cycles[0] == penalty);
    }

    auto spec_trace = [] {
        TraceBuilder tb;
        tb.add(beq_op(1, 2, 0x40));  // not taken: predicted correctly
        tb.add(add_op(3, 1, 2));
        return tb.entries();
    }();
    PipelineConfig on = load_config("configs/superscalar.cfg");
    auto res_on = simulate(spec_trace, on);
    REQ(res_on.stats.mispredicts == 0);
    REQ(res_on.issue_cycles[1] - res_on.issue_cycles[0] == 0);

    PipelineConfig off = on;
    off.speculative_sb = false;
    auto res_off = simulate(spec_trace, off);
    REQ(res_off.issue_cycles[1] - res_off.issue_cycles[0] == 1);
    return true;
}

// 7. register renaming removes write-after-write cost and nothing else
bool criterion_renaming() {
    PipelineConfig base = load_config("configs/single_issue.cfg");
    PipelineConfig renamed = base;
    renamed.renaming = true;

    auto waw = load_trace("traces/micro_waw.rvft");
    uint64_t off_cycles = simulate(waw, base).stats.total_cycles;
    uint64_t on_cycles = simulate(waw, renamed).stats.total_cycles;
    REQ(on_cycles < off_cycles);

    auto waw_free = load_trace("traces/micro_waw_free.rvft");
    REQ(simulate(waw_free, base).stats.total_cycles ==
        simulate(waw_free, renamed).stats.total_cycles);
    return true;
}

// 8. width exploration regressions on the bundled corpus + golden cycles
bool criterion_corpus_regressions() {
    PipelineConfig single = load_config("configs/single_issue.cfg");
    PipelineConfig super = load_config("configs/superscalar.cfg");

    std::map<std::string, std::pair<uint64_t, uint64_t>> golden;  // trace -> cycles
    {
        std::istringstream in(slurp(g_root + "/tests/golden/corpus_cycles.csv"));
        std::string line;
        std::getline(in, line);
        REQ(line == "trace,single_cycles,super_cycles");
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::stringstream ss(line);
            std::string name, a, b;
            std::getline(ss, name, ',');
            std::getline(ss, a, ',');
            std::getline(ss, b, ',');
            golden[name] = {std::stoull(a), std::stoull(b)};
        }
        REQ(golden.size() == 3);
    }

    uint64_t single_total = 0, super_total = 0, insn_total = 0;
    for (const auto& name : {"mix_a", "mix_b", "mix_c"}) {
        auto trace = load_trace(std::string("traces/corpus/") + name + ".rvft");
        insn_total += trace.size();

        std::vector<std::pair<std::string, std::vector<std::string>>> grid = {
            {"issue_width", {"1", "2"}},
            {"commit_width", {"1", "2"}},
        };
        auto points = sweep(single, grid, trace, 2);
        REQ(points.size() == 4);
        auto cycles_at = [&](const char* c, const char* i) -> uint64_t {
            for (const auto& p : points)
                if (p.params[0].second == c && p.params[1].second == i)
                    return p.stats.total_cycles;
            return 0;
        };
        REQ(cycles_at("2", "2") <= cycles_at("1", "1"));
        REQ(cycles_at("2", "1") == cycles_at("1", "1"));  // C > I buys nothing

        auto single_run = simulate(trace, single);
        auto super_run = simulate(trace, super);
        uint64_t s = single_run.stats.total_cycles;
        uint64_t d = super_run.stats.total_cycles;
        REQ(s == cycles_at("1", "1"));
        REQ(d <= s);
        // corpus regression: the wide machine never retires an instruction
        // later than the reference
        for (size_t i = 0; i < trace.size(); ++i)
            REQ(super_run.annotated[i].commit_cycle <= single_run.annotated[i].commit_cycle);
        auto it = golden.find(name);
        REQ(it != golden.end());
        REQ(s == it->second.first);
        REQ(d == it->second.second);
        single_total += s;
        super_total += d;
    }
    REQ(insn_total >= 500);
    double factor = static_cast<double>(single_total) / static_cast<double>(super_total);
    std::printf("        corpus: %llu instructions, %llu -> %llu cycles (ipc x%.3f)\n",
                static_cast<unsigned long long>(insn_total),
                static_cast<unsigned long long>(single_total),
                static_cast<unsigned long long>(super_total), factor);
    REQ(factor > 1.0);
    return true;
}

// 9. byte-identical outputs for every subcommand, including parallel sweep
bool criterion_determinism() {
    fs::path tmp = fs::path("acceptance_tmp");
    fs::create_directories(tmp);
    std::string trace = g_root + "/traces/corpus/mix_b.rvft";
    std::string cfg = g_root + "/configs/superscalar.cfg";

    auto out = [&](const std::string& name) { return (tmp / name).string(); };

    for (int i = 0; i < 2; ++i) {
        std::string suffix = std::to_string(i);
        REQ(run_cli("run " + trace + " --config " + cfg + " --out " + out("ann" + suffix),
                    out("run_stdout" + suffix)) == 0);
        REQ(run_cli("sweep " + trace + " --config " + cfg +
                        " --grid issue_width=1,2 --grid commit_width=1,2 --jobs 4 --out " +
                        out("sweep" + suffix),
                    out("sweep_stdout" + suffix)) == 0);
        REQ(run_cli("compare " + out("ann" + suffix) + " " + out("ann" + suffix),
                    out("cmp_stdout" + suffix)) == 0);
    }
    REQ(slurp(out("ann0")) == slurp(out("ann1")));
    REQ(slurp(out("run_stdout0")) == slurp(out("run_stdout1")));
    REQ(slurp(out("sweep0")) == slurp(out("sweep1")));
    REQ(slurp(out("cmp_stdout0")) == slurp(out("cmp_stdout1")));
    REQ(slurp(out("cmp_stdout0")).find("accuracy=1.000000") == 0);

    // a shifted trace must exit 2 and report the cluster
    {
        auto parsed = [&] {
            std::ifstream in(out("ann0"));
            return parse_annotated(in);
        }();
        REQ(!parsed.entries.empty());
        auto shifted = parsed.entries;
        for (size_t i = shifted.size() / 2; i < shifted.size(); ++i)
            shifted[i].commit_cycle += 1;
        std::ofstream o(out("ann_shifted"));
        write_annotated(shifted, o);
    }
    REQ(run_cli("compare " + out("ann0") + " " + out("ann_shifted"), out("cmp_mismatch")) == 2);

    // error paths exit 1: missing file, misaligned streams, bad sweep key
    REQ(run_cli("run " + out("nonexistent.rvft"), out("missing_stdout")) == 1);
    REQ(run_cli("run " + g_root + "/traces/micro_basic.rvft --out " + out("basic.ann"),
                out("basic_stdout")) == 0);
    REQ(run_cli("compare " + out("ann0") + " " + out("basic.ann"), out("cmp_misaligned")) == 1);
    REQ(run_cli("sweep " + trace + " --grid bogus=1", out("sweep_bogus")) == 1);
    return true;
}

// 10. decoder oracle table
bool criterion_decoder_oracle() {
    struct OracleRow {
        uint32_t raw;
        OpClass cls;
        int rd, rs1, rs2;
        unsigned length;
        bool is_call, is_return, unknown;
        const char* name;
    };
    static const OracleRow oracle[] = {
#include "decode_oracle_table.inc"
    };
    auto reg_ok = [](const std::optional<uint8_t>& got, int want) {
        return want < 0 ? !got.has_value() : got.has_value() && *got == want;
    };
    size_t count = 0;
    for (const auto& row : oracle) {
        DecodedOp op = decode(row.raw);
        bool ok = op.cls == row.cls && reg_ok(op.rd, row.rd) && reg_ok(op.rs1, row.rs1) &&
                  reg_ok(op.rs2, row.rs2) && op.length_bytes == row.length &&
                  op.is_call == row.is_call && op.is_return == row.is_return &&
                  op.unknown == row.unknown;
        if (!ok) {
            g_fail_detail = std::string("decode mismatch for ") + row.name;
            return false;
        }
        ++count;
    }
    REQ(count >= 60);
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::cerr << "usage: rvpipe_acceptance <cli-path> <repo-root>\n";
        return 64;
    }
    g_cli = argv[1];
    g_root = argv[2];

    const std::vector<std::pair<std::string, std::function<bool()>>> criteria = {
        {"interval-mask exhaustive oracle", criterion_interval_mask},
        {"odd/even occupancy oracle", criterion_occupancy_flags},
        {"accuracy-metric algebra", criterion_accuracy_algebra},
        {"latency microtraces vs goldens", criterion_latency_goldens},
        {"commit-port rules", criterion_commit_port_rules},
        {"control hazards", criterion_control_hazards},
        {"renaming study", criterion_renaming},
        {"exploration regressions on the corpus", criterion_corpus_regressions},
        {"determinism of every subcommand", criterion_determinism},
        {"decoder oracle", criterion_decoder_oracle},
    };

    int failures = 0;
    for (size_t i = 0; i < criteria.size(); ++i) {
        bool ok = false;
        g_fail_detail.clear();
        try {
            ok = criteria[i].second();
        } catch (const std::exception& e) {
            g_fail_detail = e.what();
        }
        std::printf("[%s] %2zu. %s%s%s\n", ok ? "PASS" : "FAIL", i + 1,
                    criteria[i].first.c_str(), g_fail_detail.empty() ? "" : " -- ",
                    g_fail_detail.c_str());
        if (!ok) ++failures;
    }
    return failures;
}
