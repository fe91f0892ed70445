#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "rvpipe/analysis.hpp"
#include "rvpipe/config.hpp"
#include "rvpipe/pipeline.hpp"
#include "rvpipe/trace.hpp"

namespace {

using namespace rvpipe;

std::ifstream open_or_die(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open");
    return in;
}

PipelineConfig load_config(const std::string& path) {
    if (path.empty()) return PipelineConfig::defaults();
    auto in = open_or_die(path);
    try {
        return parse_config(in);
    } catch (const ConfigError& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

std::vector<TraceEntry> load_trace(const std::string& path) {
    auto in = open_or_die(path);
    try {
        return parse_trace(in);
    } catch (const ParseError& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

std::vector<AnnotatedEntry> load_annotated(const std::string& path) {
    auto in = open_or_die(path);
    try {
        auto res = parse_annotated(in);
        for (const auto& w : res.warnings) std::cerr << "warning: " << path << ": " << w << '\n';
        return std::move(res.entries);
    } catch (const ParseError& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

// Interrupted runs must never leave truncated files behind: write to a
// temporary and rename over the target.
void write_file_atomic(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error(tmp + ": cannot open for writing");
        out << content;
        if (!out.flush()) throw std::runtime_error(tmp + ": write failed");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error(path + ": rename failed");
}

int cmd_run(const std::string& trace_path, const std::string& config_path, std::string out_path,
            bool debug, bool verbose_sb) {
    auto trace = load_trace(trace_path);
    auto cfg = load_config(config_path);
    if (out_path.empty()) out_path = trace_path + ".annotated";

    SimOptions opts;
    if (debug) {
        opts.debug = &std::cerr;
        opts.verbose_sb = verbose_sb;
    }
    auto res = simulate(trace, cfg, opts);
    if (res.stats.decode_warnings)
        std::cerr << "warning: " << res.stats.decode_warnings
                  << " encoding(s) not recognized, treated as unmodeled\n";

    std::ostringstream body;
    write_annotated(res.annotated, body);
    write_file_atomic(out_path, body.str());

    char ipc[32];
    std::snprintf(ipc, sizeof ipc, "%.4f", res.stats.ipc);
    std::cout << "cycles=" << res.stats.total_cycles << " ipc=" << ipc << '\n';
    return 0;
}

int cmd_compare(const std::string& left_path, const std::string& right_path, size_t limit) {
    auto left = load_annotated(left_path);
    auto right = load_annotated(right_path);
    auto rep = compute_accuracy(left, right);
    diff_report(rep, limit, std::cout);
    return rep.n_matching == rep.n_compared ? 0 : 2;
}

int cmd_sweep(const std::string& trace_path, const std::string& config_path,
              const std::vector<std::string>& grid_specs, const std::string& out_path,
              unsigned jobs) {
    auto trace = load_trace(trace_path);
    auto cfg = load_config(config_path);

    std::vector<std::pair<std::string, std::vector<std::string>>> grid;
    for (const auto& spec : grid_specs) {
        size_t eq = spec.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size())
            throw std::runtime_error("bad --grid spec '" + spec + "' (expected key=v1,v2,...)");
        std::string key = spec.substr(0, eq);
        std::vector<std::string> values;
        std::stringstream ss(spec.substr(eq + 1));
        std::string v;
        while (std::getline(ss, v, ',')) values.push_back(v);
        grid.emplace_back(key, values);
    }

    auto points = sweep(cfg, grid, trace, jobs);
    std::ostringstream body;
    write_sweep_csv(points, body);
    if (out_path.empty()) {
        std::cout << body.str();
    } else {
        write_file_atomic(out_path, body.str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"trace-driven RISC-V pipeline timing simulator"};
    app.require_subcommand(1);

    std::string trace_path, config_path, out_path, left_path, right_path;
    bool debug = false, verbose_sb = false;
    size_t limit = 10;
    unsigned jobs = std::thread::hardware_concurrency();
    if (jobs == 0) jobs = 1;
    std::vector<std::string> grid_specs;

    auto* run = app.add_subcommand("run", "simulate a trace and write the annotated trace");
    run->add_option("trace", trace_path, "input trace (.rvft)")->required();
    run->add_option("--config", config_path, "pipeline config file");
    run->add_option("--out", out_path, "annotated output path (default: <trace>.annotated)");
    run->add_flag("--debug", debug, "stream per-cycle events to stderr");
    run->add_flag("--verbose-sb", verbose_sb, "add scoreboard dumps to --debug output");

    auto* compare = app.add_subcommand("compare", "compare two annotated traces");
    compare->add_option("left", left_path, "left annotated trace")->required();
    compare->add_option("right", right_path, "right annotated trace")->required();
    compare->add_option("--limit", limit, "max mismatch clusters to print");

    auto* sweep_cmd = app.add_subcommand("sweep", "run a config grid and emit CSV");
    sweep_cmd->add_option("trace", trace_path, "input trace (.rvft)")->required();
    sweep_cmd->add_option("--config", config_path, "base pipeline config file");
    sweep_cmd->add_option("--grid", grid_specs, "grid spec key=v1,v2,... (repeatable)");
    sweep_cmd->add_option("--out", out_path, "CSV output path (default: stdout)");
    sweep_cmd->add_option("--jobs", jobs, "worker threads");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(run)) return cmd_run(trace_path, config_path, out_path, debug, verbose_sb);
        if (app.got_subcommand(compare)) return cmd_compare(left_path, right_path, limit);
        if (app.got_subcommand(sweep_cmd)) return cmd_sweep(trace_path, config_path, grid_specs, out_path, jobs);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
