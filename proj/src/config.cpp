#include "rvpipe/config.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <istream>
#include <map>
#include <optional>

namespace rvpipe {

const char* to_string(FuClass c) {
    switch (c) {
        case FuClass::Alu: return "alu";
        case FuClass::Mul: return "mul";
        case FuClass::Load: return "load";
        case FuClass::Store: return "store";
        case FuClass::Branch: return "branch";
        case FuClass::Csr: return "csr";
    }
    return "?";
}

PipelineConfig PipelineConfig::defaults() {
    PipelineConfig cfg;
    cfg.fu_table = {
        {"alu0", FuClass::Alu, 1, 0, 1},
        {"mul0", FuClass::Mul, 2, 0, 2},
        {"lsu_load", FuClass::Load, 2, 1, 1},
        {"lsu_store", FuClass::Store, 2, 1, 1},
    };
    return cfg;
}

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

unsigned parse_unsigned(const std::string& key, const std::string& value) {
    unsigned v = 0;
    auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v, 10);
    if (ec != std::errc{} || p != value.data() + value.size())
        throw ConfigError(key + ": expected a non-negative integer, got '" + value + "'");
    return v;
}

unsigned parse_positive(const std::string& key, const std::string& value) {
    unsigned v = parse_unsigned(key, value);
    if (v == 0) throw ConfigError(key + " must be positive");
    return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true") return true;
    if (value == "false") return false;
    throw ConfigError(key + ": expected true or false, got '" + value + "'");
}

std::optional<FuClass> class_from_string(const std::string& s) {
    static const std::map<std::string, FuClass> names = {
        {"alu", FuClass::Alu},   {"mul", FuClass::Mul},       {"load", FuClass::Load},
        {"store", FuClass::Store}, {"branch", FuClass::Branch}, {"csr", FuClass::Csr},
    };
    auto it = names.find(s);
    if (it == names.end()) return std::nullopt;
    return it->second;
}

struct FuSection {
    std::string name;
    std::optional<FuClass> cls;
    std::optional<unsigned> latency;
    std::optional<unsigned> wb_port;
    unsigned stages = 1;
};

}  // namespace

bool is_config_key(const std::string& key) {
    static const char* keys[] = {"issue_width",  "commit_width", "scoreboard_depth",
                                 "mispredict_penalty", "renaming", "speculative_sb",
                                 "ras_depth",    "bht_entries"};
    return std::any_of(std::begin(keys), std::end(keys),
                       [&](const char* k) { return key == k; });
}

void set_config_key(PipelineConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "issue_width") cfg.issue_width = parse_positive(key, value);
    else if (key == "commit_width") cfg.commit_width = parse_positive(key, value);
    else if (key == "scoreboard_depth") cfg.scoreboard_depth = parse_positive(key, value);
    else if (key == "mispredict_penalty") cfg.mispredict_penalty = parse_unsigned(key, value);
    else if (key == "renaming") cfg.renaming = parse_bool(key, value);
    else if (key == "speculative_sb") cfg.speculative_sb = parse_bool(key, value);
    else if (key == "ras_depth") cfg.ras_depth = parse_unsigned(key, value);
    else if (key == "bht_entries") cfg.bht_entries = parse_positive(key, value);
    else throw ConfigError("unknown key '" + key + "'");
}

PipelineConfig parse_config(std::istream& in) {
    PipelineConfig cfg = PipelineConfig::defaults();
    std::vector<FuSection> sections;
    FuSection* current = nullptr;

    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;

        auto fail = [&](const std::string& msg) {
            throw ConfigError("line " + std::to_string(lineno) + ": " + msg);
        };

        if (line.front() == '[') {
            if (line.back() != ']') fail("unterminated section header");
            std::string name = trim(line.substr(1, line.size() - 2));
            if (name.rfind("fu.", 0) != 0 || name.size() <= 3)
                fail("unknown section '[" + name + "]' (expected [fu.<name>])");
            name = name.substr(3);
            for (const auto& s : sections)
                if (s.name == name) fail("duplicate FU name '" + name + "'");
            sections.push_back(FuSection{name, {}, {}, {}, 1});
            current = &sections.back();
            continue;
        }

        size_t eq = line.find('=');
        if (eq == std::string::npos) fail("expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) fail("expected 'key = value'");

        if (current) {
            if (key == "class") {
                auto cls = class_from_string(value);
                if (!cls) fail("fu." + current->name + ": unknown class '" + value + "'");
                current->cls = *cls;
            } else if (key == "latency") {
                current->latency = parse_positive("latency", value);
            } else if (key == "wb_port") {
                current->wb_port = parse_unsigned("wb_port", value);
            } else if (key == "stages") {
                current->stages = parse_positive("stages", value);
            } else {
                fail("unknown key '" + key + "' in [fu." + current->name + "]");
            }
        } else {
            try {
                set_config_key(cfg, key, value);
            } catch (const ConfigError& e) {
                fail(e.what());
            }
        }
    }

    if (!sections.empty()) {
        cfg.fu_table.clear();
        for (const auto& s : sections) {
            if (!s.cls) throw ConfigError("fu." + s.name + ": missing class");
            if (!s.latency) throw ConfigError("fu." + s.name + ": missing latency");
            if (!s.wb_port) throw ConfigError("fu." + s.name + ": missing wb_port (no write-back port declared)");
            cfg.fu_table.push_back(FUnit{s.name, *s.cls, *s.latency, *s.wb_port, s.stages});
        }
    }

    validate(cfg);
    return cfg;
}

void validate(const PipelineConfig& cfg) {
    if (cfg.issue_width < 1) throw ConfigError("issue_width must be >= 1");
    if (cfg.commit_width < 1) throw ConfigError("commit_width must be >= 1");
    if (cfg.scoreboard_depth < 2) throw ConfigError("scoreboard_depth must be >= 2");
    if (cfg.scoreboard_depth > 64) throw ConfigError("scoreboard_depth must be <= 64");
    if (cfg.scoreboard_depth % 2) throw ConfigError("scoreboard_depth must be even");
    if (!std::has_single_bit(cfg.bht_entries))
        throw ConfigError("bht_entries must be a power of two");
    for (const auto& fu : cfg.fu_table) {
        if (fu.latency < 1) throw ConfigError("fu." + fu.name + ": latency must be >= 1");
        if (fu.stages < 1) throw ConfigError("fu." + fu.name + ": stages must be >= 1");
        size_t dup = std::count_if(cfg.fu_table.begin(), cfg.fu_table.end(),
                                   [&](const FUnit& o) { return o.name == fu.name; });
        if (dup > 1) throw ConfigError("duplicate FU name '" + fu.name + "'");
    }
}

}  // namespace rvpipe
