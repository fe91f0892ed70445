#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace rvpipe {

enum class FuClass { Alu, Mul, Load, Store, Branch, Csr };

const char* to_string(FuClass c);

// One execution resource. Units sharing a wb_port cannot deliver results in
// the same cycle; a unit with stages > 1 blocks its port partners for
// stages-1 cycles after accepting an instruction.
struct FUnit {
    std::string name;
    FuClass cls = FuClass::Alu;
    unsigned latency = 1;   // cycles, >= 1
    unsigned wb_port = 0;
    unsigned stages = 1;    // internal pipeline depth
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PipelineConfig {
    unsigned issue_width = 1;
    unsigned commit_width = 1;
    unsigned scoreboard_depth = 8;
    unsigned mispredict_penalty = 6;
    bool renaming = false;
    bool speculative_sb = false;
    unsigned ras_depth = 2;
    unsigned bht_entries = 128;
    std::vector<FUnit> fu_table;

    // Single-issue reference: alu0 and mul0 share wb port 0 (the multiplier
    // is 2-stage pipelined), loads and stores on port 1.
    static PipelineConfig defaults();
};

// Flat "key = value" text; '#' comments; FU sections "[fu.<name>]" with keys
// class|latency|wb_port|stages. Declaring any [fu.*] section replaces the
// default FU table entirely.
PipelineConfig parse_config(std::istream& in);

// Applies one global "key = value" assignment (used by the sweep grid).
void set_config_key(PipelineConfig& cfg, const std::string& key, const std::string& value);

bool is_config_key(const std::string& key);

void validate(const PipelineConfig& cfg);

}  // namespace rvpipe
