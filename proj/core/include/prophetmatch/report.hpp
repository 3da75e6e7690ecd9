#pragma once

#include <map>
#include <string>
#include <vector>

namespace pm {

// Echo of the experiment configuration; serialized verbatim into reports so
// a report can be reproduced from itself.
struct ExperimentConfig {
    std::string command;
    std::string instance_ref;
    std::string algo;
    std::string c_provenance;
    std::string benchmark;
    std::string mode;  // "exact" | "mc"
    uint64_t n = 0;
    uint64_t seed = 0;
    std::string eps;
    std::string format = "json";  // "json" | "csv"
};

struct SelectabilityRow {
    int t = 0;
    std::string event;  // conditioning event, e.g. "{2,3}" or "r=(1/2,0)"
    int element = 0;
    std::string conditional;  // exact "p/q" or decimal text
    double conditional_value = 0;
    double ci_halfwidth = 0;       // mc mode
    uint64_t occurrences = 0;      // mc mode
};

struct ExperimentReport {
    ExperimentConfig config;
    std::map<std::string, std::string> benchmarks;  // name -> value text
    std::string algorithm_value;
    std::string ratio;
    std::vector<SelectabilityRow> selectability;
    std::string min_selectability;
    std::vector<std::string> diagnostics;
    double wall_ms = 0;

    std::string to_json() const;
    std::string to_csv() const;
    std::string render(const std::string& format) const;
};

// Writes via a temp file in the same directory plus rename.
void write_text_atomic(const std::string& path, const std::string& content);

}  // namespace pm
