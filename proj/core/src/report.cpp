#include "prophetmatch/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace pm {

namespace {

using nlohmann::json;

json config_json(const ExperimentConfig& c) {
    json j;
    j["command"] = c.command;
    j["instance"] = c.instance_ref;
    j["algo"] = c.algo;
    if (!c.c_provenance.empty()) j["c"] = c.c_provenance;
    if (!c.benchmark.empty()) j["benchmark"] = c.benchmark;
    j["mode"] = c.mode;
    if (c.mode == "mc") {
        j["n"] = c.n;
        j["seed"] = c.seed;
    }
    if (!c.eps.empty()) j["eps"] = c.eps;
    j["format"] = c.format;
    return j;
}

}  // namespace

std::string ExperimentReport::to_json() const {
    json j;
    j["config"] = config_json(config);
    json b = json::object();
    for (const auto& [k, v] : benchmarks) b[k] = v;
    j["benchmarks"] = b;
    if (!algorithm_value.empty()) j["value"] = algorithm_value;
    if (!ratio.empty()) j["ratio"] = ratio;
    if (!selectability.empty()) {
        json rows = json::array();
        for (const SelectabilityRow& r : selectability) {
            json row;
            row["t"] = r.t;
            row["event"] = r.event;
            row["element"] = r.element;
            row["conditional"] = r.conditional;
            row["conditional_value"] = r.conditional_value;
            if (config.mode == "mc") {
                row["ci_halfwidth"] = r.ci_halfwidth;
                row["occurrences"] = r.occurrences;
            }
            rows.push_back(row);
        }
        j["selectability"] = rows;
        j["min_selectability"] = min_selectability;
    }
    j["diagnostics"] = diagnostics;
    j["wall_ms"] = wall_ms;
    return j.dump(2) + "\n";
}

std::string ExperimentReport::to_csv() const {
    std::ostringstream out;
    out << "section,key,value\n";
    auto emit = [&](const std::string& s, const std::string& k, const std::string& v) {
        out << s << "," << k << "," << v << "\n";
    };
    emit("config", "command", config.command);
    emit("config", "instance", config.instance_ref);
    emit("config", "algo", config.algo);
    if (!config.c_provenance.empty()) emit("config", "c", config.c_provenance);
    if (!config.benchmark.empty()) emit("config", "benchmark", config.benchmark);
    emit("config", "mode", config.mode);
    if (config.mode == "mc") {
        emit("config", "n", std::to_string(config.n));
        emit("config", "seed", std::to_string(config.seed));
    }
    if (!config.eps.empty()) emit("config", "eps", config.eps);
    for (const auto& [k, v] : benchmarks) emit("benchmark", k, v);
    if (!algorithm_value.empty()) emit("result", "value", algorithm_value);
    if (!ratio.empty()) emit("result", "ratio", ratio);
    if (!min_selectability.empty()) emit("result", "min_selectability", min_selectability);
    for (const SelectabilityRow& r : selectability) {
        out << "selectability," << r.t << ":" << r.event << ":" << r.element << ","
            << r.conditional << "\n";
    }
    for (const std::string& d : diagnostics) emit("diagnostic", "note", d);
    emit("timing", "wall_ms", std::to_string(wall_ms));
    return out.str();
}

std::string ExperimentReport::render(const std::string& format) const {
    if (format == "json") return to_json();
    if (format == "csv") return to_csv();
    throw std::domain_error("unknown report format: " + format);
}

void write_text_atomic(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open " + tmp + " for writing");
        f << content;
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("cannot rename " + tmp + " to " + path);
}

}  // namespace pm
