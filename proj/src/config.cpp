#include "ctqw/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "ctqw/errors.hpp"

namespace ctqw::cli {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
    T out{};
    const char* first = value.data();
    const char* last = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr != last)
        throw config_error(key + ": cannot parse '" + value + "'");
    return out;
}

Mode mode_from_name(const std::string& name) {
    if (name == "dump-distribution") return Mode::DumpDistribution;
    if (name == "timeseries") return Mode::Timeseries;
    if (name == "sweep") return Mode::Sweep;
    if (name == "patch-export") return Mode::PatchExport;
    throw config_error("mode: unknown mode '" + name + "'");
}

}  // namespace

const char* mode_name(Mode m) {
    switch (m) {
        case Mode::DumpDistribution: return "dump-distribution";
        case Mode::Timeseries: return "timeseries";
        case Mode::Sweep: return "sweep";
        case Mode::PatchExport: return "patch-export";
    }
    return "?";
}

std::vector<double> ExperimentConfig::time_grid() const {
    std::vector<double> grid;
    const auto steps = static_cast<long>(std::floor(t_stop / t_step + 1e-9));
    grid.reserve(steps + 1);
    for (long k = 0; k <= steps; ++k) grid.push_back(k * t_step);
    return grid;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    std::map<std::string, std::string> entries;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw config_error(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty())
            throw config_error(path + ":" + std::to_string(lineno) + ": empty key");
        if (!entries.emplace(key, value).second)
            throw config_error(path + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
    return entries;
}

std::vector<double> parse_fraction_list(const std::string& text) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        const std::string item = trim(text.substr(pos, comma - pos));
        if (item.empty()) throw config_error("fractions: empty entry in list '" + text + "'");
        const double f = parse_number<double>("fractions", item);
        if (!(f >= 0.0 && f <= 1.0))
            throw config_error("fractions: value " + item + " outside [0, 1]");
        out.push_back(f);
        pos = comma + 1;
        if (comma == text.size()) break;
    }
    if (out.empty()) throw config_error("fractions: empty list");
    return out;
}

ExperimentConfig parse_config(const std::map<std::string, std::string>& file_entries,
                              const std::map<std::string, std::string>& flag_entries) {
    std::map<std::string, std::string> merged = file_entries;
    for (const auto& [k, v] : flag_entries) merged[k] = v;

    ExperimentConfig cfg;
    bool have_size = false, have_iterations = false;
    for (const auto& [key, value] : merged) {
        if (key == "family") {
            try {
                cfg.family = lattice::family_from_name(value);
            } catch (const invalid_parameter_error& e) {
                throw config_error(std::string("family: ") + e.what());
            }
        } else if (key == "size") {
            cfg.size = parse_number<int>(key, value);
            have_size = true;
        } else if (key == "iterations") {
            cfg.iterations = parse_number<int>(key, value);
            have_iterations = true;
        } else if (key == "origin") {
            if (value.empty()) throw config_error("origin: empty selector");
            cfg.origin = value;
        } else if (key == "zone") {
            cfg.zone_radius = parse_number<std::int32_t>(key, value);
            if (cfg.zone_radius < 0) throw config_error("zone: radius must be non-negative");
        } else if (key == "gamma") {
            cfg.gamma = parse_number<double>(key, value);
            if (!(cfg.gamma > 0.0)) throw config_error("gamma: must be positive");
        } else if (key == "threshold") {
            cfg.threshold = parse_number<double>(key, value);
            if (!(cfg.threshold >= 0.0 && cfg.threshold <= 1.0))
                throw config_error("threshold: must lie in [0, 1]");
        } else if (key == "t-stop") {
            cfg.t_stop = parse_number<double>(key, value);
            if (!(cfg.t_stop > 0.0)) throw config_error("t-stop: must be positive");
        } else if (key == "t-step") {
            cfg.t_step = parse_number<double>(key, value);
            if (!(cfg.t_step > 0.0)) throw config_error("t-step: must be positive");
        } else if (key == "fractions") {
            cfg.fractions = parse_fraction_list(value);
        } else if (key == "trials") {
            cfg.trials = parse_number<int>(key, value);
            if (cfg.trials < 1) throw config_error("trials: must be at least 1");
        } else if (key == "seed") {
            cfg.seed = parse_number<std::uint64_t>(key, value);
        } else if (key == "mode") {
            cfg.mode = mode_from_name(value);
        } else if (key == "out") {
            if (value.empty()) throw config_error("out: empty output path");
            cfg.out = value;
        } else {
            throw config_error("unknown configuration key '" + key + "'");
        }
    }

    if (cfg.family == lattice::Family::Square) {
        if (have_iterations)
            throw config_error("iterations: only applies to the quasiperiodic families");
        if (cfg.size < 2) throw config_error("size: square patches need size >= 2");
    } else {
        if (have_size) throw config_error("size: only applies to the square family");
        if (cfg.iterations < 0)
            throw config_error("iterations: required for the quasiperiodic families");
    }
    if (cfg.out.empty()) throw config_error("out: output path is required");
    return cfg;
}

}  // namespace ctqw::cli
