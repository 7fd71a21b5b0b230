#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ctqw/lattice.hpp"

namespace ctqw::cli {

enum class Mode { DumpDistribution, Timeseries, Sweep, PatchExport };

const char* mode_name(Mode m);

struct ExperimentConfig {
    lattice::Family family = lattice::Family::Square;
    int size = 0;         // square edge length (vertices per side)
    int iterations = -1;  // substitution depth for the quasiperiodic families
    std::string origin = "center";
    std::int32_t zone_radius = 40;
    double gamma = 1.0;
    double threshold = 0.02;
    double t_stop = 200.0;
    double t_step = 1.0;
    std::vector<double> fractions = {0.0};
    int trials = 50;
    std::uint64_t seed = 1;
    Mode mode = Mode::Timeseries;
    std::string out;

    std::vector<double> time_grid() const;  // 0, t_step, ..., up to t_stop
};

// Raised for malformed or out-of-range configuration; the offending key is
// named in the message.
struct config_error : std::runtime_error {
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Flat "key = value" file, '#' comments, keys mirroring the CLI flag names.
// Unknown keys are an error (fail closed).
std::map<std::string, std::string> read_config_file(const std::string& path);

// Merges file entries with flag overrides (flags win), validates everything,
// and returns the resolved config.
ExperimentConfig parse_config(const std::map<std::string, std::string>& file_entries,
                              const std::map<std::string, std::string>& flag_entries);

std::vector<double> parse_fraction_list(const std::string& text);

}  // namespace ctqw::cli
