#pragma once

#include <string>
#include <vector>

#include "ctqw/config.hpp"

namespace ctqw::cli {

struct RunResult {
    std::vector<std::string> artifacts;  // files written, manifest last
};

// Executes one experiment end to end: build patch, resolve origin, run the
// requested mode, write CSV/JSON artifacts plus a manifest with the resolved
// config and per-file checksums.  On failure every partially written file is
// removed before the exception propagates.
RunResult run(const ExperimentConfig& config);

}  // namespace ctqw::cli
