#pragma once

#include <stdexcept>
#include <string>

namespace ctqw {

// Error categories map onto CLI exit codes: invalid parameter / config -> 2,
// resource limit -> 3, numerical accuracy -> 4.

struct invalid_parameter_error : std::invalid_argument {
    explicit invalid_parameter_error(const std::string& msg) : std::invalid_argument(msg) {}
};

struct resource_limit_error : std::runtime_error {
    explicit resource_limit_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct accuracy_error : std::runtime_error {
    explicit accuracy_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace ctqw
