#pragma once

#include <stdexcept>
#include <string>

namespace blockface {

/// Invalid configuration or parameter combination (user-correctable).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Unreadable, malformed, or inconsistent input data (files, datasets, galleries).
struct DataError : std::runtime_error {
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace blockface
