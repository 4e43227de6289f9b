#pragma once

#include <stdexcept>
#include <string>

namespace pinndd {

/// Invalid user-facing configuration (bad dims, degenerate geometry, ...).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Training diverged (non-finite loss or gradient).
class TrainingError : public std::runtime_error {
public:
    explicit TrainingError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pinndd
