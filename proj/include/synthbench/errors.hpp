#pragma once

#include <stdexcept>
#include <string>

namespace synthbench {

// Schema/header mismatches, unknown columns, bad declarations.
struct SchemaError : std::runtime_error {
    explicit SchemaError(const std::string& msg) : std::runtime_error(msg) {}
};

// Violated operation preconditions (empty input, shape mismatch, ...).
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// Unusable configuration (bad method name, class too small for k, ...).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Non-finite loss during generator training; carries the epoch index.
struct TrainingDivergence : std::runtime_error {
    TrainingDivergence(const std::string& msg, std::size_t epoch_index)
        : std::runtime_error(msg), epoch(epoch_index) {}
    std::size_t epoch;
};

}  // namespace synthbench
