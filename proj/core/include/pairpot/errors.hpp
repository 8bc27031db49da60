#pragma once

#include <stdexcept>
#include <string>

namespace pairpot {

/// Malformed or inconsistent configuration (config files, CLI flags,
/// experiment setups). Mapped to process exit code 2 by the CLI.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// An estimator cannot produce a value from the given data, e.g. the
/// denominator of the intensity estimate vanishes because the pattern
/// saturates the estimation region. Mapped to exit code 3 by the CLI.
class DegenerateEstimateError : public std::runtime_error {
public:
    explicit DegenerateEstimateError(const std::string& what) : std::runtime_error(what) {}
};

/// Requested work exceeds a hard sanity cap (e.g. expected point counts
/// beyond what the process should ever allocate).
class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

/// Operation not defined for the model kind (e.g. asking a triplet
/// interaction for its pair potential).
class UnsupportedModelError : public std::logic_error {
public:
    explicit UnsupportedModelError(const std::string& what) : std::logic_error(what) {}
};

} // namespace pairpot
