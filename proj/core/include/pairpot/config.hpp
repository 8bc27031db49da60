#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pairpot/model.hpp"

namespace pairpot {

/// Flat-keyed configuration text with [section] headers:
///
///   [model]
///   kind = strauss
///   beta = 0.5
///
/// Full-line comments start with '#' or ';'. Values may be scalars or
/// comma-separated lists. Recognized sections are model, window,
/// kernel, bandwidth and experiment; anything else is a hard error, as
/// is any key left unread after loading (catches typos instead of
/// silently ignoring them).
class ConfigFile {
public:
    static ConfigFile parse(const std::string& text);
    static ConfigFile load(const std::string& path);

    bool has(const std::string& section, const std::string& key) const;

    /// Reads and consumes a key; throws ConfigError when missing.
    std::string get(const std::string& section, const std::string& key);
    std::optional<std::string> maybe(const std::string& section, const std::string& key);

    double get_double(const std::string& section, const std::string& key);
    std::optional<double> maybe_double(const std::string& section, const std::string& key);
    std::int64_t get_int(const std::string& section, const std::string& key);
    std::optional<std::int64_t> maybe_int(const std::string& section, const std::string& key);
    std::optional<std::uint64_t> maybe_u64(const std::string& section, const std::string& key);
    std::optional<std::vector<double>> maybe_list(const std::string& section, const std::string& key);

    /// Throws ConfigError naming every key never consumed.
    void ensure_all_consumed() const;

private:
    struct Entry {
        std::string section;
        std::string key;
        std::string value;
        bool consumed = false;
    };
    std::vector<Entry> entries_;

    Entry* find(const std::string& section, const std::string& key);
    const Entry* find(const std::string& section, const std::string& key) const;
};

/// Builds the model from the [model] section: kind, beta, and the
/// kind-specific keys range/phi/breaks/phis/theta.
Model load_model(ConfigFile& config);

/// Parses "lo:hi:n" into n evenly spaced values from lo to hi.
std::vector<double> parse_grid_spec(const std::string& spec);

} // namespace pairpot
