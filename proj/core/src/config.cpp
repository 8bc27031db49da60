#include "pairpot/config.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pairpot/csv.hpp"
#include "pairpot/errors.hpp"

namespace pairpot {

namespace {

const char* known_sections[] = {"model", "window", "kernel", "bandwidth", "experiment"};

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<double> parse_double_list(const std::string& value, const std::string& where) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw ConfigError(where + ": empty list element");
        try {
            out.push_back(parse_double(item));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(where + ": " + e.what());
        }
    }
    if (out.empty()) throw ConfigError(where + ": empty list");
    return out;
}

} // namespace

ConfigFile ConfigFile::parse(const std::string& text) {
    ConfigFile cfg;
    std::istringstream in(text);
    std::string line;
    std::string section;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError("config line " + std::to_string(line_no) + ": unterminated section header");
            }
            section = trim(line.substr(1, line.size() - 2));
            const bool known = std::any_of(std::begin(known_sections), std::end(known_sections),
                                           [&](const char* s) { return section == s; });
            if (!known) {
                throw ConfigError("config line " + std::to_string(line_no) + ": unknown section [" +
                                  section + "]");
            }
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        }
        if (section.empty()) {
            throw ConfigError("config line " + std::to_string(line_no) + ": key outside any section");
        }
        Entry entry;
        entry.section = section;
        entry.key = trim(line.substr(0, eq));
        entry.value = trim(line.substr(eq + 1));
        if (entry.key.empty()) {
            throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
        }
        if (cfg.find(entry.section, entry.key)) {
            throw ConfigError("config line " + std::to_string(line_no) + ": duplicate key " +
                              entry.section + "." + entry.key);
        }
        cfg.entries_.push_back(std::move(entry));
    }
    return cfg;
}

ConfigFile ConfigFile::load(const std::string& path) {
    try {
        return parse(read_text_file(path));
    } catch (const std::runtime_error& e) {
        throw ConfigError(e.what());
    }
}

ConfigFile::Entry* ConfigFile::find(const std::string& section, const std::string& key) {
    for (Entry& e : entries_) {
        if (e.section == section && e.key == key) return &e;
    }
    return nullptr;
}

const ConfigFile::Entry* ConfigFile::find(const std::string& section, const std::string& key) const {
    for (const Entry& e : entries_) {
        if (e.section == section && e.key == key) return &e;
    }
    return nullptr;
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
    return find(section, key) != nullptr;
}

std::string ConfigFile::get(const std::string& section, const std::string& key) {
    Entry* e = find(section, key);
    if (!e) throw ConfigError("config: missing required key " + section + "." + key);
    e->consumed = true;
    return e->value;
}

std::optional<std::string> ConfigFile::maybe(const std::string& section, const std::string& key) {
    Entry* e = find(section, key);
    if (!e) return std::nullopt;
    e->consumed = true;
    return e->value;
}

double ConfigFile::get_double(const std::string& section, const std::string& key) {
    const std::string value = get(section, key);
    try {
        return parse_double(value);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("config " + section + "." + key + ": " + e.what());
    }
}

std::optional<double> ConfigFile::maybe_double(const std::string& section, const std::string& key) {
    auto value = maybe(section, key);
    if (!value) return std::nullopt;
    try {
        return parse_double(*value);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("config " + section + "." + key + ": " + e.what());
    }
}

std::int64_t ConfigFile::get_int(const std::string& section, const std::string& key) {
    const double v = get_double(section, key);
    if (v != std::floor(v)) throw ConfigError("config " + section + "." + key + ": expected an integer");
    return static_cast<std::int64_t>(v);
}

std::optional<std::int64_t> ConfigFile::maybe_int(const std::string& section, const std::string& key) {
    auto v = maybe_double(section, key);
    if (!v) return std::nullopt;
    if (*v != std::floor(*v)) throw ConfigError("config " + section + "." + key + ": expected an integer");
    return static_cast<std::int64_t>(*v);
}

std::optional<std::uint64_t> ConfigFile::maybe_u64(const std::string& section, const std::string& key) {
    auto v = maybe_int(section, key);
    if (!v) return std::nullopt;
    if (*v < 0) throw ConfigError("config " + section + "." + key + ": expected a nonnegative integer");
    return static_cast<std::uint64_t>(*v);
}

std::optional<std::vector<double>> ConfigFile::maybe_list(const std::string& section,
                                                          const std::string& key) {
    auto value = maybe(section, key);
    if (!value) return std::nullopt;
    return parse_double_list(*value, "config " + section + "." + key);
}

void ConfigFile::ensure_all_consumed() const {
    std::string unknown;
    for (const Entry& e : entries_) {
        if (!e.consumed) {
            if (!unknown.empty()) unknown += ", ";
            unknown += e.section + "." + e.key;
        }
    }
    if (!unknown.empty()) throw ConfigError("config: unknown key(s): " + unknown);
}

Model load_model(ConfigFile& config) {
    const std::string kind = config.get("model", "kind");
    try {
        if (kind == "poisson") {
            return Model::poisson(config.get_double("model", "beta"));
        }
        if (kind == "strauss") {
            return Model::strauss(config.get_double("model", "beta"),
                                  config.get_double("model", "phi"),
                                  config.get_double("model", "range"));
        }
        if (kind == "piecewise_strauss") {
            const double beta = config.get_double("model", "beta");
            auto breaks = config.maybe_list("model", "breaks");
            auto phis = config.maybe_list("model", "phis");
            if (!breaks || !phis) {
                throw ConfigError("config model: piecewise_strauss needs 'breaks' and 'phis'");
            }
            if (auto declared = config.maybe_double("model", "range")) {
                if (*declared != breaks->back()) {
                    throw ConfigError("config model.range: must equal the last break");
                }
            }
            return Model::piecewise_strauss(beta, *breaks, *phis);
        }
        if (kind == "triplets") {
            return Model::triplets(config.get_double("model", "beta"),
                                   config.get_double("model", "phi"),
                                   config.get_double("model", "range"));
        }
        if (kind == "lennard_jones") {
            return Model::lennard_jones(config.get_double("model", "beta"),
                                        config.get_double("model", "theta"),
                                        config.get_double("model", "range"));
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config model: ") + e.what());
    }
    throw ConfigError("config model.kind: unknown kind '" + kind + "'");
}

std::vector<double> parse_grid_spec(const std::string& spec) {
    const std::size_t c1 = spec.find(':');
    const std::size_t c2 = spec.find(':', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) {
        throw ConfigError("grid spec: expected lo:hi:n, got '" + spec + "'");
    }
    double lo = 0.0;
    double hi = 0.0;
    double count = 0.0;
    try {
        lo = parse_double(spec.substr(0, c1));
        hi = parse_double(spec.substr(c1 + 1, c2 - c1 - 1));
        count = parse_double(spec.substr(c2 + 1));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("grid spec: ") + e.what());
    }
    if (count < 1.0 || count != std::floor(count)) {
        throw ConfigError("grid spec: n must be a positive integer");
    }
    const int n = static_cast<int>(count);
    if (n == 1) {
        if (lo != hi) throw ConfigError("grid spec: n=1 needs lo == hi");
        return {lo};
    }
    if (!(hi > lo)) throw ConfigError("grid spec: need hi > lo");
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        grid.push_back(lo + (hi - lo) * i / (n - 1));
    }
    return grid;
}

} // namespace pairpot
