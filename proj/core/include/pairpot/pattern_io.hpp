#pragma once

#include <string>

#include "pairpot/point_pattern.hpp"

namespace pairpot {

/// Point-pattern file format:
///   # dim=<d> side=<L>
///   x[,y[,z]] per line, full-precision decimals.
///
/// write_pattern emits coordinates in scientific notation with 17
/// significant digits so a read round-trips bit-exactly.
std::string pattern_to_csv(const PointPattern& pattern);
void write_pattern(const std::string& path, const PointPattern& pattern);

/// Parses a pattern file. `grid_range` sizes the index of the returned
/// pattern (0 = density heuristic). Throws ConfigError on malformed input.
PointPattern read_pattern(const std::string& path, double grid_range = 0.0);
PointPattern pattern_from_csv(const std::string& text, double grid_range = 0.0);

} // namespace pairpot
