#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "pairpot/geometry.hpp"

namespace pairpot {

/// A pattern point returned by a neighborhood query.
struct Neighbor {
    std::size_t index;
    Point position;
    double dist;
};

inline constexpr std::size_t no_index = std::numeric_limits<std::size_t>::max();

/// Immutable finite point set inside a cubic window, indexed by a cell
/// grid sized for a target query radius (the interaction range). The
/// grid keeps queries at radius <= cell edge down to a 3^dim cell scan;
/// larger radii widen the scan and eventually degrade to a full sweep,
/// so every query radius is answered exactly.
///
/// Points keep their insertion order, which fixes iteration order for
/// all consumers.
class PointPattern {
public:
    /// Builds the index with cell edge >= grid_range. A non-positive
    /// grid_range picks a density-based edge instead (queries remain
    /// exact for any radius either way).
    ///
    /// Throws std::invalid_argument when a point lies outside the window
    /// or two points coincide.
    PointPattern(Window window, std::vector<Point> points, double grid_range = 0.0);

    const Window& window() const { return window_; }
    int dim() const { return window_.dim(); }
    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }
    const std::vector<Point>& points() const { return points_; }
    const Point& point(std::size_t i) const { return points_[i]; }
    double grid_cell_edge() const { return cell_edge_; }

    /// All points v != u with ||v - u|| <= radius, with distances.
    /// A pattern point equal to u (distance zero) is excluded.
    std::vector<Neighbor> neighbors_within(const Point& u, double radius) const;

    /// Index-based variant used by the estimators: skips the two given
    /// indices and nothing else (coincident points are reported).
    void neighbors_within_indexed(const Point& u, double radius, std::vector<Neighbor>& out,
                                  std::size_t exclude_a = no_index,
                                  std::size_t exclude_b = no_index) const;

    /// True when some point other than the excluded indices lies within
    /// `radius` of u (inclusive). Early-exits on the first hit.
    bool has_neighbor_within(const Point& u, double radius,
                             std::size_t exclude_a = no_index,
                             std::size_t exclude_b = no_index) const;

    /// min_{v in pattern} ||v - u||, +infinity for an empty pattern.
    double dist_to_nearest(const Point& u) const;

private:
    Window window_;
    std::vector<Point> points_;
    double cell_edge_;
    int cells_per_axis_;
    std::vector<std::uint32_t> cell_start_; // CSR offsets, size ncells+1
    std::vector<std::uint32_t> cell_items_; // point indices grouped by cell

    std::size_t cell_count() const;
    std::size_t flat_cell(const Point& u) const;
    int axis_cell(double x) const;

    template <typename Visit>
    void visit_candidates(const Point& u, double radius, Visit&& visit) const;
};

/// Spec-level name: distance from u to the nearest pattern point.
inline double dist_to_pattern(const Point& u, const PointPattern& pattern) {
    return pattern.dist_to_nearest(u);
}

} // namespace pairpot
