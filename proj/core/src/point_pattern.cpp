#include "pairpot/point_pattern.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pairpot {

namespace {

double pick_cell_edge(const Window& window, double grid_range, std::size_t n_points) {
    const double side = window.side();
    double range = grid_range;
    if (!(range > 0.0)) {
        // No target radius: aim for O(1) points per cell.
        const double per_axis = std::pow(static_cast<double>(std::max<std::size_t>(n_points, 1)),
                                         1.0 / window.dim());
        range = side / std::max(1.0, std::floor(per_axis));
    }
    // Cell edge >= range so a radius-<=range query scans 3^dim cells.
    return std::max(range, side / std::ceil(side / range));
}

} // namespace

PointPattern::PointPattern(Window window, std::vector<Point> points, double grid_range)
    : window_(window), points_(std::move(points)) {
    for (const Point& p : points_) {
        if (!window_.contains(p)) {
            throw std::invalid_argument("PointPattern: point outside the window");
        }
    }

    // Distinctness is a hard invariant: coincident points break the
    // exclusion logic of the isolation indicators.
    if (points_.size() > 1) {
        std::vector<std::uint32_t> order(points_.size());
        std::iota(order.begin(), order.end(), 0u);
        std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
            return points_[a].coord < points_[b].coord;
        });
        for (std::size_t k = 1; k < order.size(); ++k) {
            if (points_[order[k - 1]].coord == points_[order[k]].coord) {
                throw std::invalid_argument("PointPattern: duplicate point");
            }
        }
    }

    cell_edge_ = pick_cell_edge(window_, grid_range, points_.size());
    cells_per_axis_ = std::max(1, static_cast<int>(std::ceil(window_.side() / cell_edge_)));

    const std::size_t ncells = cell_count();
    cell_start_.assign(ncells + 1, 0);
    cell_items_.resize(points_.size());
    for (const Point& p : points_) ++cell_start_[flat_cell(p) + 1];
    for (std::size_t c = 0; c < ncells; ++c) cell_start_[c + 1] += cell_start_[c];
    std::vector<std::uint32_t> cursor(cell_start_.begin(), cell_start_.end() - 1);
    for (std::size_t i = 0; i < points_.size(); ++i) {
        cell_items_[cursor[flat_cell(points_[i])]++] = static_cast<std::uint32_t>(i);
    }
}

std::size_t PointPattern::cell_count() const {
    std::size_t n = 1;
    for (int i = 0; i < dim(); ++i) n *= static_cast<std::size_t>(cells_per_axis_);
    return n;
}

int PointPattern::axis_cell(double x) const {
    int c = static_cast<int>(std::floor(x / cell_edge_));
    return std::clamp(c, 0, cells_per_axis_ - 1);
}

std::size_t PointPattern::flat_cell(const Point& u) const {
    std::size_t idx = 0;
    for (int i = 0; i < dim(); ++i) {
        idx = idx * static_cast<std::size_t>(cells_per_axis_) + static_cast<std::size_t>(axis_cell(u[i]));
    }
    return idx;
}

template <typename Visit>
void PointPattern::visit_candidates(const Point& u, double radius, Visit&& visit) const {
    const int reach = static_cast<int>(std::ceil(radius / cell_edge_));
    if (2 * reach + 1 >= cells_per_axis_) {
        // Stencil covers the whole grid: plain sweep.
        for (std::size_t i = 0; i < points_.size(); ++i) {
            if (visit(i)) return;
        }
        return;
    }

    int lo[3] = {0, 0, 0};
    int hi[3] = {0, 0, 0};
    for (int i = 0; i < dim(); ++i) {
        const int c = static_cast<int>(std::floor(u[i] / cell_edge_));
        lo[i] = std::clamp(c - reach, 0, cells_per_axis_ - 1);
        hi[i] = std::clamp(c + reach, 0, cells_per_axis_ - 1);
    }
    // Unused axes collapse to the single cell 0.
    int c[3] = {lo[0], lo[1], lo[2]};
    while (true) {
        std::size_t flat = 0;
        for (int i = 0; i < dim(); ++i) {
            flat = flat * static_cast<std::size_t>(cells_per_axis_) + static_cast<std::size_t>(c[i]);
        }
        for (std::uint32_t k = cell_start_[flat]; k < cell_start_[flat + 1]; ++k) {
            if (visit(cell_items_[k])) return;
        }
        int axis = dim() - 1;
        while (axis >= 0) {
            if (++c[axis] <= hi[axis]) break;
            c[axis] = lo[axis];
            --axis;
        }
        if (axis < 0) break;
    }
}

std::vector<Neighbor> PointPattern::neighbors_within(const Point& u, double radius) const {
    std::vector<Neighbor> out;
    const double r2 = radius * radius;
    visit_candidates(u, radius, [&](std::size_t i) {
        const double d2 = squared_distance(points_[i], u);
        if (d2 <= r2 && d2 > 0.0) {
            out.push_back(Neighbor{i, points_[i], std::sqrt(d2)});
        }
        return false;
    });
    return out;
}

void PointPattern::neighbors_within_indexed(const Point& u, double radius, std::vector<Neighbor>& out,
                                            std::size_t exclude_a, std::size_t exclude_b) const {
    out.clear();
    const double r2 = radius * radius;
    visit_candidates(u, radius, [&](std::size_t i) {
        if (i == exclude_a || i == exclude_b) return false;
        const double d2 = squared_distance(points_[i], u);
        if (d2 <= r2) {
            out.push_back(Neighbor{i, points_[i], std::sqrt(d2)});
        }
        return false;
    });
}

bool PointPattern::has_neighbor_within(const Point& u, double radius,
                                       std::size_t exclude_a, std::size_t exclude_b) const {
    const double r2 = radius * radius;
    bool found = false;
    visit_candidates(u, radius, [&](std::size_t i) {
        if (i == exclude_a || i == exclude_b) return false;
        if (squared_distance(points_[i], u) <= r2) {
            found = true;
            return true;
        }
        return false;
    });
    return found;
}

double PointPattern::dist_to_nearest(const Point& u) const {
    double best = std::numeric_limits<double>::infinity();
    for (const Point& p : points_) {
        best = std::min(best, squared_distance(p, u));
    }
    return std::isinf(best) ? best : std::sqrt(best);
}

} // namespace pairpot
