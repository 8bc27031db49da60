#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace pairpot {

/// A point in up to three dimensions. Unused trailing coordinates are
/// kept at zero so Euclidean distance can always be taken over all
/// three components regardless of the ambient dimension.
struct Point {
    std::array<double, 3> coord{0.0, 0.0, 0.0};

    Point() = default;
    explicit Point(double x) : coord{x, 0.0, 0.0} {}
    Point(double x, double y) : coord{x, y, 0.0} {}
    Point(double x, double y, double z) : coord{x, y, z} {}

    double& operator[](int i) { return coord[static_cast<std::size_t>(i)]; }
    double operator[](int i) const { return coord[static_cast<std::size_t>(i)]; }

    friend bool operator==(const Point& a, const Point& b) { return a.coord == b.coord; }
};

inline double squared_distance(const Point& a, const Point& b) {
    const double dx = a.coord[0] - b.coord[0];
    const double dy = a.coord[1] - b.coord[1];
    const double dz = a.coord[2] - b.coord[2];
    return dx * dx + dy * dy + dz * dz;
}

inline double distance(const Point& a, const Point& b) {
    return std::sqrt(squared_distance(a, b));
}

/// Distance functor for a cubic window: plain Euclidean, or wrapped
/// per axis when `torus` is set (used only by the sampler's periodic
/// boundary mode).
struct Metric {
    int dim = 2;
    double side = 0.0;
    bool torus = false;

    double operator()(const Point& a, const Point& b) const {
        if (!torus) return distance(a, b);
        double s2 = 0.0;
        for (int i = 0; i < dim; ++i) {
            double d = std::fabs(a[i] - b[i]);
            if (d > 0.5 * side) d = side - d;
            s2 += d * d;
        }
        return std::sqrt(s2);
    }
};

/// Surface measure of the unit sphere in R^d: 2, 2*pi, 4*pi for d = 1, 2, 3.
double sphere_measure(int dim);

class ErodedRegion;

/// Cubic observation window [0, side]^dim with dim in {1, 2, 3}.
class Window {
public:
    Window(int dim, double side);

    int dim() const { return dim_; }
    double side() const { return side_; }
    double volume() const;
    bool contains(const Point& u) const;

    /// Inner box [margin, side - margin]^dim (Minkowski erosion of a cube
    /// by a ball of radius `margin`). Empty when 2*margin >= side.
    /// Throws std::invalid_argument for a negative margin.
    ErodedRegion erode(double margin) const;

private:
    int dim_;
    double side_;
};

/// Result of eroding a window: the box [lo, hi]^dim, possibly empty.
class ErodedRegion {
public:
    ErodedRegion(int dim, double lo, double hi, double margin);

    int dim() const { return dim_; }
    double margin() const { return margin_; }
    double lo() const { return lo_; }
    double hi() const { return hi_; }
    bool empty() const { return hi_ <= lo_; }
    double edge_length() const { return empty() ? 0.0 : hi_ - lo_; }
    double volume() const;
    bool contains(const Point& u) const;

private:
    int dim_;
    double lo_;
    double hi_;
    double margin_;
};

/// Axis-aligned box, used for GNZ test regions and quadrature domains.
struct Box {
    int dim = 2;
    Point lo;
    Point hi;

    double volume() const {
        double v = 1.0;
        for (int i = 0; i < dim; ++i) {
            const double e = hi[i] - lo[i];
            if (e <= 0.0) return 0.0;
            v *= e;
        }
        return v;
    }
    bool contains(const Point& u) const {
        for (int i = 0; i < dim; ++i) {
            if (u[i] < lo[i] || u[i] > hi[i]) return false;
        }
        return true;
    }
    static Box from_region(const ErodedRegion& region) {
        Box b;
        b.dim = region.dim();
        for (int i = 0; i < b.dim; ++i) {
            b.lo[i] = region.lo();
            b.hi[i] = region.hi();
        }
        return b;
    }
};

/// Free-function spelling of Window::erode.
inline ErodedRegion erode(const Window& window, double margin) { return window.erode(margin); }

} // namespace pairpot
