#include "pairpot/geometry.hpp"

#include <numbers>
#include <stdexcept>

namespace pairpot {

double sphere_measure(int dim) {
    switch (dim) {
        case 1: return 2.0;
        case 2: return 2.0 * std::numbers::pi;
        case 3: return 4.0 * std::numbers::pi;
        default: throw std::invalid_argument("sphere_measure: dim must be 1, 2 or 3");
    }
}

Window::Window(int dim, double side) : dim_(dim), side_(side) {
    if (dim < 1 || dim > 3) throw std::invalid_argument("Window: dim must be 1, 2 or 3");
    if (!(side > 0.0) || !std::isfinite(side)) throw std::invalid_argument("Window: side must be positive and finite");
}

double Window::volume() const {
    double v = side_;
    for (int i = 1; i < dim_; ++i) v *= side_;
    return v;
}

bool Window::contains(const Point& u) const {
    for (int i = 0; i < dim_; ++i) {
        if (u[i] < 0.0 || u[i] > side_) return false;
    }
    return true;
}

ErodedRegion Window::erode(double margin) const {
    if (margin < 0.0 || !std::isfinite(margin)) {
        throw std::invalid_argument("erode: margin must be nonnegative and finite");
    }
    return ErodedRegion(dim_, margin, side_ - margin, margin);
}

ErodedRegion::ErodedRegion(int dim, double lo, double hi, double margin)
    : dim_(dim), lo_(lo), hi_(hi), margin_(margin) {}

double ErodedRegion::volume() const {
    if (empty()) return 0.0;
    double v = hi_ - lo_;
    for (int i = 1; i < dim_; ++i) v *= hi_ - lo_;
    return v;
}

bool ErodedRegion::contains(const Point& u) const {
    if (empty()) return false;
    for (int i = 0; i < dim_; ++i) {
        if (u[i] < lo_ || u[i] > hi_) return false;
    }
    return true;
}

} // namespace pairpot
