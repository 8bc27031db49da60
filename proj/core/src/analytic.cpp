#include "pairpot/analytic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "pairpot/geometry.hpp"

namespace pairpot {

double ball_volume(int dim, double radius) {
    switch (dim) {
        case 1: return 2.0 * radius;
        case 2: return std::numbers::pi * radius * radius;
        case 3: return 4.0 / 3.0 * std::numbers::pi * radius * radius * radius;
        default: throw std::invalid_argument("ball_volume: dim must be 1, 2 or 3");
    }
}

double two_ball_union_volume(int dim, double R, double dist) {
    if (!(R > 0.0) || dist < 0.0) {
        throw std::invalid_argument("two_ball_union_volume: need R > 0 and dist >= 0");
    }
    const double both = 2.0 * ball_volume(dim, R);
    if (dist >= 2.0 * R) return both;
    double lens = 0.0;
    switch (dim) {
        case 1:
            lens = 2.0 * R - dist;
            break;
        case 2:
            lens = 2.0 * R * R * std::acos(dist / (2.0 * R)) -
                   0.5 * dist * std::sqrt(4.0 * R * R - dist * dist);
            break;
        case 3:
            lens = std::numbers::pi / 12.0 * (4.0 * R + dist) * (2.0 * R - dist) * (2.0 * R - dist);
            break;
        default:
            throw std::invalid_argument("two_ball_union_volume: dim must be 1, 2 or 3");
    }
    return both - lens;
}

double poisson_two_point_void(int dim, double beta, double R, double r) {
    return std::exp(-beta * two_ball_union_volume(dim, R, r));
}

double poisson_J(int dim, double beta, double R, double r) {
    // Normalized sphere average of the isotropic two-point void
    // probability: the direction integral equals the integrand.
    return poisson_two_point_void(dim, beta, R, r);
}

double poisson_R_target(int dim, double beta, double R, double r) {
    return beta * beta * poisson_J(dim, beta, R, r);
}

double poisson_variance_constant(int dim, double beta, double R, double r,
                                 double kernel_squared_integral) {
    const double sigma = sphere_measure(dim);
    double r_power = 1.0;
    if (dim == 2) r_power = r;
    else if (dim == 3) r_power = r * r;
    return 2.0 * beta * beta / (sigma * r_power) * poisson_J(dim, beta, R, r) *
           kernel_squared_integral;
}

} // namespace pairpot
