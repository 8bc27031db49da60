#pragma once

#include <span>
#include <string>
#include <vector>

#include "pairpot/geometry.hpp"
#include "pairpot/point_pattern.hpp"

namespace pairpot {

/// Interaction model given by its conditional intensity lambda(u, x):
/// the rate of a point at u given the configuration x, known without a
/// normalizing constant. All catalog models have finite range: points
/// farther than range() from u never change lambda(u, x).
///
/// Immutable value object; evaluation functions are pure.
class Model {
public:
    enum class Kind { poisson, strauss, piecewise_strauss, triplets, lennard_jones };

    static Model poisson(double beta);
    static Model strauss(double beta, double phi, double range);
    /// breaks = {0 = r_0 < r_1 < ... < r_p}, interactions phi_1..phi_p on
    /// the half-open distance bins (r_{j-1}, r_j]. Range is breaks.back().
    static Model piecewise_strauss(double beta, std::vector<double> breaks, std::vector<double> phis);
    static Model triplets(double beta, double phi, double range);
    static Model lennard_jones(double beta, double theta, double range);

    Kind kind() const { return kind_; }
    double beta() const { return beta_; }
    double range() const { return range_; }
    double theta() const { return theta_; }
    const std::vector<double>& breaks() const { return breaks_; }
    const std::vector<double>& phis() const { return phis_; }

    /// Everything except the triplet interaction decomposes over pairs.
    bool is_pairwise() const { return kind_ != Kind::triplets; }

    /// gamma(r), the energy of a pair at distance r; zero beyond range().
    /// Throws UnsupportedModelError for the triplet model.
    double pair_potential(double r) const;

    /// log Phi(r) = -gamma(r). Zero beyond range(); may be -inf (hard core).
    double log_interaction(double r) const;

    /// False when gamma dips <= 0 somewhere on (0, range] (Lennard-Jones
    /// attractive tail). Recovery reports carry this as a caveat, since
    /// the estimator's consistency arguments assume a repulsive pair
    /// potential throughout the interaction range.
    bool repulsive_on_range() const;

    /// log lambda(u, x). Pre: u is not a point of x (remove it first).
    double log_papangelou(const Point& u, const PointPattern& x) const;

    /// Same, from a precollected list of the points of x within range()
    /// of u; entries farther than range() may be present and contribute
    /// nothing. `metric` supplies distances between neighbor positions
    /// (needed only by the triplet counts).
    double log_papangelou_local(const Point& u, std::span<const Neighbor> in_range,
                                const Metric& metric) const;

    /// Telescoped multi-point intensity:
    ///   sum_k log lambda(u_k, x + {u_1..u_{k-1}}).
    /// Throws std::invalid_argument when the points are not pairwise
    /// distinct or collide with a point of x.
    double log_papangelou_multi(std::span<const Point> points, const PointPattern& x) const;

    std::string describe() const;

private:
    Model() = default;

    Kind kind_ = Kind::poisson;
    double beta_ = 1.0;
    double range_ = 0.0;
    double theta_ = 0.0;            // lennard_jones scale
    std::vector<double> breaks_;    // piecewise bins; {0, range} for strauss
    std::vector<double> phis_;      // interaction per bin; single entry for strauss/triplets
};

} // namespace pairpot
