#include "pairpot/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pairpot/errors.hpp"

namespace pairpot {

namespace {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();

void require(bool ok, const char* message) {
    if (!ok) throw std::invalid_argument(message);
}

void check_beta(double beta) {
    require(beta > 0.0 && std::isfinite(beta), "Model: beta must be positive and finite");
}

void check_phi(double phi) {
    require(phi >= 0.0 && phi <= 1.0, "Model: interaction phi must lie in [0, 1]");
}

} // namespace

Model Model::poisson(double beta) {
    check_beta(beta);
    Model m;
    m.kind_ = Kind::poisson;
    m.beta_ = beta;
    m.range_ = 0.0;
    return m;
}

Model Model::strauss(double beta, double phi, double range) {
    check_beta(beta);
    check_phi(phi);
    require(range > 0.0 && std::isfinite(range), "Model: range must be positive and finite");
    Model m;
    m.kind_ = Kind::strauss;
    m.beta_ = beta;
    m.range_ = range;
    m.breaks_ = {0.0, range};
    m.phis_ = {phi};
    return m;
}

Model Model::piecewise_strauss(double beta, std::vector<double> breaks, std::vector<double> phis) {
    check_beta(beta);
    require(breaks.size() >= 2, "Model: piecewise breaks need at least {0, range}");
    require(breaks.front() == 0.0, "Model: first break must be 0");
    require(phis.size() == breaks.size() - 1, "Model: need one phi per distance bin");
    for (std::size_t i = 1; i < breaks.size(); ++i) {
        require(breaks[i] > breaks[i - 1] && std::isfinite(breaks[i]),
                "Model: breaks must be strictly increasing and finite");
    }
    for (double phi : phis) check_phi(phi);
    Model m;
    m.kind_ = Kind::piecewise_strauss;
    m.beta_ = beta;
    m.range_ = breaks.back();
    m.breaks_ = std::move(breaks);
    m.phis_ = std::move(phis);
    return m;
}

Model Model::triplets(double beta, double phi, double range) {
    check_beta(beta);
    check_phi(phi);
    require(range > 0.0 && std::isfinite(range), "Model: range must be positive and finite");
    Model m;
    m.kind_ = Kind::triplets;
    m.beta_ = beta;
    m.range_ = range;
    m.phis_ = {phi};
    return m;
}

Model Model::lennard_jones(double beta, double theta, double range) {
    check_beta(beta);
    require(theta > 0.0 && std::isfinite(theta), "Model: theta must be positive and finite");
    require(range > 0.0 && std::isfinite(range), "Model: range must be positive and finite");
    Model m;
    m.kind_ = Kind::lennard_jones;
    m.beta_ = beta;
    m.theta_ = theta;
    m.range_ = range;
    return m;
}

double Model::pair_potential(double r) const {
    if (kind_ == Kind::triplets) {
        throw UnsupportedModelError("pair_potential: triplet interaction is not pairwise");
    }
    require(r > 0.0, "pair_potential: r must be positive");
    return -log_interaction(r);
}

double Model::log_interaction(double r) const {
    if (r > range_) return 0.0;
    switch (kind_) {
        case Kind::poisson:
            return 0.0;
        case Kind::strauss:
            return std::log(phis_[0]);
        case Kind::piecewise_strauss: {
            // r in (breaks[j-1], breaks[j]] -> phi_j.
            const auto it = std::lower_bound(breaks_.begin() + 1, breaks_.end(), r);
            const std::size_t j = static_cast<std::size_t>(it - breaks_.begin()) - 1;
            return std::log(phis_[j]);
        }
        case Kind::lennard_jones: {
            const double s6 = std::pow(theta_ / r, 6.0);
            return s6 - s6 * s6;
        }
        case Kind::triplets:
            break;
    }
    throw UnsupportedModelError("log_interaction: triplet interaction is not pairwise");
}

bool Model::repulsive_on_range() const {
    // Strauss-family potentials are >= 0 everywhere because phi <= 1 is
    // enforced at construction. The Lennard-Jones potential
    // gamma(r) = (theta/r)^12 - (theta/r)^6 turns negative for r > theta,
    // so a range beyond theta has an attractive tail.
    if (kind_ == Kind::lennard_jones) return range_ <= theta_;
    return true;
}

double Model::log_papangelou(const Point& u, const PointPattern& x) const {
    if (kind_ == Kind::poisson) return std::log(beta_);
    const std::vector<Neighbor> in_range = x.neighbors_within(u, range_);
    const Metric metric{x.dim(), x.window().side(), false};
    return log_papangelou_local(u, in_range, metric);
}

double Model::log_papangelou_local(const Point& /*u*/, std::span<const Neighbor> in_range,
                                   const Metric& metric) const {
    switch (kind_) {
        case Kind::poisson:
            return std::log(beta_);
        case Kind::strauss: {
            std::size_t count = 0;
            for (const Neighbor& nb : in_range) {
                if (nb.dist <= range_) ++count;
            }
            if (count == 0) return std::log(beta_);
            if (phis_[0] == 0.0) return neg_inf;
            return std::log(beta_) + static_cast<double>(count) * std::log(phis_[0]);
        }
        case Kind::piecewise_strauss:
        case Kind::lennard_jones: {
            double acc = std::log(beta_);
            for (const Neighbor& nb : in_range) {
                acc += log_interaction(nb.dist);
            }
            return acc;
        }
        case Kind::triplets: {
            // s(x+u) - s(x): one new triplet per pair of range-neighbors
            // of u that are themselves within range of each other.
            std::size_t new_triplets = 0;
            for (std::size_t a = 0; a + 1 < in_range.size(); ++a) {
                if (in_range[a].dist > range_) continue;
                for (std::size_t b = a + 1; b < in_range.size(); ++b) {
                    if (in_range[b].dist > range_) continue;
                    if (metric(in_range[a].position, in_range[b].position) <= range_) {
                        ++new_triplets;
                    }
                }
            }
            if (new_triplets == 0) return std::log(beta_);
            if (phis_[0] == 0.0) return neg_inf;
            return std::log(beta_) + static_cast<double>(new_triplets) * std::log(phis_[0]);
        }
    }
    throw std::logic_error("log_papangelou_local: unknown kind");
}

double Model::log_papangelou_multi(std::span<const Point> points, const PointPattern& x) const {
    require(!points.empty(), "log_papangelou_multi: need at least one point");
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            if (points[i] == points[j]) {
                throw std::invalid_argument("log_papangelou_multi: duplicate point");
            }
        }
        if (x.dist_to_nearest(points[i]) == 0.0) {
            throw std::invalid_argument("log_papangelou_multi: point already in the pattern");
        }
    }

    const Metric metric{x.dim(), x.window().side(), false};
    double total = 0.0;
    std::vector<Neighbor> in_range;
    for (std::size_t k = 0; k < points.size(); ++k) {
        x.neighbors_within_indexed(points[k], range_, in_range);
        for (std::size_t j = 0; j < k; ++j) {
            const double d = metric(points[j], points[k]);
            if (d <= range_) {
                in_range.push_back(Neighbor{no_index, points[j], d});
            }
        }
        total += log_papangelou_local(points[k], in_range, metric);
        if (total == neg_inf) return neg_inf;
    }
    return total;
}

std::string Model::describe() const {
    switch (kind_) {
        case Kind::poisson:
            return "poisson(beta=" + std::to_string(beta_) + ")";
        case Kind::strauss:
            return "strauss(beta=" + std::to_string(beta_) + ", phi=" + std::to_string(phis_[0]) +
                   ", range=" + std::to_string(range_) + ")";
        case Kind::piecewise_strauss: {
            std::string s = "piecewise_strauss(beta=" + std::to_string(beta_) + ", breaks=";
            for (double b : breaks_) s += std::to_string(b) + " ";
            s += ", phis=";
            for (double p : phis_) s += std::to_string(p) + " ";
            s += ")";
            return s;
        }
        case Kind::triplets:
            return "triplets(beta=" + std::to_string(beta_) + ", phi=" + std::to_string(phis_[0]) +
                   ", range=" + std::to_string(range_) + ")";
        case Kind::lennard_jones:
            return "lennard_jones(beta=" + std::to_string(beta_) + ", theta=" + std::to_string(theta_) +
                   ", range=" + std::to_string(range_) + ")";
    }
    return "model";
}

} // namespace pairpot
