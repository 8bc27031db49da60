#include "pairpot/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "pairpot/csv.hpp"
#include "pairpot/errors.hpp"

namespace pairpot {

namespace {

/// Ordered pair contributing to the kernel sum: u (eroded interior) and
/// v are each other's only range-neighbors. Sorted canonically so the
/// accumulation order, and hence the floating-point result, does not
/// depend on the pattern's insertion order.
struct IsolatedPair {
    double dist;
    Point u;
    Point v;
};

bool point_less(const Point& a, const Point& b) { return a.coord < b.coord; }

bool pair_less(const IsolatedPair& a, const IsolatedPair& b) {
    if (a.dist != b.dist) return a.dist < b.dist;
    if (a.u.coord != b.u.coord) return point_less(a.u, b.u);
    return point_less(a.v, b.v);
}

std::vector<IsolatedPair> collect_isolated_pairs(const PointPattern& pattern, double range,
                                                 const ErodedRegion& eroded) {
    std::vector<IsolatedPair> pairs;
    if (eroded.empty()) return pairs;
    std::vector<Neighbor> nbrs;
    for (std::size_t i = 0; i < pattern.size(); ++i) {
        const Point& u = pattern.point(i);
        if (!eroded.contains(u)) continue;
        pattern.neighbors_within_indexed(u, range, nbrs, i);
        if (nbrs.size() != 1) continue; // htilde(u, X-{u,v}) needs v as the sole neighbor
        const Neighbor& v = nbrs[0];
        if (pattern.has_neighbor_within(v.position, range, i, v.index)) continue;
        pairs.push_back(IsolatedPair{v.dist, u, v.position});
    }
    std::sort(pairs.begin(), pairs.end(), pair_less);
    return pairs;
}

/// Pattern points inside `eroded` with no range-neighbor at all, in
/// canonical coordinate order.
std::vector<std::size_t> collect_isolated_points(const PointPattern& pattern, double range,
                                                 const ErodedRegion& eroded) {
    std::vector<std::size_t> isolated;
    for (std::size_t i = 0; i < pattern.size(); ++i) {
        const Point& u = pattern.point(i);
        if (!eroded.contains(u)) continue;
        if (pattern.has_neighbor_within(u, range, i)) continue;
        isolated.push_back(i);
    }
    std::sort(isolated.begin(), isolated.end(), [&](std::size_t a, std::size_t b) {
        return point_less(pattern.point(a), pattern.point(b));
    });
    return isolated;
}

double kernel_pair_sum(const std::vector<IsolatedPair>& pairs, const Kernel& kernel, double b,
                       double r, int dim) {
    double acc = 0.0;
    for (const IsolatedPair& p : pairs) {
        const double k = kernel((p.dist - r) / b);
        if (k == 0.0) continue;
        double denom = 1.0;
        if (dim == 2) denom = p.dist;
        else if (dim == 3) denom = p.dist * p.dist;
        acc += k / denom;
    }
    return acc;
}

// Normalized sphere average (unit total mass, not surface measure):
// the kernel estimator's 1/sigma_d normalization and the ratio
// Phi_hat = R_hat / (beta_hat J_hat) both presuppose sphere integrals
// averaged this way; with surface measure the ratio would come out a
// factor sigma_d low.
double hstar_from(const PointPattern& pattern, const Point& u, double r, double range, int nodes,
                  std::size_t exclude) {
    const int dim = pattern.dim();
    if (dim == 1) {
        double acc = 0.0;
        Point node = u;
        node[0] = u[0] + r;
        if (!pattern.has_neighbor_within(node, range, exclude)) acc += 0.5;
        node[0] = u[0] - r;
        if (!pattern.has_neighbor_within(node, range, exclude)) acc += 0.5;
        return acc;
    }
    if (dim == 2) {
        const double weight = 1.0 / nodes;
        double acc = 0.0;
        for (int k = 0; k < nodes; ++k) {
            const double angle = 2.0 * std::numbers::pi * k / nodes;
            const Point node(u[0] + r * std::cos(angle), u[1] + r * std::sin(angle));
            if (!pattern.has_neighbor_within(node, range, exclude)) acc += weight;
        }
        return acc;
    }
    // d = 3: Fibonacci sphere.
    const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
    const double weight = 1.0 / nodes;
    double acc = 0.0;
    for (int k = 0; k < nodes; ++k) {
        const double z = 1.0 - (2.0 * k + 1.0) / nodes;
        const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double azimuth = golden_angle * k;
        const Point node(u[0] + r * rho * std::cos(azimuth), u[1] + r * rho * std::sin(azimuth),
                         u[2] + r * z);
        if (!pattern.has_neighbor_within(node, range, exclude)) acc += weight;
    }
    return acc;
}

void check_r(double r, double range) {
    if (!(r > 0.0) || r > range) {
        throw std::invalid_argument("estimator: probe distance r must lie in (0, range]");
    }
}

} // namespace

void EstimatorOptions::validate() const {
    if (!(range > 0.0) || !std::isfinite(range)) {
        throw std::invalid_argument("EstimatorOptions: range must be positive and finite");
    }
    if (!(bandwidth > 0.0) || bandwidth > range) {
        throw std::invalid_argument("EstimatorOptions: bandwidth must lie in (0, range]");
    }
    if (sphere_nodes < 16) {
        throw std::invalid_argument("EstimatorOptions: sphere_nodes must be >= 16");
    }
    if (region_grid_res < 32) {
        throw std::invalid_argument("EstimatorOptions: region_grid_res must be >= 32");
    }
    for (std::size_t i = 0; i < r_grid.size(); ++i) {
        check_r(r_grid[i], range);
        if (i > 0 && !(r_grid[i] > r_grid[i - 1])) {
            throw std::invalid_argument("EstimatorOptions: r_grid must be strictly increasing");
        }
    }
}

double htilde(const Point& u, const PointPattern& x, double range, std::size_t exclude_a,
              std::size_t exclude_b) {
    return x.has_neighbor_within(u, range, exclude_a, exclude_b) ? 0.0 : 1.0;
}

double hstar(const Point& u, double r, const PointPattern& x, double range, int sphere_nodes,
             std::size_t exclude) {
    if (sphere_nodes < 16) throw std::invalid_argument("hstar: sphere_nodes must be >= 16");
    return hstar_from(x, u, r, range, sphere_nodes, exclude);
}

double estimate_beta(const PointPattern& pattern, const EstimatorOptions& opts) {
    opts.validate();
    const Window& window = pattern.window();
    const ErodedRegion lambda_region = window.erode(opts.range);
    const int dim = pattern.dim();

    // Numerator: isolated pattern points inside the R-eroded window.
    // An integer count, so accumulation order cannot matter.
    double numerator = 0.0;
    for (std::size_t i = 0; i < pattern.size(); ++i) {
        const Point& u = pattern.point(i);
        if (!lambda_region.contains(u)) continue;
        if (!pattern.has_neighbor_within(u, opts.range, i)) numerator += 1.0;
    }

    // Denominator: midpoint quadrature of htilde(u, X) over the region.
    double denominator = 0.0;
    if (!lambda_region.empty()) {
        const int res = opts.region_grid_res;
        const double extent = lambda_region.edge_length();
        const double step = extent / res;
        double cell_volume = step;
        for (int d = 1; d < dim; ++d) cell_volume *= step;

        std::size_t nodes = 1;
        for (int d = 0; d < dim; ++d) nodes *= static_cast<std::size_t>(res);
        double covered = 0.0;
        int idx[3] = {0, 0, 0};
        for (std::size_t g = 0; g < nodes; ++g) {
            std::size_t rem = g;
            for (int d = dim - 1; d >= 0; --d) {
                idx[d] = static_cast<int>(rem % static_cast<std::size_t>(res));
                rem /= static_cast<std::size_t>(res);
            }
            Point u;
            for (int d = 0; d < dim; ++d) u[d] = lambda_region.lo() + (idx[d] + 0.5) * step;
            if (!pattern.has_neighbor_within(u, opts.range)) covered += 1.0;
        }
        denominator = covered * cell_volume;
    }

    if (denominator <= 0.0) {
        throw DegenerateEstimateError(
            "estimate_beta: isolation integral vanished (pattern saturates the eroded window)");
    }
    return numerator / denominator;
}

double estimate_J(const PointPattern& pattern, const EstimatorOptions& opts, double r) {
    opts.validate();
    check_r(r, opts.range);
    const ErodedRegion eroded = pattern.window().erode(2.0 * opts.range);
    if (eroded.empty()) {
        throw DegenerateEstimateError("estimate_J: 2R-eroded window is empty");
    }
    const std::vector<std::size_t> isolated = collect_isolated_points(pattern, opts.range, eroded);
    double acc = 0.0;
    for (std::size_t i : isolated) {
        acc += hstar_from(pattern, pattern.point(i), r, opts.range, opts.sphere_nodes, i);
    }
    return acc / eroded.volume();
}

double estimate_R_hat(const PointPattern& pattern, const EstimatorOptions& opts, double r) {
    const double bandwidths[1] = {opts.bandwidth};
    const double probes[1] = {r};
    return estimate_R_hat_batch(pattern, opts, bandwidths, probes)[0];
}

std::vector<double> estimate_R_hat_batch(const PointPattern& pattern, const EstimatorOptions& opts,
                                         std::span<const double> bandwidths,
                                         std::span<const double> probes) {
    opts.validate();
    for (double b : bandwidths) {
        if (!(b > 0.0) || b > opts.range) {
            throw std::invalid_argument("estimate_R_hat_batch: bandwidth must lie in (0, range]");
        }
    }
    for (double r : probes) check_r(r, opts.range);

    std::vector<double> out(bandwidths.size() * probes.size(), 0.0);
    const ErodedRegion eroded = pattern.window().erode(2.0 * opts.range);
    if (eroded.empty()) return out;
    const std::vector<IsolatedPair> pairs = collect_isolated_pairs(pattern, opts.range, eroded);
    const double norm = eroded.volume() * sphere_measure(pattern.dim());
    for (std::size_t bi = 0; bi < bandwidths.size(); ++bi) {
        for (std::size_t ri = 0; ri < probes.size(); ++ri) {
            const double sum =
                kernel_pair_sum(pairs, opts.kernel, bandwidths[bi], probes[ri], pattern.dim());
            out[bi * probes.size() + ri] = sum / (bandwidths[bi] * norm);
        }
    }
    return out;
}

EstimateReport estimate_phi(const PointPattern& pattern, const EstimatorOptions& opts) {
    opts.validate();
    if (opts.r_grid.empty()) {
        throw std::invalid_argument("estimate_phi: r_grid must not be empty");
    }
    const Window& window = pattern.window();
    const ErodedRegion eroded = window.erode(2.0 * opts.range);
    if (eroded.empty()) {
        throw DegenerateEstimateError("estimate_phi: 2R-eroded window is empty");
    }

    EstimateReport report;
    report.dim = pattern.dim();
    report.window_side = window.side();
    report.range = opts.range;
    report.bandwidth = opts.bandwidth;
    report.kernel_name = opts.kernel.name();
    report.sphere_nodes = opts.sphere_nodes;
    report.region_grid_res = opts.region_grid_res;
    report.sigma_d = sphere_measure(pattern.dim());
    report.eroded_volume = eroded.volume();
    report.beta_hat = estimate_beta(pattern, opts);

    const double bandwidths[1] = {opts.bandwidth};
    const std::vector<double> r_hats = estimate_R_hat_batch(pattern, opts, bandwidths, opts.r_grid);
    const std::vector<std::size_t> isolated = collect_isolated_points(pattern, opts.range, eroded);

    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double inf = std::numeric_limits<double>::infinity();
    for (std::size_t ri = 0; ri < opts.r_grid.size(); ++ri) {
        const double r = opts.r_grid[ri];
        double j_acc = 0.0;
        for (std::size_t i : isolated) {
            j_acc += hstar_from(pattern, pattern.point(i), r, opts.range, opts.sphere_nodes, i);
        }
        const double j_hat = j_acc / eroded.volume();
        const double r_hat = r_hats[ri];

        report.r.push_back(r);
        report.r_hat.push_back(r_hat);
        report.j_hat.push_back(j_hat);
        if (report.beta_hat == 0.0 || j_hat == 0.0) {
            report.phi_hat.push_back(nan);
            report.gamma_hat.push_back(nan);
            report.flags.emplace_back("undefined");
            continue;
        }
        const double phi = r_hat / (report.beta_hat * j_hat);
        report.phi_hat.push_back(phi);
        if (phi > 0.0) {
            report.gamma_hat.push_back(-std::log(phi));
            report.flags.emplace_back("ok");
        } else {
            report.gamma_hat.push_back(inf);
            report.flags.emplace_back("nonpositive_phi");
        }
    }
    return report;
}

std::string estimate_report_to_csv(const EstimateReport& report) {
    std::string out = "# dim=" + std::to_string(report.dim) +
                      " side=" + format_double(report.window_side) +
                      " range=" + format_double(report.range) +
                      " kernel=" + report.kernel_name +
                      " bandwidth=" + format_double(report.bandwidth) +
                      " sphere_nodes=" + std::to_string(report.sphere_nodes) +
                      " region_grid_res=" + std::to_string(report.region_grid_res) +
                      " seed=" + format_u64(report.seed) +
                      " eroded_volume=" + format_double(report.eroded_volume) +
                      " sigma_d=" + format_double(report.sigma_d);
    if (report.repulsion_caveat) out += " caveat=potential_not_positive_on_range";
    out += "\n";
    out += "r,R_hat,J_hat,beta_hat,phi_hat,gamma_hat,flags\n";
    for (std::size_t i = 0; i < report.r.size(); ++i) {
        out += csv_row({format_double(report.r[i]), format_double(report.r_hat[i]),
                        format_double(report.j_hat[i]), format_double(report.beta_hat),
                        format_double(report.phi_hat[i]), format_double(report.gamma_hat[i]),
                        report.flags[i]});
    }
    return out;
}

} // namespace pairpot
