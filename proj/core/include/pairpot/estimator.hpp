#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pairpot/geometry.hpp"
#include "pairpot/kernel.hpp"
#include "pairpot/point_pattern.hpp"

namespace pairpot {

/// Inputs shared by the estimators: the interaction range R of the
/// model that produced the pattern, the smoothing kernel and bandwidth,
/// the probe distances, and quadrature resolutions.
struct EstimatorOptions {
    double range = 1.0;            // R
    Kernel kernel{Kernel::Kind::epanechnikov};
    double bandwidth = 0.1;        // b <= R
    std::vector<double> r_grid;    // increasing, each in (0, R]
    int sphere_nodes = 64;         // M >= 16
    int region_grid_res = 128;     // >= 32 nodes per axis

    /// Throws std::invalid_argument when a field is out of contract.
    void validate() const;
};

/// R-isolation indicator: 1 iff every point of x lies strictly farther
/// than `range` from u (1 for an empty pattern). The optional excluded
/// indices spell the X minus {u} / X minus {u, v} variants without
/// copying the pattern.
double htilde(const Point& u, const PointPattern& x, double range,
              std::size_t exclude_a = no_index, std::size_t exclude_b = no_index);

/// Sphere average of the isolation indicator: quadrature of
/// htilde(u + r*v, x) over unit directions v under the normalized
/// sphere measure (total mass 1, the convention that makes
/// Phi_hat = R_hat / (beta_hat J_hat) estimate the interaction
/// function itself). d=1 averages the two directions, d=2 uses M
/// equal-angle nodes, d=3 an M-node Fibonacci sphere. Ranges over
/// [0, 1]; equals 1 for an empty pattern.
double hstar(const Point& u, double r, const PointPattern& x, double range, int sphere_nodes,
             std::size_t exclude = no_index);

/// Intensity estimate: isolated-point count over the R-eroded window
/// divided by the quadrature of htilde(u, X) over the same region.
/// Returns 0 for an empty pattern; throws DegenerateEstimateError when
/// the denominator quadrature vanishes (saturated or empty region).
double estimate_beta(const PointPattern& pattern, const EstimatorOptions& opts);

/// Empirical normalizer: average over pattern points u in the
/// 2R-eroded window of htilde(u, X-u) * hstar(u, r, X-u); estimates
/// beta * J(r). Throws DegenerateEstimateError when the eroded region
/// is empty.
double estimate_J(const PointPattern& pattern, const EstimatorOptions& opts, double r);

/// Edge-corrected kernel estimator of beta^2 J(r) exp(-gamma(r)):
/// sum over ordered pairs (u, v), u in the 2R-eroded window, v within
/// (0, R] of u, both otherwise R-isolated, of
///   K((||v-u|| - r)/b) / ||v-u||^(d-1),
/// normalized by b * |eroded| * sigma_d. An empty sum (or empty eroded
/// region) gives 0.
double estimate_R_hat(const PointPattern& pattern, const EstimatorOptions& opts, double r);

/// Pair-sum estimates for every (bandwidth, probe) combination from a
/// single pair scan of the pattern; row-major [bandwidth][probe].
/// Equivalent to estimate_R_hat per cell, just cheaper.
std::vector<double> estimate_R_hat_batch(const PointPattern& pattern, const EstimatorOptions& opts,
                                         std::span<const double> bandwidths,
                                         std::span<const double> probes);

/// Full per-distance recovery output plus scalars and metadata.
/// Wherever phi_hat > 0, gamma_hat = -log(phi_hat) exactly; otherwise
/// gamma_hat is +infinity and the row is flagged.
struct EstimateReport {
    std::vector<double> r;
    std::vector<double> r_hat;
    std::vector<double> j_hat;
    std::vector<double> phi_hat;
    std::vector<double> gamma_hat;
    std::vector<std::string> flags; // ok | undefined | nonpositive_phi

    double beta_hat = 0.0;
    double eroded_volume = 0.0;
    double sigma_d = 0.0;

    // Provenance carried into the CSV header.
    int dim = 0;
    double window_side = 0.0;
    double range = 0.0;
    double bandwidth = 0.0;
    std::string kernel_name;
    int sphere_nodes = 0;
    int region_grid_res = 0;
    std::uint64_t seed = 0;          // 0 when the pattern came from a file
    bool repulsion_caveat = false;   // model potential not positive over (0, R]
};

/// Ratio estimator Phi_hat(r) = R_hat(r) / (beta_hat * J_hat(r)) over
/// the whole r grid, with per-row flags instead of fatal errors for
/// undefined ratios. Phi_hat is reported raw (not clipped to [0, 1]).
EstimateReport estimate_phi(const PointPattern& pattern, const EstimatorOptions& opts);

/// CSV emission: one '# key=value ...' metadata line, a header row
/// r,R_hat,J_hat,beta_hat,phi_hat,gamma_hat,flags, then one row per
/// probe distance.
std::string estimate_report_to_csv(const EstimateReport& report);

} // namespace pairpot
