#pragma once

#include <cstdint>
#include <vector>

#include "pairpot/geometry.hpp"
#include "pairpot/model.hpp"
#include "pairpot/point_pattern.hpp"

namespace pairpot {

/// Birth-death chain settings. Zero steps/burn_in pick the defaults
/// 20 * beta * |W| and 10 * beta * |W| proposals (at least 1000/2000).
struct ChainConfig {
    std::uint64_t steps = 0;
    std::uint64_t burn_in = 0;
    std::uint64_t seed = 1;

    enum class Initial { empty, poisson };
    Initial initial = Initial::poisson;

    enum class Boundary { free, torus };
    Boundary boundary = Boundary::free;

    /// Concrete config with defaults filled in; enforces burn_in < steps.
    ChainConfig resolved(const Model& model, const Window& window) const;
};

/// Homogeneous Poisson sample: N ~ Poisson(beta |W|) points placed
/// i.i.d.-uniformly. grid_range sizes the returned pattern's index.
/// Throws ResourceError when beta |W| >= 1e8.
PointPattern sample_poisson(const Window& window, double beta, std::uint64_t seed,
                            double grid_range = 0.0);

/// Birth-death Metropolis-Hastings targeting the Gibbs model on the
/// window. Each proposal is a birth (uniform location, accepted with
/// min(1, lambda(u,x) |W| / (n+1))) or a death (uniform victim v,
/// accepted with min(1, n / (lambda(v, x-v) |W|))), an even coin between
/// them. Deaths of points with lambda = 0 are always accepted. Identical
/// seed and config give a bit-identical output pattern.
PointPattern run_birth_death(const Model& model, const Window& window, const ChainConfig& cfg);

/// Test function h(u, x) for the one-point GNZ residual: either the
/// plain indicator of `region`, or that indicator weighted by the
/// R-isolation of u within x.
struct GnzTestFunction {
    enum class Kind { box_indicator, htilde_weighted };
    Kind kind = Kind::box_indicator;
    Box region;
    double isolation_range = 0.0; // htilde radius; 0 = model range
};

/// Balance diagnostic between the point-sum and intensity-integral
/// sides of the one-point GNZ identity, estimated over independent
/// chains. z_score = (lhs - rhs) / mc_stderr; a correct sampler gives
/// standard-normal-like z across repetitions.
struct GnzReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double mc_stderr = 0.0;
    double z_score = 0.0;
    int n_chains = 0;
};

/// lhs: mean over chains of sum over u in (X cap B) of h(u, X-u).
/// rhs: mean over chains of the grid quadrature of h(u, X) lambda(u, X)
/// over B (grid_res nodes per axis, midpoint rule).
/// Chains run in parallel on streams split from cfg.seed.
/// Throws std::invalid_argument when n_chains < 1 or the region leaves
/// the window.
GnzReport gnz_residual(const Model& model, const Window& window, int n_chains,
                       const ChainConfig& cfg, const GnzTestFunction& test_fn,
                       int grid_res = 64);

/// Iterated (two-point) GNZ residual for the ordered-pair statistic
/// f(u, v) = 1_B(u) 1(||v-u|| <= pair_range): the pair sum over the
/// pattern against the double integral of f times the second-order
/// intensity lambda(u, x) lambda(v, x + u). The region must keep a
/// pair_range margin inside the window so the inner ball never leaves
/// it. grid_res controls the outer (per-axis) quadrature; the inner
/// ball uses the same spacing.
GnzReport gnz_pair_residual(const Model& model, const Window& window, int n_chains,
                            const ChainConfig& cfg, const Box& region, double pair_range,
                            int grid_res = 48);

} // namespace pairpot
