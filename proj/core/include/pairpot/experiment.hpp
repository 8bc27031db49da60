#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pairpot/config.hpp"
#include "pairpot/estimator.hpp"
#include "pairpot/kernel.hpp"
#include "pairpot/model.hpp"
#include "pairpot/sampler.hpp"

namespace pairpot {

enum class ExperimentKind { consistency, recovery, gnz };

/// Fully validated experiment description, usually read from a config
/// file. Windows ladder, replicate counts, kernel/bandwidth plan, probe
/// distances, sampler knobs and output paths.
struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::consistency;
    Model model = Model::poisson(1.0);
    int dim = 2;
    double est_range = 0.0;         // estimation range R (model range unless overridden)
    std::vector<double> sides;      // ladder L_1 < ... < L_m
    int replicates = 30;
    Kernel kernel{Kernel::Kind::epanechnikov};
    BandwidthSchedule schedule = BandwidthSchedule::constant(0.1);
    std::vector<double> bandwidths; // nonempty = bandwidth sweep at a single side
    std::vector<double> r_probes;   // consistency probe distances
    std::vector<double> r_grid;     // recovery estimation grid
    double band_lo = 0.0;           // recovery discrepancy band
    double band_hi = 0.0;
    int sphere_nodes = 64;
    int region_grid_res = 128;
    std::uint64_t seed = 1;
    ChainConfig chain;              // steps/burn_in/boundary/initial template
    int chains = 200;               // gnz chains
    double gnz_lo = 0.0;            // gnz test box [lo, hi]^dim (0,0 = auto)
    double gnz_hi = 0.0;
    double gnz_pair_range = 0.0;    // 0 = model range (or 1 for poisson)
    int gnz_grid_res = 64;
    int gnz_pair_grid_res = 48;
    std::string out_dir = ".";
    std::string target_fixture;     // consistency targets for non-poisson models

    /// Reads and validates every recognized key; throws ConfigError on
    /// anything malformed, including rungs whose 2R-erosion would be
    /// empty (side <= 4R).
    static ExperimentConfig from_config(ConfigFile& config);

    Box gnz_region() const;
};

/// Summary statistics of the pair-sum estimator at one (side,
/// bandwidth, probe) cell. Sample variance uses the 1/N convention so
/// mse = variance + bias^2 holds as an identity.
struct RungStats {
    double side = 0.0;
    double bandwidth = 0.0;
    double r = 0.0;
    int replicates = 0;
    double eroded_volume = 0.0;
    double mean = 0.0;
    double target = 0.0;
    double bias = 0.0;
    double variance = 0.0;
    double scaled_variance = 0.0; // bandwidth * eroded_volume * variance
    double mse = 0.0;
};

struct ConvergenceReport {
    std::vector<RungStats> rungs;
    // Median over probe distances of per-probe least-squares slopes;
    // NaN when the regressor does not vary across rungs.
    double slope_log_bias_vs_log_b = 0.0;
    double slope_log_var_vs_log_b = 0.0;
    double slope_log_bias_vs_log_volume = 0.0;
    double slope_log_var_vs_log_volume = 0.0;
    std::string model_label;
    std::string kernel_name;
    std::uint64_t seed = 0;

    std::string rungs_csv() const;
    std::string slopes_csv() const;
};

/// Simulates `replicates` patterns per rung (exact sampling for the
/// Poisson model, birth-death chains otherwise), evaluates the pair-sum
/// estimator at each probe distance, and reports per-rung bias/variance
/// plus log-log slope fits. Poisson targets are analytic; other models
/// read them from the pilot fixture (generated at 10x replicates and
/// written next to the outputs when missing).
ConvergenceReport run_consistency_experiment(const ExperimentConfig& cfg);

struct RecoveryReport {
    std::vector<double> r;
    std::vector<double> gamma_true;
    std::vector<double> gamma_median;
    std::vector<double> gamma_q25;
    std::vector<double> gamma_q75;
    std::vector<int> finite_count;
    int replicates = 0;
    double side = 0.0;
    double bandwidth = 0.0;
    double band_lo = 0.0;
    double band_hi = 0.0;
    double band_median_gamma = 0.0; // pooled over replicates x band grid
    double sup_discrepancy = 0.0;   // sup over band of |median - true|
    bool repulsion_caveat = false;
    std::string model_label;
    std::uint64_t seed = 0;

    std::string to_csv() const;
};

/// Single-realization pipeline repeated over replicates: simulate,
/// estimate, and summarize the recovered potential against the model's
/// own pair potential. Requires a pairwise model.
RecoveryReport run_recovery_demo(const ExperimentConfig& cfg);

struct GnzCase {
    std::string label;
    int s = 1;
    GnzReport report;
};

/// One-point residuals (plain and isolation-weighted test functions)
/// plus the iterated two-point residual, all at the configured chain
/// count. Throws std::invalid_argument when cfg.chains < 1.
std::vector<GnzCase> validate_sampler(const ExperimentConfig& cfg);

std::string gnz_cases_to_csv(const std::vector<GnzCase>& cases, const ExperimentConfig& cfg);

/// Pilot-target fixture: '# pairpot-pilot ...' provenance line then
/// r,target rows.
std::string pilot_fixture_to_csv(const ExperimentConfig& cfg,
                                 const std::vector<double>& probes,
                                 const std::vector<double>& targets,
                                 int pilot_replicates, double pilot_bandwidth);
std::vector<std::pair<double, double>> parse_pilot_fixture(const std::string& text);

/// Least-squares slope of y against x; NaN when x does not vary or
/// fewer than two points remain.
double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Linear-interpolation quantile of a sample (p in [0,1]); the input
/// need not be sorted.
double sample_quantile(std::vector<double> values, double p);

} // namespace pairpot
