#include "pairpot/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <sstream>

#include "pairpot/analytic.hpp"
#include "pairpot/csv.hpp"
#include "pairpot/errors.hpp"
#include "pairpot/rng.hpp"

namespace pairpot {

namespace {

constexpr double nan_value = std::numeric_limits<double>::quiet_NaN();

/// Runs `body(i)` for i in [0, count) in parallel, surfacing the first
/// worker exception after the loop instead of terminating the process.
template <typename Body>
void parallel_for(int count, Body&& body) {
    std::exception_ptr error = nullptr;
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < count; ++i) {
        try {
            body(i);
        } catch (...) {
#pragma omp critical(pairpot_parallel_for_error)
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
}

/// Stream layout keeping every pattern draw on its own substream:
/// consistency rungs get the high half-space, pilots a disjoint block.
std::uint64_t rung_stream(std::size_t rung, std::size_t replicate) {
    return (static_cast<std::uint64_t>(rung) << 32) + replicate;
}
constexpr std::uint64_t pilot_stream_base = 0x8000000000000000ULL;

PointPattern simulate_pattern(const Model& model, const Window& window, const ChainConfig& chain,
                              std::uint64_t seed, std::uint64_t stream, double grid_range) {
    if (model.kind() == Model::Kind::poisson) {
        return sample_poisson(window, model.beta(), Rng::mix(seed, stream), grid_range);
    }
    ChainConfig cc = chain;
    cc.seed = Rng::mix(seed, stream);
    return run_birth_death(model, window, cc);
}

ChainConfig::Boundary parse_boundary(const std::string& s) {
    if (s == "free") return ChainConfig::Boundary::free;
    if (s == "torus") return ChainConfig::Boundary::torus;
    throw ConfigError("config experiment.boundary: expected free or torus");
}

ChainConfig::Initial parse_initial(const std::string& s) {
    if (s == "empty") return ChainConfig::Initial::empty;
    if (s == "poisson") return ChainConfig::Initial::poisson;
    throw ConfigError("config experiment.initial: expected empty or poisson");
}

struct Rung {
    double side;
    double bandwidth;
};

std::vector<Rung> build_rungs(const ExperimentConfig& cfg) {
    std::vector<Rung> rungs;
    if (!cfg.bandwidths.empty()) {
        for (double b : cfg.bandwidths) rungs.push_back(Rung{cfg.sides.front(), b});
    } else {
        for (double side : cfg.sides) rungs.push_back(Rung{side, cfg.schedule(side)});
    }
    return rungs;
}

double median_of(std::vector<double> v) { return sample_quantile(std::move(v), 0.5); }

} // namespace

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) return nan_value;
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) return nan_value;
    return sxy / sxx;
}

double sample_quantile(std::vector<double> values, double p) {
    if (values.empty()) return nan_value;
    std::sort(values.begin(), values.end());
    const double pos = p * static_cast<double>(values.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] * (1.0 - frac) + values[hi] * frac;
}

Box ExperimentConfig::gnz_region() const {
    const double side = sides.front();
    double pr = gnz_pair_range;
    if (pr <= 0.0) pr = model.range() > 0.0 ? model.range() : 1.0;
    double lo = gnz_lo;
    double hi = gnz_hi;
    if (lo == 0.0 && hi == 0.0) {
        lo = std::max(pr, 0.15 * side);
        hi = side - lo;
    }
    Box box;
    box.dim = dim;
    for (int d = 0; d < dim; ++d) {
        box.lo[d] = lo;
        box.hi[d] = hi;
    }
    return box;
}

ExperimentConfig ExperimentConfig::from_config(ConfigFile& config) {
    ExperimentConfig cfg;
    cfg.model = load_model(config);

    // [window]
    cfg.dim = static_cast<int>(config.get_int("window", "dim"));
    if (cfg.dim < 1 || cfg.dim > 3) throw ConfigError("config window.dim: must be 1, 2 or 3");
    if (auto sides = config.maybe_list("window", "sides")) {
        cfg.sides = *sides;
    } else if (auto side = config.maybe_double("window", "side")) {
        cfg.sides = {*side};
    } else {
        throw ConfigError("config window: need 'sides' or 'side'");
    }
    for (std::size_t i = 0; i < cfg.sides.size(); ++i) {
        if (!(cfg.sides[i] > 0.0)) throw ConfigError("config window.sides: sides must be positive");
        if (i > 0 && !(cfg.sides[i] > cfg.sides[i - 1])) {
            throw ConfigError("config window.sides: ladder must be strictly increasing");
        }
    }

    // [experiment] kind and scalars
    const std::string kind = config.maybe("experiment", "kind").value_or("consistency");
    if (kind == "consistency") cfg.kind = ExperimentKind::consistency;
    else if (kind == "recovery") cfg.kind = ExperimentKind::recovery;
    else if (kind == "gnz") cfg.kind = ExperimentKind::gnz;
    else throw ConfigError("config experiment.kind: unknown kind '" + kind + "'");

    cfg.est_range = config.maybe_double("experiment", "range").value_or(cfg.model.range());
    if (!(cfg.est_range > 0.0)) {
        throw ConfigError("config: estimation range missing (set experiment.range for poisson runs)");
    }

    if (auto reps = config.maybe_int("experiment", "replicates")) {
        if (*reps < 1) throw ConfigError("config experiment.replicates: must be positive");
        cfg.replicates = static_cast<int>(*reps);
    }
    if (auto seed = config.maybe_u64("experiment", "seed")) cfg.seed = *seed;

    // [kernel]
    if (auto kname = config.maybe("kernel", "kind")) {
        auto parsed = Kernel::parse(*kname);
        if (!parsed) throw ConfigError("config kernel.kind: unknown kernel '" + *kname + "'");
        cfg.kernel = Kernel(*parsed);
    }

    // [bandwidth]
    const bool has_constant = config.has("bandwidth", "constant");
    const bool has_power = config.has("bandwidth", "q1") || config.has("bandwidth", "q2");
    const bool has_rule = config.has("bandwidth", "rule");
    if (has_constant + has_power + has_rule > 1) {
        throw ConfigError("config bandwidth: choose one of constant, q1/q2, or rule");
    }
    try {
        if (has_constant) {
            cfg.schedule = BandwidthSchedule::constant(config.get_double("bandwidth", "constant"));
        } else if (has_power) {
            const double q1 = config.maybe_double("bandwidth", "q1").value_or(0.0);
            const double q2 = config.get_double("bandwidth", "q2");
            const double scale = config.maybe_double("bandwidth", "scale").value_or(1.0);
            cfg.schedule = BandwidthSchedule::power_log(q1, q2, scale);
        } else {
            if (has_rule) {
                const std::string rule = config.get("bandwidth", "rule");
                if (rule != "reference") {
                    throw ConfigError("config bandwidth.rule: only 'reference' is recognized");
                }
            }
            cfg.schedule = BandwidthSchedule::reference_rule(cfg.kernel.order(), cfg.dim,
                                                             cfg.est_range, cfg.sides.front());
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config bandwidth: ") + e.what());
    }

    if (auto sweep = config.maybe_list("experiment", "bandwidths")) {
        cfg.bandwidths = *sweep;
        if (cfg.sides.size() != 1) {
            throw ConfigError("config: a bandwidth sweep needs a single window side");
        }
    }

    if (auto probes = config.maybe_list("experiment", "r_probes")) cfg.r_probes = *probes;
    if (auto spec = config.maybe("experiment", "r_grid")) cfg.r_grid = parse_grid_spec(*spec);
    if (auto band = config.maybe_list("experiment", "r_band")) {
        if (band->size() != 2 || !((*band)[0] < (*band)[1])) {
            throw ConfigError("config experiment.r_band: expected lo, hi with lo < hi");
        }
        cfg.band_lo = (*band)[0];
        cfg.band_hi = (*band)[1];
    }

    if (auto v = config.maybe_int("experiment", "sphere_nodes")) cfg.sphere_nodes = static_cast<int>(*v);
    if (auto v = config.maybe_int("experiment", "region_grid_res")) cfg.region_grid_res = static_cast<int>(*v);
    if (cfg.sphere_nodes < 16) throw ConfigError("config experiment.sphere_nodes: must be >= 16");
    if (cfg.region_grid_res < 32) throw ConfigError("config experiment.region_grid_res: must be >= 32");

    if (auto v = config.maybe_u64("experiment", "steps")) cfg.chain.steps = *v;
    if (auto v = config.maybe_u64("experiment", "burn_in")) cfg.chain.burn_in = *v;
    if (auto v = config.maybe("experiment", "boundary")) cfg.chain.boundary = parse_boundary(*v);
    if (auto v = config.maybe("experiment", "initial")) cfg.chain.initial = parse_initial(*v);
    cfg.chain.seed = cfg.seed;

    if (auto v = config.maybe_int("experiment", "chains")) {
        cfg.chains = static_cast<int>(*v);
    }
    if (auto region = config.maybe_list("experiment", "gnz_region")) {
        if (region->size() != 2 || !((*region)[0] < (*region)[1])) {
            throw ConfigError("config experiment.gnz_region: expected lo, hi with lo < hi");
        }
        cfg.gnz_lo = (*region)[0];
        cfg.gnz_hi = (*region)[1];
    }
    if (auto v = config.maybe_double("experiment", "gnz_pair_range")) cfg.gnz_pair_range = *v;
    if (auto v = config.maybe_int("experiment", "gnz_grid_res")) cfg.gnz_grid_res = static_cast<int>(*v);
    if (auto v = config.maybe_int("experiment", "gnz_pair_grid_res")) cfg.gnz_pair_grid_res = static_cast<int>(*v);
    if (auto v = config.maybe("experiment", "out_dir")) cfg.out_dir = *v;
    if (auto v = config.maybe("experiment", "target_fixture")) cfg.target_fixture = *v;

    config.ensure_all_consumed();

    // Cross-field validation.
    for (double side : cfg.sides) {
        if (!(side > 4.0 * cfg.est_range)) {
            throw ConfigError("config: window side " + format_double(side) +
                              " leaves an empty 2R-eroded region (need side > 4R)");
        }
    }
    const auto check_probe = [&](double r, const char* what) {
        if (!(r > 0.0) || r > cfg.est_range) {
            throw ConfigError(std::string("config: ") + what + " must lie in (0, range]");
        }
    };
    for (double r : cfg.r_probes) check_probe(r, "experiment.r_probes");
    for (double r : cfg.r_grid) check_probe(r, "experiment.r_grid");
    if (cfg.band_lo != 0.0 || cfg.band_hi != 0.0) {
        check_probe(cfg.band_lo, "experiment.r_band");
        check_probe(cfg.band_hi, "experiment.r_band");
    }
    for (double b : cfg.bandwidths) {
        if (!(b > 0.0) || b > cfg.est_range) {
            throw ConfigError("config experiment.bandwidths: each bandwidth must lie in (0, range]");
        }
    }

    switch (cfg.kind) {
        case ExperimentKind::consistency: {
            if (cfg.r_probes.empty()) throw ConfigError("config: consistency runs need experiment.r_probes");
            if (cfg.replicates < 30) {
                throw ConfigError("config: consistency runs need replicates >= 30");
            }
            const auto check = cfg.schedule.check(cfg.sides, cfg.dim, cfg.est_range);
            if (!check.bandwidth_below_range) {
                throw ConfigError("config: bandwidth schedule exceeds the estimation range on some rung");
            }
            if (cfg.bandwidths.empty() && !cfg.schedule.is_constant() && cfg.sides.size() > 1) {
                if (!check.bandwidth_shrinks || !check.variance_factor_grows) {
                    throw ConfigError(
                        "config: bandwidth schedule must shrink while b * (L - 4R)^dim grows along the ladder");
                }
            }
            break;
        }
        case ExperimentKind::recovery: {
            if (!cfg.model.is_pairwise()) {
                throw ConfigError("config: recovery needs a pairwise model");
            }
            if (cfg.r_grid.empty()) throw ConfigError("config: recovery runs need experiment.r_grid");
            if (cfg.band_lo == 0.0 && cfg.band_hi == 0.0) {
                throw ConfigError("config: recovery runs need experiment.r_band");
            }
            if (!cfg.bandwidths.empty()) {
                throw ConfigError("config: recovery does not take a bandwidth sweep");
            }
            const double recovery_bandwidth = cfg.schedule(cfg.sides.back());
            if (!(recovery_bandwidth > 0.0) || recovery_bandwidth > cfg.est_range) {
                throw ConfigError("config: recovery bandwidth must lie in (0, range]");
            }
            break;
        }
        case ExperimentKind::gnz: {
            const Box region = cfg.gnz_region();
            double pr = cfg.gnz_pair_range;
            if (pr <= 0.0) pr = cfg.model.range() > 0.0 ? cfg.model.range() : 1.0;
            for (int d = 0; d < cfg.dim; ++d) {
                if (region.lo[d] - pr < 0.0 || region.hi[d] + pr > cfg.sides.front()) {
                    throw ConfigError("config: gnz region must keep a pair-range margin in the window");
                }
            }
            break;
        }
    }
    return cfg;
}

std::vector<double> consistency_pilot_targets(const ExperimentConfig& cfg);

ConvergenceReport run_consistency_experiment(const ExperimentConfig& cfg) {
    const std::vector<Rung> rungs = build_rungs(cfg);
    const std::size_t n_probes = cfg.r_probes.size();
    const std::size_t n_rungs = rungs.size();
    const bool sweep = !cfg.bandwidths.empty();

    EstimatorOptions base;
    base.range = cfg.est_range;
    base.kernel = cfg.kernel;
    base.bandwidth = rungs.front().bandwidth;
    base.sphere_nodes = cfg.sphere_nodes;
    base.region_grid_res = cfg.region_grid_res;

    // Targets: analytic for the Poisson model, pilot fixture otherwise.
    std::vector<double> targets(n_probes, 0.0);
    if (cfg.model.kind() == Model::Kind::poisson) {
        for (std::size_t ri = 0; ri < n_probes; ++ri) {
            targets[ri] = poisson_R_target(cfg.dim, cfg.model.beta(), cfg.est_range, cfg.r_probes[ri]);
        }
    } else {
        targets = consistency_pilot_targets(cfg);
    }

    // values[rung][probe][replicate]
    std::vector<std::vector<std::vector<double>>> values(
        n_rungs, std::vector<std::vector<double>>(n_probes,
                                                  std::vector<double>(static_cast<std::size_t>(cfg.replicates), 0.0)));

    if (sweep) {
        // One pattern set shared by every bandwidth rung.
        const Window window(cfg.dim, cfg.sides.front());
        parallel_for(cfg.replicates, [&](int rep) {
            const PointPattern pattern = simulate_pattern(cfg.model, window, cfg.chain, cfg.seed,
                                                          rung_stream(0, static_cast<std::size_t>(rep)),
                                                          cfg.est_range);
            const std::vector<double> cells =
                estimate_R_hat_batch(pattern, base, cfg.bandwidths, cfg.r_probes);
            for (std::size_t bi = 0; bi < n_rungs; ++bi) {
                for (std::size_t ri = 0; ri < n_probes; ++ri) {
                    values[bi][ri][static_cast<std::size_t>(rep)] = cells[bi * n_probes + ri];
                }
            }
        });
    } else {
        for (std::size_t rung = 0; rung < n_rungs; ++rung) {
            const Window window(cfg.dim, rungs[rung].side);
            const double bandwidth = rungs[rung].bandwidth;
            parallel_for(cfg.replicates, [&](int rep) {
                const PointPattern pattern =
                    simulate_pattern(cfg.model, window, cfg.chain, cfg.seed,
                                     rung_stream(rung, static_cast<std::size_t>(rep)), cfg.est_range);
                const double bs[1] = {bandwidth};
                const std::vector<double> cells =
                    estimate_R_hat_batch(pattern, base, bs, cfg.r_probes);
                for (std::size_t ri = 0; ri < n_probes; ++ri) {
                    values[rung][ri][static_cast<std::size_t>(rep)] = cells[ri];
                }
            });
        }
    }

    ConvergenceReport report;
    report.model_label = cfg.model.describe();
    report.kernel_name = cfg.kernel.name();
    report.seed = cfg.seed;

    for (std::size_t rung = 0; rung < n_rungs; ++rung) {
        const Window window(cfg.dim, rungs[rung].side);
        const double eroded_volume = window.erode(2.0 * cfg.est_range).volume();
        for (std::size_t ri = 0; ri < n_probes; ++ri) {
            const std::vector<double>& xs = values[rung][ri];
            RungStats stats;
            stats.side = rungs[rung].side;
            stats.bandwidth = rungs[rung].bandwidth;
            stats.r = cfg.r_probes[ri];
            stats.replicates = cfg.replicates;
            stats.eroded_volume = eroded_volume;
            double mean = 0.0;
            for (double x : xs) mean += x;
            mean /= static_cast<double>(xs.size());
            double var = 0.0;
            for (double x : xs) var += (x - mean) * (x - mean);
            var /= static_cast<double>(xs.size()); // 1/N so the MSE identity is exact
            stats.mean = mean;
            stats.target = targets[ri];
            stats.bias = mean - targets[ri];
            stats.variance = var;
            stats.scaled_variance = stats.bandwidth * eroded_volume * var;
            stats.mse = var + stats.bias * stats.bias;
            report.rungs.push_back(stats);
        }
    }

    // Per-probe slope fits, summarized by the median across probes.
    const auto slope_for = [&](bool versus_bandwidth, bool of_bias) {
        std::vector<double> per_probe;
        for (std::size_t ri = 0; ri < n_probes; ++ri) {
            std::vector<double> xs;
            std::vector<double> ys;
            for (std::size_t rung = 0; rung < n_rungs; ++rung) {
                const RungStats& s = report.rungs[rung * n_probes + ri];
                const double y = of_bias ? std::fabs(s.bias) : s.variance;
                if (!(y > 0.0)) continue;
                const double volume = std::pow(s.side, cfg.dim);
                xs.push_back(std::log(versus_bandwidth ? s.bandwidth : volume));
                ys.push_back(std::log(y));
            }
            const double slope = least_squares_slope(xs, ys);
            if (std::isfinite(slope)) per_probe.push_back(slope);
        }
        return per_probe.empty() ? nan_value : median_of(per_probe);
    };
    report.slope_log_bias_vs_log_b = slope_for(true, true);
    report.slope_log_var_vs_log_b = slope_for(true, false);
    report.slope_log_bias_vs_log_volume = slope_for(false, true);
    report.slope_log_var_vs_log_volume = slope_for(false, false);
    return report;
}

std::vector<double> consistency_pilot_targets(const ExperimentConfig& cfg) {
    const std::string path = cfg.target_fixture.empty()
                                 ? cfg.out_dir + "/pilot_targets.csv"
                                 : cfg.target_fixture;
    if (std::filesystem::exists(path)) {
        const auto rows = parse_pilot_fixture(read_text_file(path));
        std::vector<double> targets;
        for (double r : cfg.r_probes) {
            const auto it = std::find_if(rows.begin(), rows.end(), [&](const auto& row) {
                return std::fabs(row.first - r) <= 1e-12;
            });
            if (it == rows.end()) {
                throw ConfigError("pilot fixture " + path + " has no target for r=" + format_double(r));
            }
            targets.push_back(it->second);
        }
        return targets;
    }

    // Generate: 10x replicates at the largest rung with the smallest
    // bandwidth in play, on a disjoint seed block.
    const std::vector<Rung> rungs = build_rungs(cfg);
    double side = 0.0;
    double bandwidth = std::numeric_limits<double>::infinity();
    for (const Rung& rung : rungs) {
        side = std::max(side, rung.side);
        bandwidth = std::min(bandwidth, rung.bandwidth);
    }
    const int pilot_replicates = 10 * cfg.replicates;
    const Window window(cfg.dim, side);

    EstimatorOptions opts;
    opts.range = cfg.est_range;
    opts.kernel = cfg.kernel;
    opts.bandwidth = bandwidth;
    opts.sphere_nodes = cfg.sphere_nodes;
    opts.region_grid_res = cfg.region_grid_res;

    std::vector<double> sums(cfg.r_probes.size(), 0.0);
    std::vector<std::vector<double>> cells(static_cast<std::size_t>(pilot_replicates));
    parallel_for(pilot_replicates, [&](int rep) {
        const PointPattern pattern =
            simulate_pattern(cfg.model, window, cfg.chain, cfg.seed,
                             pilot_stream_base + static_cast<std::uint64_t>(rep), cfg.est_range);
        const double bs[1] = {bandwidth};
        cells[static_cast<std::size_t>(rep)] = estimate_R_hat_batch(pattern, opts, bs, cfg.r_probes);
    });
    for (const auto& row : cells) {
        for (std::size_t ri = 0; ri < sums.size(); ++ri) sums[ri] += row[ri];
    }
    for (double& s : sums) s /= static_cast<double>(pilot_replicates);

    std::filesystem::create_directories(std::filesystem::path(path).parent_path().empty()
                                            ? "."
                                            : std::filesystem::path(path).parent_path().string());
    write_text_file(path, pilot_fixture_to_csv(cfg, cfg.r_probes, sums, pilot_replicates, bandwidth));
    return sums;
}

RecoveryReport run_recovery_demo(const ExperimentConfig& cfg) {
    if (!cfg.model.is_pairwise()) {
        throw ConfigError("run_recovery_demo: needs a pairwise model");
    }
    const double side = cfg.sides.back();
    const Window window(cfg.dim, side);
    const double bandwidth = cfg.schedule(side);

    EstimatorOptions opts;
    opts.range = cfg.est_range;
    opts.kernel = cfg.kernel;
    opts.bandwidth = bandwidth;
    opts.r_grid = cfg.r_grid;
    opts.sphere_nodes = cfg.sphere_nodes;
    opts.region_grid_res = cfg.region_grid_res;
    opts.validate();

    std::vector<EstimateReport> reports(static_cast<std::size_t>(cfg.replicates));
    parallel_for(cfg.replicates, [&](int rep) {
        const PointPattern pattern = simulate_pattern(cfg.model, window, cfg.chain, cfg.seed,
                                                      rung_stream(0, static_cast<std::size_t>(rep)),
                                                      cfg.est_range);
        reports[static_cast<std::size_t>(rep)] = estimate_phi(pattern, opts);
    });

    RecoveryReport out;
    out.replicates = cfg.replicates;
    out.side = side;
    out.bandwidth = bandwidth;
    out.band_lo = cfg.band_lo;
    out.band_hi = cfg.band_hi;
    out.repulsion_caveat = !cfg.model.repulsive_on_range();
    out.model_label = cfg.model.describe();
    out.seed = cfg.seed;

    std::vector<double> band_pool;
    for (std::size_t ri = 0; ri < cfg.r_grid.size(); ++ri) {
        const double r = cfg.r_grid[ri];
        std::vector<double> finite;
        for (const EstimateReport& rep : reports) {
            const double g = rep.gamma_hat[ri];
            if (std::isfinite(g)) finite.push_back(g);
        }
        out.r.push_back(r);
        out.gamma_true.push_back(cfg.model.pair_potential(r));
        out.finite_count.push_back(static_cast<int>(finite.size()));
        if (finite.empty()) {
            out.gamma_median.push_back(nan_value);
            out.gamma_q25.push_back(nan_value);
            out.gamma_q75.push_back(nan_value);
        } else {
            out.gamma_median.push_back(sample_quantile(finite, 0.5));
            out.gamma_q25.push_back(sample_quantile(finite, 0.25));
            out.gamma_q75.push_back(sample_quantile(finite, 0.75));
        }
        if (r >= cfg.band_lo && r <= cfg.band_hi) {
            for (double g : finite) band_pool.push_back(g);
        }
    }
    out.band_median_gamma = band_pool.empty() ? nan_value : sample_quantile(band_pool, 0.5);

    double sup = 0.0;
    bool any = false;
    for (std::size_t ri = 0; ri < out.r.size(); ++ri) {
        if (out.r[ri] < cfg.band_lo || out.r[ri] > cfg.band_hi) continue;
        if (!std::isfinite(out.gamma_median[ri])) continue;
        sup = std::max(sup, std::fabs(out.gamma_median[ri] - out.gamma_true[ri]));
        any = true;
    }
    out.sup_discrepancy = any ? sup : nan_value;
    return out;
}

std::vector<GnzCase> validate_sampler(const ExperimentConfig& cfg) {
    if (cfg.chains < 1) throw std::invalid_argument("validate_sampler: need at least one chain");
    const Window window(cfg.dim, cfg.sides.front());
    const Box region = cfg.gnz_region();
    double pair_range = cfg.gnz_pair_range;
    if (pair_range <= 0.0) pair_range = cfg.model.range() > 0.0 ? cfg.model.range() : 1.0;
    const double isolation = cfg.est_range;

    ChainConfig chain = cfg.chain;
    chain.seed = cfg.seed;

    std::vector<GnzCase> cases;
    {
        GnzTestFunction fn;
        fn.kind = GnzTestFunction::Kind::box_indicator;
        fn.region = region;
        cases.push_back(
            {"indicator", 1, gnz_residual(cfg.model, window, cfg.chains, chain, fn, cfg.gnz_grid_res)});
    }
    {
        GnzTestFunction fn;
        fn.kind = GnzTestFunction::Kind::htilde_weighted;
        fn.region = region;
        fn.isolation_range = isolation;
        ChainConfig shifted = chain;
        shifted.seed = Rng::mix(cfg.seed, 0x517cc1b727220a95ULL);
        cases.push_back({"isolation_weighted", 1,
                         gnz_residual(cfg.model, window, cfg.chains, shifted, fn, cfg.gnz_grid_res)});
    }
    {
        ChainConfig shifted = chain;
        shifted.seed = Rng::mix(cfg.seed, 0x2545f4914f6cdd1dULL);
        cases.push_back({"pair_indicator", 2,
                         gnz_pair_residual(cfg.model, window, cfg.chains, shifted, region, pair_range,
                                           cfg.gnz_pair_grid_res)});
    }
    return cases;
}

std::string ConvergenceReport::rungs_csv() const {
    std::string out = "# pairpot-consistency model=" + csv_escape(model_label) +
                      " kernel=" + kernel_name + " seed=" + format_u64(seed) + "\n";
    out += "side,bandwidth,r,replicates,eroded_volume,mean,target,bias,variance,scaled_variance,mse\n";
    for (const RungStats& s : rungs) {
        out += csv_row({format_double(s.side), format_double(s.bandwidth), format_double(s.r),
                        std::to_string(s.replicates), format_double(s.eroded_volume),
                        format_double(s.mean), format_double(s.target), format_double(s.bias),
                        format_double(s.variance), format_double(s.scaled_variance),
                        format_double(s.mse)});
    }
    return out;
}

std::string ConvergenceReport::slopes_csv() const {
    std::string out = "# pairpot-consistency-slopes model=" + csv_escape(model_label) +
                      " kernel=" + kernel_name + " seed=" + format_u64(seed) + "\n";
    out += "regressor,quantity,slope\n";
    out += csv_row({"log_bandwidth", "log_abs_bias", format_double(slope_log_bias_vs_log_b)});
    out += csv_row({"log_bandwidth", "log_variance", format_double(slope_log_var_vs_log_b)});
    out += csv_row({"log_volume", "log_abs_bias", format_double(slope_log_bias_vs_log_volume)});
    out += csv_row({"log_volume", "log_variance", format_double(slope_log_var_vs_log_volume)});
    return out;
}

std::string RecoveryReport::to_csv() const {
    std::string out = "# pairpot-recovery model=" + csv_escape(model_label) +
                      " side=" + format_double(side) + " bandwidth=" + format_double(bandwidth) +
                      " replicates=" + std::to_string(replicates) + " seed=" + format_u64(seed) +
                      " band_lo=" + format_double(band_lo) + " band_hi=" + format_double(band_hi) +
                      " band_median_gamma=" + format_double(band_median_gamma) +
                      " sup_discrepancy=" + format_double(sup_discrepancy);
    if (repulsion_caveat) out += " caveat=potential_not_positive_on_range";
    out += "\n";
    out += "r,gamma_true,gamma_hat_median,gamma_hat_q25,gamma_hat_q75,finite_count\n";
    for (std::size_t i = 0; i < r.size(); ++i) {
        out += csv_row({format_double(r[i]), format_double(gamma_true[i]),
                        format_double(gamma_median[i]), format_double(gamma_q25[i]),
                        format_double(gamma_q75[i]), std::to_string(finite_count[i])});
    }
    return out;
}

std::string gnz_cases_to_csv(const std::vector<GnzCase>& cases, const ExperimentConfig& cfg) {
    std::string out = "# pairpot-gnz model=" + csv_escape(cfg.model.describe()) +
                      " side=" + format_double(cfg.sides.front()) +
                      " chains=" + std::to_string(cfg.chains) + " seed=" + format_u64(cfg.seed) + "\n";
    out += "case,s,lhs,rhs,mc_stderr,z_score\n";
    for (const GnzCase& c : cases) {
        out += csv_row({c.label, std::to_string(c.s), format_double(c.report.lhs),
                        format_double(c.report.rhs), format_double(c.report.mc_stderr),
                        format_double(c.report.z_score)});
    }
    return out;
}

std::string pilot_fixture_to_csv(const ExperimentConfig& cfg, const std::vector<double>& probes,
                                 const std::vector<double>& targets, int pilot_replicates,
                                 double pilot_bandwidth) {
    std::string out = "# pairpot-pilot model=" + csv_escape(cfg.model.describe()) +
                      " dim=" + std::to_string(cfg.dim) +
                      " side=" + format_double(cfg.sides.back()) +
                      " kernel=" + cfg.kernel.name() +
                      " bandwidth=" + format_double(pilot_bandwidth) +
                      " replicates=" + std::to_string(pilot_replicates) +
                      " seed=" + format_u64(cfg.seed) + "\n";
    out += "r,target\n";
    for (std::size_t i = 0; i < probes.size(); ++i) {
        out += csv_row({format_double(probes[i]), format_double(targets[i])});
    }
    return out;
}

std::vector<std::pair<double, double>> parse_pilot_fixture(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.rfind("# pairpot-pilot", 0) != 0) {
        throw ConfigError("pilot fixture: missing '# pairpot-pilot' provenance header");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!std::getline(in, line)) throw ConfigError("pilot fixture: truncated file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "r,target") {
        throw ConfigError("pilot fixture: expected 'r,target' column header");
    }
    std::vector<std::pair<double, double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const std::size_t comma = line.find(',');
        if (comma == std::string::npos) throw ConfigError("pilot fixture: malformed row");
        rows.emplace_back(parse_double(std::string_view(line).substr(0, comma)),
                          parse_double(std::string_view(line).substr(comma + 1)));
    }
    return rows;
}

} // namespace pairpot
