// Acceptance suite: one pass/fail line per criterion, nonzero exit on
// any failure. Each criterion pins its tolerances and its runtime
// budget in code. Pass --cli <path-to-pairpot-binary> so the
// reproducibility criterion can drive the real executable.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "pairpot/analytic.hpp"
#include "pairpot/csv.hpp"
#include "pairpot/estimator.hpp"
#include "pairpot/experiment.hpp"
#include "pairpot/kernel.hpp"
#include "pairpot/model.hpp"
#include "pairpot/pattern_io.hpp"
#include "pairpot/rng.hpp"
#include "pairpot/sampler.hpp"
#include "support/test_support.hpp"

using namespace pairpot;
using namespace pairpot::testing;

namespace {

namespace fs = std::filesystem;

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    double seconds = 0.0;
    double budget_seconds = 0.0;
    std::string detail;
};

std::string cli_path;
fs::path scratch_dir;

double median_abs(std::vector<double> xs) {
    for (double& x : xs) x = std::fabs(x);
    return sample_quantile(std::move(xs), 0.5);
}

// ---------------------------------------------------------------- 1
CriterionResult criterion_oracle_equivalence() {
    CriterionResult res{1, "neighbor queries equal brute force", false, 0.0, 10.0, ""};
    std::mt19937_64 engine(20240518);
    std::uniform_int_distribution<int> size_dist(0, 500);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    int mismatches = 0;
    long long queries = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const int dim = 1 + trial % 3;
        const double side = 8.0 + 12.0 * unit(engine);
        const double range = 0.4 + 1.2 * unit(engine);
        const Window w(dim, side);
        const std::size_t n = static_cast<std::size_t>(size_dist(engine));
        const std::vector<Point> pts = random_points(dim, side, n, 33000 + trial);
        const PointPattern pattern(w, pts, range);

        for (int q = 0; q < 40; ++q) {
            Point u;
            for (int d = 0; d < dim; ++d) u[d] = side * unit(engine);
            const double radius = range * unit(engine);
            std::set<std::size_t> fast;
            for (const Neighbor& nb : pattern.neighbors_within(u, radius)) fast.insert(nb.index);
            std::set<std::size_t> slow;
            for (const BruteNeighbor& nb : brute_force_neighbors(pts, u, radius)) slow.insert(nb.index);
            if (fast != slow) ++mismatches;
            ++queries;
        }
    }
    res.passed = mismatches == 0;
    res.detail = std::to_string(queries) + " queries, " + std::to_string(mismatches) + " mismatches";
    return res;
}

// ---------------------------------------------------------------- 2
CriterionResult criterion_model_algebra() {
    CriterionResult res{2, "model algebra identities at 1e-12", false, 0.0, 5.0, ""};
    std::mt19937_64 engine(7577);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double tol = 1e-12;
    double worst_pairwise = 0.0;
    double worst_exchange = 0.0;

    const Window w(2, 8.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const double beta = 0.2 + 2.0 * unit(engine);
        const double range = 0.5 + unit(engine);
        Model m = Model::poisson(beta);
        switch (trial % 4) {
            case 0: m = Model::strauss(beta, unit(engine), range); break;
            case 1:
                m = Model::piecewise_strauss(beta, {0.0, range * (0.3 + 0.3 * unit(engine)), range},
                                             {unit(engine), unit(engine)});
                break;
            case 2: m = Model::lennard_jones(beta, 0.3 + 0.6 * unit(engine), range); break;
            default: break;
        }
        const std::vector<Point> pts = random_points(2, 8.0, 10 + trial % 25, 60000 + trial);
        const PointPattern x(w, pts, range);
        Point u(8.0 * unit(engine), 8.0 * unit(engine));

        double potential_sum = 0.0;
        for (const Point& v : pts) {
            const double d = distance(v, u);
            if (d <= m.range() && d > 0.0 && m.is_pairwise()) potential_sum += m.pair_potential(d);
        }
        if (m.is_pairwise()) {
            const double lhs = m.log_papangelou(u, x);
            const double rhs = std::log(m.beta()) - potential_sum;
            if (std::isfinite(lhs) && std::isfinite(rhs)) {
                // Relative gap: near-collision Lennard-Jones terms reach
                // ~1e12, where an absolute 1e-12 is below double roundoff.
                const double scale = 1.0 + std::max(std::fabs(lhs), std::fabs(rhs));
                worst_pairwise = std::max(worst_pairwise, std::fabs(lhs - rhs) / scale);
            }
        }

        // Exchangeability for s = 2 and 3 (triplet model included).
        if (trial % 5 == 0) {
            Model xm = trial % 10 == 0 ? Model::triplets(beta, 0.3 + 0.6 * unit(engine), range) : m;
            std::vector<Point> tuple;
            const int s = 2 + trial % 2;
            for (int i = 0; i < s; ++i) {
                tuple.push_back(Point(8.0 * unit(engine), 8.0 * unit(engine)));
            }
            const double reference = xm.log_papangelou_multi(tuple, x);
            if (std::isfinite(reference)) {
                const double scale = 1.0 + std::fabs(reference);
                std::reverse(tuple.begin(), tuple.end());
                worst_exchange = std::max(
                    worst_exchange,
                    std::fabs(xm.log_papangelou_multi(tuple, x) - reference) / scale);
                if (s == 3) {
                    std::swap(tuple[0], tuple[1]);
                    worst_exchange = std::max(
                        worst_exchange,
                        std::fabs(xm.log_papangelou_multi(tuple, x) - reference) / scale);
                }
            }
        }
    }
    res.passed = worst_pairwise <= tol && worst_exchange <= tol;
    res.detail = "max pairwise gap " + format_double(worst_pairwise) + ", max exchange gap " +
                 format_double(worst_exchange);
    return res;
}

// ---------------------------------------------------------------- 3
CriterionResult criterion_gnz() {
    CriterionResult res{3, "gnz residuals |z| <= 3 (s=1,2; poisson+strauss)", false, 0.0, 600.0, ""};
    const Window w(2, 15.0);
    const double beta = 0.5;
    const double range = 1.0;
    const Box region{2, Point(3.0, 3.0), Point(12.0, 12.0)};
    const int chains = 200;

    std::string detail;
    bool all_ok = true;
    const Model models[2] = {Model::poisson(beta), Model::strauss(beta, 0.5, range)};
    const char* names[2] = {"poisson", "strauss"};
    for (int mi = 0; mi < 2; ++mi) {
        std::vector<double> z1;
        std::vector<double> z2;
        for (int batch = 0; batch < 5; ++batch) {
            ChainConfig cfg;
            cfg.seed = Rng::mix(811000 + static_cast<std::uint64_t>(mi), static_cast<std::uint64_t>(batch));
            GnzTestFunction fn;
            fn.region = region;
            z1.push_back(gnz_residual(models[mi], w, chains, cfg, fn).z_score);

            ChainConfig cfg2 = cfg;
            cfg2.seed = Rng::mix(cfg.seed, 0x9e3779b97f4a7c15ULL);
            z2.push_back(gnz_pair_residual(models[mi], w, chains, cfg2, region, range, 40).z_score);
        }
        const double med1 = median_abs(z1);
        const double med2 = median_abs(z2);
        all_ok = all_ok && med1 <= 3.0 && med2 <= 3.0;
        detail += std::string(names[mi]) + ": median|z| s1=" + format_double(med1) +
                  " s2=" + format_double(med2) + "  ";
    }
    res.passed = all_ok;
    res.detail = detail;
    return res;
}

// ---------------------------------------------------------------- 4
CriterionResult criterion_kernels() {
    CriterionResult res{4, "kernel moment and square-integral conditions", false, 0.0, 1.0, ""};
    bool ok = true;
    std::string detail;
    for (Kernel::Kind kind : Kernel::catalog()) {
        const Kernel k(kind);
        const MomentReport mr = check_moments(k, k.order(), 1e-9);
        ok = ok && mr.passed;
        detail += k.name() + (mr.passed ? " ok " : " FAIL ");
    }
    const double epan_sq = Kernel(Kernel::Kind::epanechnikov).squared_integral();
    const double gap = std::fabs(epan_sq - 0.6);
    ok = ok && gap <= 1e-9;
    detail += "epan K^2 gap " + format_double(gap);
    res.passed = ok;
    res.detail = detail;
    return res;
}

// ---------------------------------------------------------------- 5
CriterionResult criterion_unbiasedness() {
    CriterionResult res{5, "pair-sum estimator mean hits beta^2 J(r)", false, 0.0, 900.0, ""};
    const double beta = 0.5;
    const double range = 1.0;
    const double r = 0.6;
    const double bandwidth = 0.15;
    const Window w(2, 30.0);
    const int reps = 200;

    // Analytic target beta^2 J(r) with the lens area cross-checked by
    // direct 2-D integration before it is trusted.
    const double closed = two_ball_union_volume(2, range, r);
    const double numeric = disc_union_area_numeric(range, r, 3000);
    if (std::fabs(closed - numeric) > 2e-3 * closed) {
        res.detail = "lens-area cross-check failed";
        return res;
    }
    const double target = beta * beta * std::exp(-beta * closed);
    if (std::fabs(target - poisson_R_target(2, beta, range, r)) > 1e-15) {
        res.detail = "oracle disagreement between lens form and library target";
        return res;
    }

    EstimatorOptions opts;
    opts.range = range;
    opts.bandwidth = bandwidth;

    std::vector<double> estimates(reps, 0.0);
#pragma omp parallel for schedule(dynamic)
    for (int rep = 0; rep < reps; ++rep) {
        const PointPattern x = sample_poisson(w, beta, Rng::mix(516000, rep), range);
        estimates[static_cast<std::size_t>(rep)] = estimate_R_hat(x, opts, r);
    }
    const double mean = mean_of(estimates);
    const double se = sample_stddev(estimates) / std::sqrt(double(reps));
    const double z = (mean - target) / se;
    res.passed = std::fabs(z) <= 3.0;
    res.detail = "mean " + format_double(mean) + " target " + format_double(target) + " z " +
                 format_double(z);
    return res;
}

// ---------------------------------------------------------------- 6
CriterionResult criterion_bias_order() {
    CriterionResult res{6, "log|bias| vs log b slope in [1.3, 2.7]", false, 0.0, 1800.0, ""};
    const double beta = 0.5;
    const double range = 1.0;
    const double r = 0.6;
    const Window w(2, 40.0);
    const std::vector<double> bandwidths = {0.075, 0.15, 0.3};
    const int reps = 600000;
    const double target = poisson_R_target(2, beta, range, r);

    EstimatorOptions opts;
    opts.range = range;
    opts.bandwidth = bandwidths.front();

    std::vector<double> sums(bandwidths.size(), 0.0);
#pragma omp parallel
    {
        std::vector<double> local(bandwidths.size(), 0.0);
        const double probes[1] = {r};
#pragma omp for schedule(dynamic, 256)
        for (int rep = 0; rep < reps; ++rep) {
            const PointPattern x = sample_poisson(w, beta, Rng::mix(626000, rep), range);
            const std::vector<double> cells = estimate_R_hat_batch(x, opts, bandwidths, probes);
            for (std::size_t bi = 0; bi < local.size(); ++bi) local[bi] += cells[bi];
        }
#pragma omp critical(pairpot_bias_order_reduce)
        for (std::size_t bi = 0; bi < local.size(); ++bi) sums[bi] += local[bi];
    }

    std::vector<double> xs;
    std::vector<double> ys;
    std::string detail = "bias:";
    for (std::size_t bi = 0; bi < bandwidths.size(); ++bi) {
        const double bias = sums[bi] / reps - target;
        detail += " " + format_double(bias);
        if (std::fabs(bias) > 0.0) {
            xs.push_back(std::log(bandwidths[bi]));
            ys.push_back(std::log(std::fabs(bias)));
        }
    }
    const double slope = least_squares_slope(xs, ys);
    res.passed = std::isfinite(slope) && slope >= 1.3 && slope <= 2.7;
    res.detail = detail + "; slope " + format_double(slope);
    return res;
}

// ---------------------------------------------------------------- 7
CriterionResult criterion_variance_scaling() {
    CriterionResult res{7, "b|W'|Var within [0.6,1.6] of the limit constant", false, 0.0, 1800.0, ""};
    const double beta = 0.5;
    const double range = 1.0;
    const double r = 0.6;
    const double bandwidth = 0.1;
    const std::vector<double> sides = {15.0, 20.0, 30.0, 40.0};
    const int reps = 300;

    const double k2 = Kernel(Kernel::Kind::epanechnikov).squared_integral();
    const double constant = poisson_variance_constant(2, beta, range, r, k2);

    EstimatorOptions opts;
    opts.range = range;
    opts.bandwidth = bandwidth;

    std::string detail = "scaled variance / constant:";
    double last_ratio = 0.0;
    for (std::size_t si = 0; si < sides.size(); ++si) {
        const Window w(2, sides[si]);
        std::vector<double> estimates(reps, 0.0);
#pragma omp parallel for schedule(dynamic)
        for (int rep = 0; rep < reps; ++rep) {
            const PointPattern x = sample_poisson(
                w, beta, Rng::mix(737000 + static_cast<std::uint64_t>(si), rep), range);
            estimates[static_cast<std::size_t>(rep)] = estimate_R_hat(x, opts, r);
        }
        const double mean = mean_of(estimates);
        double var = 0.0;
        for (double x : estimates) var += (x - mean) * (x - mean);
        var /= reps;
        const double eroded = w.erode(2.0 * range).volume();
        const double ratio = bandwidth * eroded * var / constant;
        last_ratio = ratio;
        detail += " " + format_double(ratio);
    }
    res.passed = last_ratio >= 0.6 && last_ratio <= 1.6;
    res.detail = detail;
    return res;
}

// ---------------------------------------------------------------- 8
CriterionResult criterion_recovery() {
    CriterionResult res{8, "pair potential recovery (strauss and poisson control)", false, 0.0,
                        1800.0, ""};
    const double beta = 0.5;
    const double range = 1.0;
    const Window w(2, 40.0);
    const int reps = 30;

    EstimatorOptions opts;
    opts.range = range;
    opts.bandwidth = 0.1;
    for (int i = 0; i <= 12; ++i) opts.r_grid.push_back(0.3 + 0.05 * i); // [0.3R, 0.9R]

    const auto pooled_band_median = [&](const Model& model, std::uint64_t seed_base) {
        std::vector<std::vector<double>> per_rep(reps);
#pragma omp parallel for schedule(dynamic)
        for (int rep = 0; rep < reps; ++rep) {
            PointPattern x = [&] {
                if (model.kind() == Model::Kind::poisson) {
                    return sample_poisson(w, beta, Rng::mix(seed_base, rep), range);
                }
                ChainConfig cfg;
                cfg.seed = Rng::mix(seed_base, rep);
                return run_birth_death(model, w, cfg);
            }();
            const EstimateReport report = estimate_phi(x, opts);
            for (double g : report.gamma_hat) {
                if (std::isfinite(g)) per_rep[static_cast<std::size_t>(rep)].push_back(g);
            }
        }
        std::vector<double> pool;
        for (const auto& v : per_rep) pool.insert(pool.end(), v.begin(), v.end());
        return sample_quantile(pool, 0.5);
    };

    const double strauss_median = pooled_band_median(Model::strauss(beta, 0.5, range), 848000);
    const double poisson_median = pooled_band_median(Model::poisson(beta), 949000);

    const double strauss_gap = std::fabs(strauss_median - std::log(2.0));
    const double poisson_gap = std::fabs(poisson_median);
    res.passed = strauss_gap <= 0.2 && poisson_gap <= 0.1;
    res.detail = "strauss median " + format_double(strauss_median) + " (gap " +
                 format_double(strauss_gap) + "), poisson median " + format_double(poisson_median);
    return res;
}

// ---------------------------------------------------------------- 9
CriterionResult criterion_determinism() {
    CriterionResult res{9, "fixed seeds reproduce byte-identical CSVs", false, 0.0, 120.0, ""};
    if (cli_path.empty()) {
        res.detail = "no --cli path given";
        return res;
    }
    const fs::path dir = scratch_dir / "determinism";
    fs::remove_all(dir);
    fs::create_directories(dir);

    const auto sh = [&](const std::string& args) {
        const std::string cmd = cli_path + " " + args + " >" + (dir / "out.txt").string() + " 2>&1";
        return std::system(cmd.c_str()) == 0;
    };
    const auto same_bytes = [](const fs::path& a, const fs::path& b) {
        return read_text_file(a.string()) == read_text_file(b.string());
    };

    std::ofstream(dir / "model.ini") << "[model]\nkind = strauss\nbeta = 0.5\nphi = 0.5\nrange = 1\n";
    std::ofstream(dir / "exp.ini") << "[model]\nkind = poisson\nbeta = 0.5\n[window]\ndim = 2\n"
                                      "sides = 12\n[bandwidth]\nconstant = 0.15\n[experiment]\n"
                                      "kind = consistency\nrange = 1\nreplicates = 30\nseed = 9\n"
                                      "r_probes = 0.6\n";

    bool ok = true;
    const std::string sim = "simulate --model-config " + (dir / "model.ini").string() +
                            " --side 12 --dim 2 --seed 31 --out ";
    ok = ok && sh(sim + (dir / "p1.csv").string());
    ok = ok && sh(sim + (dir / "p2.csv").string());
    ok = ok && same_bytes(dir / "p1.csv", dir / "p2.csv");

    const std::string est = "estimate --pattern " + (dir / "p1.csv").string() +
                            " --range 1 --bandwidth 0.12 --r-grid 0.2:0.9:8 --out ";
    ok = ok && sh(est + (dir / "e1.csv").string());
    ok = ok && sh(est + (dir / "e2.csv").string());
    ok = ok && same_bytes(dir / "e1.csv", dir / "e2.csv");

    const std::string exp = "experiment --config " + (dir / "exp.ini").string() + " --out-dir ";
    ok = ok && sh(exp + (dir / "run1").string());
    ok = ok && sh(exp + (dir / "run2").string());
    ok = ok && same_bytes(dir / "run1" / "consistency_rungs.csv",
                          dir / "run2" / "consistency_rungs.csv");
    ok = ok && same_bytes(dir / "run1" / "consistency_slopes.csv",
                          dir / "run2" / "consistency_slopes.csv");

    res.passed = ok;
    res.detail = ok ? "simulate, estimate and experiment outputs stable" : "byte mismatch";
    return res;
}

} // namespace

int main(int argc, char** argv) {
    for (int i = 1; i + 1 < argc; i += 2) {
        const std::string flag = argv[i];
        if (flag == "--cli") cli_path = argv[i + 1];
        if (flag == "--scratch") scratch_dir = argv[i + 1];
    }
    if (scratch_dir.empty()) scratch_dir = fs::temp_directory_path() / "pairpot_acceptance";
    fs::create_directories(scratch_dir);

    using Runner = CriterionResult (*)();
    const Runner runners[] = {
        criterion_oracle_equivalence, criterion_model_algebra, criterion_gnz,
        criterion_kernels,            criterion_unbiasedness,  criterion_bias_order,
        criterion_variance_scaling,   criterion_recovery,      criterion_determinism,
    };

    int failures = 0;
    for (Runner runner : runners) {
        const auto start = std::chrono::steady_clock::now();
        CriterionResult result = runner();
        result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_budget = result.seconds <= result.budget_seconds;
        const bool passed = result.passed && in_budget;
        if (!passed) ++failures;
        std::cout << (passed ? "[PASS] " : "[FAIL] ") << result.id << " " << result.name << " ("
                  << format_double(result.seconds) << " s";
        if (!in_budget) std::cout << ", over budget " << format_double(result.budget_seconds) << " s";
        std::cout << "): " << result.detail << "\n";
        std::cout.flush();
    }
    std::cout << (failures == 0 ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED") << " ("
              << (9 - failures) << "/9)\n";
    return failures;
}
