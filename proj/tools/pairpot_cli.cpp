// Command line front end: simulate / estimate / validate / experiment.
// Exit codes: 0 success, 2 configuration error, 3 degenerate estimate,
// 1 anything else.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pairpot/config.hpp"
#include "pairpot/csv.hpp"
#include "pairpot/errors.hpp"
#include "pairpot/estimator.hpp"
#include "pairpot/experiment.hpp"
#include "pairpot/pattern_io.hpp"
#include "pairpot/sampler.hpp"

namespace {

using namespace pairpot;

struct SimulateArgs {
    std::string model_config;
    double side = 10.0;
    int dim = 2;
    std::uint64_t steps = 0;
    std::uint64_t burn_in = 0;
    std::uint64_t seed = 1;
    std::string boundary = "free";
    std::string initial = "poisson";
    std::string out;
};

int run_simulate(const SimulateArgs& args) {
    ConfigFile file = ConfigFile::load(args.model_config);
    const Model model = load_model(file);
    file.ensure_all_consumed();

    const Window window(args.dim, args.side);
    ChainConfig chain;
    chain.steps = args.steps;
    chain.burn_in = args.burn_in;
    chain.seed = args.seed;
    if (args.boundary == "free") chain.boundary = ChainConfig::Boundary::free;
    else if (args.boundary == "torus") chain.boundary = ChainConfig::Boundary::torus;
    else throw ConfigError("--boundary: expected free or torus");
    if (args.initial == "empty") chain.initial = ChainConfig::Initial::empty;
    else if (args.initial == "poisson") chain.initial = ChainConfig::Initial::poisson;
    else throw ConfigError("--initial: expected empty or poisson");

    const PointPattern pattern = run_birth_death(model, window, chain);
    write_pattern(args.out, pattern);
    std::cout << "wrote " << args.out << " (" << pattern.size() << " points)\n";
    return 0;
}

struct EstimateArgs {
    std::string pattern;
    double range = 1.0;
    std::string kernel = "epanechnikov";
    double bandwidth = 0.1;
    std::string r_grid;
    int sphere_nodes = 64;
    int region_grid_res = 128;
    std::string out;
};

int run_estimate(const EstimateArgs& args) {
    const auto kind = Kernel::parse(args.kernel);
    if (!kind) throw ConfigError("--kernel: unknown kernel '" + args.kernel + "'");

    EstimatorOptions opts;
    opts.range = args.range;
    opts.kernel = Kernel(*kind);
    opts.bandwidth = args.bandwidth;
    opts.r_grid = parse_grid_spec(args.r_grid);
    opts.sphere_nodes = args.sphere_nodes;
    opts.region_grid_res = args.region_grid_res;
    try {
        opts.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }

    const PointPattern pattern = read_pattern(args.pattern, args.range);
    const EstimateReport report = estimate_phi(pattern, opts);
    write_text_file(args.out, estimate_report_to_csv(report));
    std::cout << "wrote " << args.out << " (beta_hat=" << format_double(report.beta_hat) << ")\n";
    return 0;
}

void ensure_out_dir(const std::string& dir) {
    if (!dir.empty() && dir != ".") std::filesystem::create_directories(dir);
}

int run_validate(const std::string& config_path, std::string out_dir) {
    ConfigFile file = ConfigFile::load(config_path);
    ExperimentConfig cfg = ExperimentConfig::from_config(file);
    if (cfg.kind != ExperimentKind::gnz) {
        throw ConfigError("validate: config must set experiment.kind = gnz");
    }
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    ensure_out_dir(cfg.out_dir);

    const std::vector<GnzCase> cases = validate_sampler(cfg);
    const std::string path = cfg.out_dir + "/gnz_residuals.csv";
    write_text_file(path, gnz_cases_to_csv(cases, cfg));
    for (const GnzCase& c : cases) {
        std::cout << c.label << " (s=" << c.s << "): z=" << format_double(c.report.z_score) << "\n";
    }
    std::cout << "wrote " << path << "\n";
    return 0;
}

int run_experiment(const std::string& config_path, std::string out_dir) {
    ConfigFile file = ConfigFile::load(config_path);
    ExperimentConfig cfg = ExperimentConfig::from_config(file);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    ensure_out_dir(cfg.out_dir);

    switch (cfg.kind) {
        case ExperimentKind::consistency: {
            const ConvergenceReport report = run_consistency_experiment(cfg);
            const std::string rungs_path = cfg.out_dir + "/consistency_rungs.csv";
            const std::string slopes_path = cfg.out_dir + "/consistency_slopes.csv";
            write_text_file(rungs_path, report.rungs_csv());
            write_text_file(slopes_path, report.slopes_csv());
            std::cout << "slope log|bias| ~ log b: " << format_double(report.slope_log_bias_vs_log_b)
                      << "\n";
            std::cout << "wrote " << rungs_path << " and " << slopes_path << "\n";
            return 0;
        }
        case ExperimentKind::recovery: {
            const RecoveryReport report = run_recovery_demo(cfg);
            const std::string path = cfg.out_dir + "/recovery_curve.csv";
            write_text_file(path, report.to_csv());
            std::cout << "band median gamma_hat: " << format_double(report.band_median_gamma)
                      << ", sup discrepancy: " << format_double(report.sup_discrepancy) << "\n";
            std::cout << "wrote " << path << "\n";
            return 0;
        }
        case ExperimentKind::gnz: {
            return run_validate(config_path, cfg.out_dir);
        }
    }
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gibbs point process simulation and pair potential estimation"};
    app.require_subcommand(1);

    SimulateArgs sim;
    CLI::App* simulate = app.add_subcommand("simulate", "Sample a model with a birth-death chain");
    simulate->add_option("--model-config", sim.model_config, "Config file with a [model] section")
        ->required();
    simulate->add_option("--side", sim.side, "Window side length")->required();
    simulate->add_option("--dim", sim.dim, "Dimension (1, 2 or 3)")->required();
    simulate->add_option("--steps", sim.steps, "Chain proposals (0 = auto)");
    simulate->add_option("--burn-in", sim.burn_in, "Burn-in proposals (0 = auto)");
    simulate->add_option("--seed", sim.seed, "RNG seed");
    simulate->add_option("--boundary", sim.boundary, "free | torus");
    simulate->add_option("--initial", sim.initial, "empty | poisson");
    simulate->add_option("--out", sim.out, "Output pattern CSV")->required();

    EstimateArgs est;
    CLI::App* estimate = app.add_subcommand("estimate", "Recover the pair potential from a pattern");
    estimate->add_option("--pattern", est.pattern, "Input pattern CSV")->required();
    estimate->add_option("--range", est.range, "Interaction range R")->required();
    estimate->add_option("--kernel", est.kernel, "box | epanechnikov | quartic | higher_order_4");
    estimate->add_option("--bandwidth", est.bandwidth, "Kernel bandwidth b")->required();
    estimate->add_option("--r-grid", est.r_grid, "Probe grid lo:hi:n")->required();
    estimate->add_option("--sphere-nodes", est.sphere_nodes, "Sphere quadrature nodes M");
    estimate->add_option("--region-grid-res", est.region_grid_res, "Region quadrature nodes per axis");
    estimate->add_option("--out", est.out, "Output report CSV")->required();

    std::string validate_config;
    std::string validate_out;
    CLI::App* validate = app.add_subcommand("validate", "GNZ residual diagnostics for the sampler");
    validate->add_option("--config", validate_config, "Experiment config file")->required();
    validate->add_option("--out-dir", validate_out, "Output directory (overrides config)");

    std::string experiment_config;
    std::string experiment_out;
    CLI::App* experiment = app.add_subcommand("experiment", "Consistency / recovery experiment runs");
    experiment->add_option("--config", experiment_config, "Experiment config file")->required();
    experiment->add_option("--out-dir", experiment_out, "Output directory (overrides config)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (simulate->parsed()) return run_simulate(sim);
        if (estimate->parsed()) return run_estimate(est);
        if (validate->parsed()) return run_validate(validate_config, validate_out);
        if (experiment->parsed()) return run_experiment(experiment_config, experiment_out);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const DegenerateEstimateError& e) {
        std::cerr << "degenerate estimate: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
