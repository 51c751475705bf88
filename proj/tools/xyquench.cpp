// Command-line driver: equilibrium sweeps, post-quench long-time averages,
// and ergodicity classification for the transverse anisotropic XY model.

#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "xyq/experiment.hpp"

namespace {

struct CommonOptions {
    std::optional<std::string> config_file;
    std::optional<std::string> geometry;
    std::optional<double> gamma, coupling_J, beta_init, band_factor, match_tol;
    std::optional<double> t_max, beta_lo, beta_hi;
    std::optional<int> n_samples, beta_count;
    std::optional<std::uint64_t> seed;
    std::optional<std::vector<double>> fields;
    std::optional<std::string> output_dir;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("-c,--config", o.config_file, "key = value configuration file");
    cmd->add_option("--gamma", o.gamma, "anisotropy");
    cmd->add_option("--coupling", o.coupling_J, "exchange coupling J");
    cmd->add_option("--fields", o.fields, "initial fields a/J (comma separated)")
        ->delimiter(',');
    cmd->add_option("--beta-init", o.beta_init, "initial inverse temperature (beta*J)");
    cmd->add_option("--beta-lo", o.beta_lo, "equilibrium grid lower edge");
    cmd->add_option("--beta-hi", o.beta_hi, "equilibrium grid upper edge");
    cmd->add_option("--beta-count", o.beta_count, "equilibrium grid size");
    cmd->add_option("--t-max", o.t_max, "sampling window (units of 1/J)");
    cmd->add_option("--n-samples", o.n_samples, "number of time samples");
    cmd->add_option("--seed", o.seed, "sampling seed");
    cmd->add_option("--band-factor", o.band_factor,
                    "half-width of the temperature band, as a factor on beta_init");
    cmd->add_option("--match-tol", o.match_tol, "touching-crossing tolerance");
    cmd->add_option("-o,--output-dir", o.output_dir,
                    "output directory (XYQ_OUTPUT_DIR overrides)");
}

xyq::ExperimentConfig resolve(const CommonOptions& o) {
    xyq::ExperimentConfig cfg;
    if (o.config_file) cfg = xyq::ExperimentConfig::from_file(*o.config_file);
    if (o.geometry) cfg.geometry = xyq::GeometrySpec::parse(*o.geometry);
    if (o.gamma) cfg.gamma = *o.gamma;
    if (o.coupling_J) cfg.coupling_J = *o.coupling_J;
    if (o.fields) cfg.fields = *o.fields;
    if (o.beta_init) cfg.beta_tilde_init = *o.beta_init;
    if (o.beta_lo) cfg.beta_grid.lo = *o.beta_lo;
    if (o.beta_hi) cfg.beta_grid.hi = *o.beta_hi;
    if (o.beta_count) cfg.beta_grid.count = *o.beta_count;
    if (o.t_max) cfg.sampling.t_max = *o.t_max;
    if (o.n_samples) cfg.sampling.n_samples = *o.n_samples;
    if (o.seed) cfg.sampling.seed = *o.seed;
    if (o.band_factor) cfg.band_factor = *o.band_factor;
    if (o.match_tol) cfg.match_tol = *o.match_tol;
    if (o.output_dir) cfg.output_dir = *o.output_dir;
    if (const char* env = std::getenv("XYQ_OUTPUT_DIR")) cfg.output_dir = env;
    cfg.validate();
    return cfg;
}

int run_full(const xyq::ExperimentConfig& cfg, bool print_verdicts) {
    xyq::ExperimentRunner runner(cfg);
    const xyq::RunResults results = runner.run();
    const nlohmann::json verdicts = runner.verdict_table(results);
    runner.emit(results, verdicts);
    if (print_verdicts)
        std::cout << verdicts.dump(2) << "\n";
    else
        std::cout << "wrote " << cfg.output_dir << " (" << results.curves.size()
                  << " curves, " << results.long_time.size() << " long-time values, "
                  << verdicts.size() << " verdicts)\n";
    return 0;
}

int run_sweep(const xyq::ExperimentConfig& cfg) {
    xyq::ExperimentRunner runner(cfg);
    const xyq::RunResults results = runner.sweep();
    runner.emit(results, nlohmann::json::array());
    std::cout << "wrote " << cfg.output_dir << " (" << results.curves.size()
              << " equilibrium curves)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ergodicity of the quenched transverse anisotropic XY model"};
    app.require_subcommand(1);

    CommonOptions opts;

    auto* fig = app.add_subcommand(
        "reproduce-figure", "reproduce one published figure with pinned defaults");
    int figure = 0;
    fig->add_option("figure", figure, "figure number: 1, 2, 4 or 6")
        ->required()
        ->check(CLI::IsMember({1, 2, 4, 6}));
    add_common(fig, opts);

    auto* inf = app.add_subcommand("infinite-chain",
                                   "closed-form infinite chain: curves, long-time "
                                   "averages, verdicts");
    add_common(inf, opts);

    auto* fin = app.add_subcommand(
        "finite", "exact-diagonalized finite lattice: curves, long-time averages, verdicts");
    fin->add_option("-g,--geometry", opts.geometry,
                    "chain:N, ladder:2xL, or torus:RxC")
        ->required();
    add_common(fin, opts);

    auto* cls = app.add_subcommand("classify",
                                   "run and print the ergodicity verdict table");
    cls->add_option("-g,--geometry", opts.geometry,
                    "infinite, chain:N, ladder:2xL, or torus:RxC");
    add_common(cls, opts);

    auto* swp = app.add_subcommand("sweep", "equilibrium curves only");
    swp->add_option("-g,--geometry", opts.geometry,
                    "infinite, chain:N, ladder:2xL, or torus:RxC");
    add_common(swp, opts);

    CLI11_PARSE(app, argc, argv);

    try {
        xyq::ExperimentConfig cfg = resolve(opts);
        if (fig->parsed()) {
            switch (figure) {
            case 1: cfg.geometry = xyq::GeometrySpec::parse("infinite"); break;
            case 2: cfg.geometry = xyq::GeometrySpec::parse("chain:12"); break;
            case 4: cfg.geometry = xyq::GeometrySpec::parse("ladder:2x4"); break;
            case 6: cfg.geometry = xyq::GeometrySpec::parse("torus:3x4"); break;
            }
            if (!opts.output_dir && !std::getenv("XYQ_OUTPUT_DIR"))
                cfg.output_dir = "out/figure" + std::to_string(figure);
            return run_full(cfg, false);
        }
        if (inf->parsed()) {
            cfg.geometry = xyq::GeometrySpec::parse("infinite");
            return run_full(cfg, false);
        }
        if (fin->parsed()) {
            if (cfg.geometry.infinite)
                throw std::invalid_argument("'finite' needs a finite geometry");
            return run_full(cfg, false);
        }
        if (cls->parsed()) return run_full(cfg, true);
        if (swp->parsed()) return run_sweep(cfg);
    } catch (const xyq::QuadratureError& e) {
        std::cerr << "error: quadrature failed to converge: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
