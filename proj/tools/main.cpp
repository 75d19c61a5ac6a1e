#include <deque>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hillgrow/experiment.hpp"

namespace {

using hillgrow::ExperimentConfig;

// CLI options land here as raw strings; anything the user actually passed
// is replayed through the same key=value path the config file uses, so
// precedence is simply defaults < config file < command line.
struct PendingOption {
    CLI::Option* opt = nullptr;
    std::string key;
    const std::string* value = nullptr;
};

struct OptionBag {
    std::vector<PendingOption> pending;
    std::deque<std::string> storage;  // stable addresses under growth

    void add(CLI::App* cmd, const std::string& flag, const std::string& key,
             const std::string& help) {
        storage.emplace_back();
        std::string* slot = &storage.back();
        CLI::Option* opt = cmd->add_option(flag, *slot, help);
        pending.push_back({opt, key, slot});
    }

    void apply(ExperimentConfig& cfg) const {
        for (const auto& p : pending) {
            if (p.opt->count() > 0) hillgrow::apply_key_value(cfg, p.key, *p.value);
        }
    }
};

void add_run_options(CLI::App* cmd, OptionBag& bag) {
    bag.add(cmd, "--n-cycles", "n_cycles", "Cycles per estimate");
    bag.add(cmd, "--seed", "seed", "Base seed for all substreams");
    bag.add(cmd, "--threads", "threads", "Worker threads for grid points");
    bag.add(cmd, "--out", "out", "Output CSV path ('-' for stdout)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Growth rates of long products of random area-preserving 2x2 matrices"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    app.add_option("--config", config_path,
                   "key=value config file applied before command-line flags");

    OptionBag bag;

    CLI::App* fig1 = app.add_subcommand(
        "fig1", "Weak-forcing sweep: direct growth vs the small-phi law");
    add_run_options(fig1, bag);
    bag.add(fig1, "--amplitudes", "amplitudes", "Comma-separated forcing amplitudes");
    bag.add(fig1, "--x-dist", "x_dist", "Ensemble of the ratio x, e.g. loguniform(-2,2)");

    CLI::App* fig2 = app.add_subcommand(
        "fig2", "Growth deficit near phi = 1 vs the interior-term model");
    add_run_options(fig2, bag);
    bag.add(fig2, "--amplitudes", "amplitudes", "Comma-separated damping amplitudes");
    bag.add(fig2, "--x-dist", "x_dist", "Ensemble of the ratio x");

    CLI::App* fig3 = app.add_subcommand(
        "fig3", "Estimator comparison across damping amplitudes");
    add_run_options(fig3, bag);
    bag.add(fig3, "--amplitudes", "amplitudes", "Comma-separated damping amplitudes");
    bag.add(fig3, "--x-dist", "x_dist", "Ensemble of the ratio x");

    CLI::App* elliptic = app.add_subcommand(
        "elliptic", "Stable-regime chains with fluctuating scale parameter");
    add_run_options(elliptic, bag);
    bag.add(elliptic, "--amplitudes", "amplitudes",
            "Comma-separated fluctuation amplitudes");
    bag.add(elliptic, "--theta-dist", "theta_dist", "Rotation-angle ensemble");
    bag.add(elliptic, "--eta-base", "eta_base",
            "Base fluctuation ensemble, scaled by each amplitude");
    bag.add(elliptic, "--l0", "l0", "Reference scale parameter");

    CLI::App* hill = app.add_subcommand(
        "hill", "End-to-end run from oscillator cycles to growth estimates");
    add_run_options(hill, bag);
    bag.add(hill, "--af-dist", "af_dist", "Floor-value ensemble");
    bag.add(hill, "--q-dist", "q_dist", "Barrier-strength ensemble (nonnegative)");
    bag.add(hill, "--shape", "shape", "Barrier profile: delta, square(w=...), cosine");

    CLI::App* direct = app.add_subcommand(
        "direct", "Single direct growth estimate for a configured chain");
    add_run_options(direct, bag);
    bag.add(direct, "--matrices", "matrices", "'unit' factors or 'full' period maps");
    bag.add(direct, "--x-dist", "x_dist", "Ratio ensemble (unit matrices)");
    bag.add(direct, "--phi-dist", "phi_dist", "Forcing ensemble (unit matrices)");
    bag.add(direct, "--af-dist", "af_dist", "Floor-value ensemble (full maps)");
    bag.add(direct, "--q-dist", "q_dist", "Barrier-strength ensemble (full maps)");
    bag.add(direct, "--shape", "shape", "Barrier profile (full maps)");

    CLI::App* extract = app.add_subcommand(
        "extract-forcing", "Extract per-cycle forcing parameters from a trajectory");
    std::string shapes_out;
    bag.add(extract, "--trajectory", "trajectory", "CSV with header t,x,z");
    bag.add(extract, "--halo-a", "halo_a", "Long axis scale");
    bag.add(extract, "--halo-b", "halo_b", "Middle axis scale");
    bag.add(extract, "--halo-c", "halo_c", "Short axis scale");
    bag.add(extract, "--rho0", "rho0", "Central density");
    bag.add(extract, "--out", "out", "Output CSV path for per-cycle parameters");
    extract->add_option("--shapes-out", shapes_out,
                        "Optional CSV path for normalized cycle profiles");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
        app.exit(e);
        return 2;
    }

    try {
        hillgrow::ExperimentKind kind = hillgrow::ExperimentKind::Custom;
        if (fig1->parsed()) kind = hillgrow::ExperimentKind::Fig1;
        else if (fig2->parsed()) kind = hillgrow::ExperimentKind::Fig2;
        else if (fig3->parsed()) kind = hillgrow::ExperimentKind::Fig3;
        else if (elliptic->parsed()) kind = hillgrow::ExperimentKind::EllipticSweep;
        else if (hill->parsed()) kind = hillgrow::ExperimentKind::HillEndToEnd;

        ExperimentConfig cfg = hillgrow::default_config(kind);
        if (!config_path.empty()) hillgrow::apply_config_file(cfg, config_path);
        cfg.experiment = kind;  // the subcommand, not the config file, picks the run
        bag.apply(cfg);

        const int rows = extract->parsed()
                             ? hillgrow::run_extract_forcing(cfg, shapes_out)
                             : hillgrow::run_and_write(cfg);
        std::cerr << "wrote " << rows << " row(s) to "
                  << (cfg.output_path.empty() || cfg.output_path == "-"
                          ? "stdout"
                          : cfg.output_path)
                  << "\n";
        return 0;
    } catch (const hillgrow::config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
