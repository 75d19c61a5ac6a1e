#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hillgrow/astro_forcing.hpp"
#include "hillgrow/elliptic.hpp"
#include "hillgrow/hill_cycle.hpp"
#include "hillgrow/random_stream.hpp"
#include "hillgrow/symplectic_core.hpp"

namespace hillgrow {

enum class ExperimentKind { Fig1, Fig2, Fig3, EllipticSweep, HillEndToEnd, Custom };

std::string to_string(ExperimentKind k);
ExperimentKind experiment_from_string(const std::string& name);

// Everything a run needs. Figure experiments pin the forcing rule
// (phi = a*xi or phi = 1 - A*xi with xi uniform on [0,1]) and read the
// amplitude from amplitude_grid; the x ensemble, seeds, and sizes are
// taken from here. Unused fields are ignored by each runner.
struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::Custom;
    std::uint64_t n_cycles = 1000000;
    std::uint64_t seed = 42;
    std::vector<double> amplitude_grid;  // empty means the per-experiment default

    DistributionSpec x_dist = DistributionSpec::loguniform(-2.0, 2.0);
    DistributionSpec phi_dist = DistributionSpec::uniform(0.0, 1.0);  // custom chains

    DistributionSpec theta_dist = DistributionSpec::constant(0.7853981633974483);
    double L0 = 1.0;
    DistributionSpec eta_base = DistributionSpec::uniform(-1.0, 1.0);

    DistributionSpec af_dist = DistributionSpec::constant(0.25);
    DistributionSpec q_dist = DistributionSpec::uniform(1.5, 2.5);
    BarrierShape shape = BarrierShape::delta();

    std::string matrices = "unit";  // direct runner: "unit" or "full"

    std::string trajectory_path;
    double halo_a = 1.0, halo_b = 1.0, halo_c = 1.0, halo_rho0 = 1.0;

    int threads = 1;
    std::string output_path;
};

ExperimentConfig default_config(ExperimentKind kind);

// Flat key=value config text; '#' comments and [section] headers are
// skipped. Unknown keys are rejected.
void apply_config_file(ExperimentConfig& cfg, const std::string& path);
void apply_key_value(ExperimentConfig& cfg, const std::string& key,
                     const std::string& value);

struct Fig1Row {
    double a = 0.0;
    double gamma_direct = 0.0;
    double gamma_weak_phi = 0.0;
    double delta = 0.0;
    double std_error = 0.0;
};
struct Fig1Result {
    std::vector<Fig1Row> rows;
    double slope_gamma = 0.0;
    double slope_delta = 0.0;
};
Fig1Result run_fig1(const ExperimentConfig& cfg);

struct Fig2Row {
    double amplitude = 0.0;
    double delta_true = 0.0;
    double delta_model = 0.0;
    double model_error = 0.0;
    double std_error = 0.0;
};
struct Fig2Result {
    std::vector<Fig2Row> rows;
    double gamma_unit_phi = 0.0;
    double slope_delta = 0.0;
    double slope_error = 0.0;
};
Fig2Result run_fig2(const ExperimentConfig& cfg);

struct Fig3Row {
    double amplitude = 0.0;
    double gamma_unit_phi = 0.0;
    double gamma_direct = 0.0;
    double gamma_truncated = 0.0;
    double gamma_fixed_point = 0.0;
    double gamma_lower_bound = 0.0;
    double std_error = 0.0;
};
struct Fig3Result {
    std::vector<Fig3Row> rows;
};
Fig3Result run_fig3(const ExperimentConfig& cfg);

struct EllipticRow {
    double theta_mean = 0.0;
    double eta_amplitude = 0.0;
    double gamma_direct = 0.0;
    double gamma_chain = 0.0;
    double gamma_small_eta = 0.0;
    double std_error = 0.0;
};
struct EllipticSweepResult {
    std::vector<EllipticRow> rows;
};
EllipticSweepResult run_elliptic_sweep(const ExperimentConfig& cfg);

struct HillEndToEndResult {
    GrowthEstimate direct_full;   // products of the period maps
    GrowthEstimate scalar_part;   // mean log|h|
    GrowthEstimate direct_unit;   // products of the unit-diagonal factors
    GrowthEstimate recursion;     // exact recursion over eligible cycles
    std::uint64_t eligible_cycles = 0;
    std::uint64_t excluded_cycles = 0;
};
HillEndToEndResult run_hill_end_to_end(const ExperimentConfig& cfg);

struct DirectResult {
    GrowthEstimate estimate;
    std::string matrices;
};
DirectResult run_direct(const ExperimentConfig& cfg);

// Dispatch on cfg.experiment, write the CSV for cfg.output_path ("-" or
// empty writes to stdout), and return the number of data rows. shapes_path
// only applies to forcing extraction.
int run_and_write(const ExperimentConfig& cfg);
int run_extract_forcing(const ExperimentConfig& cfg, const std::string& shapes_path);

// Least-squares slope of log y against log x over points with positive,
// finite coordinates. NaN when fewer than two usable points remain.
double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys);

// Scale a symmetric base ensemble by an amplitude (uniform, affine, const).
DistributionSpec scale_spec(const DistributionSpec& base, double amplitude);

}  // namespace hillgrow
