#include "hillgrow/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "hillgrow/approx_growth.hpp"
#include "hillgrow/exact_growth.hpp"

namespace hillgrow {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Substream salts; every consumer of randomness gets its own lane so grid
// points can share draws (common random numbers) without interference.
constexpr std::uint64_t kSaltX = 1;
constexpr std::uint64_t kSaltXi = 2;
constexpr std::uint64_t kSaltTheta = 3;
constexpr std::uint64_t kSaltEta = 4;
constexpr std::uint64_t kSaltX1 = 11;
constexpr std::uint64_t kSaltX2 = 12;
constexpr std::uint64_t kSaltX3 = 13;
constexpr std::uint64_t kSaltXi1 = 14;
constexpr std::uint64_t kSaltXi2 = 15;

std::string fmt17(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

CycleMatrix unit_factor(double x, double phi) {
    return {1.0, x * phi, 1.0 / x, 1.0};
}

// Run fn(0..n-1) on up to `threads` workers. Tasks must be independent;
// the first exception wins and is rethrown after the join.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& fn) {
    const std::size_t workers =
        std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, threads)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < n;) {
                if (failed.load()) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!failed.exchange(true)) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return s.substr(b, e - b);
}

std::uint64_t parse_u64(const std::string& s, const std::string& key) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw config_error("key '" + key + "' needs an unsigned integer, got '" + s + "'");
    }
    return v;
}

double parse_double(const std::string& s, const std::string& key) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
        throw config_error("key '" + key + "' needs a finite number, got '" + s + "'");
    }
    return v;
}

std::vector<double> parse_grid(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        const double v = parse_double(trim(tok), "amplitudes");
        if (v < 0.0) throw config_error("amplitudes must be nonnegative");
        out.push_back(v);
    }
    if (out.empty()) throw config_error("amplitudes list is empty");
    return out;
}

struct Csv {
    std::vector<std::pair<std::string, std::string>> meta;
    std::string columns;
    std::vector<std::string> rows;
    std::vector<std::pair<std::string, std::string>> footer;
};

void write_csv_stream(std::ostream& out, const Csv& c) {
    for (const auto& [k, v] : c.meta) out << "# " << k << " = " << v << "\n";
    out << c.columns << "\n";
    for (const auto& r : c.rows) out << r << "\n";
    for (const auto& [k, v] : c.footer) out << "# " << k << " = " << v << "\n";
}

int write_csv(const std::string& path, const Csv& c) {
    if (path.empty() || path == "-") {
        write_csv_stream(std::cout, c);
    } else {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw config_error("cannot open output file '" + path + "'");
        write_csv_stream(out, c);
    }
    return static_cast<int>(c.rows.size());
}

std::vector<double> default_grid(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::Fig1: {
            std::vector<double> g;
            for (int j = 0; j <= 8; ++j) g.push_back(std::pow(10.0, -4.0 + 0.25 * j));
            return g;
        }
        case ExperimentKind::Fig2: {
            // Zero (exact reference) plus a quarter-decade ladder topped at 0.3.
            std::vector<double> g{0.0};
            for (int j = 0; j <= 5; ++j) g.push_back(std::pow(10.0, -2.0 + 0.25 * j));
            g.push_back(0.3);
            return g;
        }
        case ExperimentKind::Fig3: {
            std::vector<double> g;
            for (int j = 0; j <= 10; ++j) g.push_back(0.1 * j);
            return g;
        }
        case ExperimentKind::EllipticSweep: {
            std::vector<double> g;
            for (int j = 0; j <= 6; ++j) g.push_back(0.05 * j);
            return g;
        }
        default:
            return {};
    }
}

}  // namespace

std::string to_string(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::Fig1: return "fig1";
        case ExperimentKind::Fig2: return "fig2";
        case ExperimentKind::Fig3: return "fig3";
        case ExperimentKind::EllipticSweep: return "elliptic";
        case ExperimentKind::HillEndToEnd: return "hill";
        case ExperimentKind::Custom: return "custom";
    }
    throw not_implemented_error("unhandled experiment kind");
}

ExperimentKind experiment_from_string(const std::string& name) {
    if (name == "fig1") return ExperimentKind::Fig1;
    if (name == "fig2") return ExperimentKind::Fig2;
    if (name == "fig3") return ExperimentKind::Fig3;
    if (name == "elliptic") return ExperimentKind::EllipticSweep;
    if (name == "hill") return ExperimentKind::HillEndToEnd;
    if (name == "custom") return ExperimentKind::Custom;
    throw config_error("unknown experiment '" + name + "'");
}

ExperimentConfig default_config(ExperimentKind kind) {
    ExperimentConfig cfg;
    cfg.experiment = kind;
    cfg.amplitude_grid = default_grid(kind);
    return cfg;
}

void apply_key_value(ExperimentConfig& cfg, const std::string& key,
                     const std::string& value) {
    if (key == "experiment") {
        cfg.experiment = experiment_from_string(value);
        if (cfg.amplitude_grid.empty()) cfg.amplitude_grid = default_grid(cfg.experiment);
        return;
    }
    if (key == "n_cycles") {
        cfg.n_cycles = parse_u64(value, key);
        if (cfg.n_cycles == 0) throw config_error("n_cycles must be positive");
        return;
    }
    if (key == "seed") { cfg.seed = parse_u64(value, key); return; }
    if (key == "amplitudes") { cfg.amplitude_grid = parse_grid(value); return; }
    if (key == "x_dist") { cfg.x_dist = DistributionSpec::parse(value); return; }
    if (key == "phi_dist") { cfg.phi_dist = DistributionSpec::parse(value); return; }
    if (key == "theta_dist") { cfg.theta_dist = DistributionSpec::parse(value); return; }
    if (key == "eta_base") { cfg.eta_base = DistributionSpec::parse(value); return; }
    if (key == "l0") {
        cfg.L0 = parse_double(value, key);
        if (!(cfg.L0 > 0.0)) throw config_error("l0 must be positive");
        return;
    }
    if (key == "af_dist") { cfg.af_dist = DistributionSpec::parse(value); return; }
    if (key == "q_dist") { cfg.q_dist = DistributionSpec::parse(value); return; }
    if (key == "shape") { cfg.shape = BarrierShape::parse(value); return; }
    if (key == "matrices") {
        if (value != "unit" && value != "full") {
            throw config_error("matrices must be 'unit' or 'full'");
        }
        cfg.matrices = value;
        return;
    }
    if (key == "trajectory") { cfg.trajectory_path = value; return; }
    if (key == "halo_a") { cfg.halo_a = parse_double(value, key); return; }
    if (key == "halo_b") { cfg.halo_b = parse_double(value, key); return; }
    if (key == "halo_c") { cfg.halo_c = parse_double(value, key); return; }
    if (key == "rho0") { cfg.halo_rho0 = parse_double(value, key); return; }
    if (key == "threads") {
        const auto t = parse_u64(value, key);
        if (t == 0 || t > 4096) throw config_error("threads must be in [1, 4096]");
        cfg.threads = static_cast<int>(t);
        return;
    }
    if (key == "out") { cfg.output_path = value; return; }
    throw config_error("unknown config key '" + key + "'");
}

void apply_config_file(ExperimentConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file '" + path + "'");
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw config_error("config line is not key=value: '" + line + "'");
        }
        apply_key_value(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
}

DistributionSpec scale_spec(const DistributionSpec& base, double amplitude) {
    if (amplitude < 0.0) throw config_error("amplitude must be nonnegative");
    if (amplitude == 0.0) return DistributionSpec::constant(0.0);
    switch (base.kind) {
        case DistKind::Constant:
            return DistributionSpec::constant(amplitude * base.p0);
        case DistKind::Uniform:
            return DistributionSpec::uniform(amplitude * base.p0, amplitude * base.p1);
        case DistKind::AffineOfUniform:
            return DistributionSpec::affine(amplitude * base.p0, amplitude * base.p1);
        case DistKind::LogUniform:
            throw config_error("a log-uniform ensemble cannot be amplitude-scaled");
    }
    throw not_implemented_error("unhandled distribution kind");
}

double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < xs.size() && i < ys.size(); ++i) {
        if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) continue;
        const double lx = std::log(xs[i]);
        const double ly = std::log(ys[i]);
        if (!std::isfinite(lx) || !std::isfinite(ly)) continue;
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 2) return std::nan("");
    const double nd = static_cast<double>(n);
    const double denom = nd * sxx - sx * sx;
    if (denom == 0.0) return std::nan("");
    return (nd * sxy - sx * sy) / denom;
}

Fig1Result run_fig1(const ExperimentConfig& cfg) {
    const std::uint64_t sx = derive_seed(cfg.seed, kSaltX);
    const std::uint64_t su = derive_seed(cfg.seed, kSaltXi);
    const StreamHandle xs{cfg.x_dist, sx, 0};
    const double mean_x = cfg.x_dist.moment(1);
    const double mean_inv_x = cfg.x_dist.moment(-1);
    Fig1Result res;
    res.rows.resize(cfg.amplitude_grid.size());
    parallel_for(cfg.amplitude_grid.size(), cfg.threads, [&](std::size_t j) {
        const double a = cfg.amplitude_grid[j];
        const auto est = lyapunov_direct(
            [&, a](std::uint64_t i) {
                const double phi = a * uniform01_at(su, i);
                return unit_factor(xs.sample(i), phi);
            },
            cfg.n_cycles, cfg.seed);
        Fig1Row row;
        row.a = a;
        row.gamma_direct = est.gamma;
        // <x phi> = a <x> <xi> with xi uniform on [0,1).
        row.gamma_weak_phi = gamma_small_phi({mean_inv_x, 0.5 * a * mean_x, cfg.n_cycles});
        row.delta = row.gamma_weak_phi - est.gamma;
        row.std_error = est.std_error;
        res.rows[j] = row;
    });
    std::vector<double> as, gs, ds;
    for (const auto& r : res.rows) {
        as.push_back(r.a);
        gs.push_back(r.gamma_direct);
        ds.push_back(r.delta);
    }
    res.slope_gamma = loglog_slope(as, gs);
    res.slope_delta = loglog_slope(as, ds);
    return res;
}

namespace {

// Shared machinery for the damped-forcing experiments: phi = 1 - A xi.
struct DampedChain {
    StreamHandle xs;
    std::uint64_t xi_seed;
    double amplitude;

    CycleMatrix operator()(std::uint64_t i) const {
        const double phi = 1.0 - amplitude * uniform01_at(xi_seed, i);
        return unit_factor(xs.sample(i), phi);
    }
};

}  // namespace

Fig2Result run_fig2(const ExperimentConfig& cfg) {
    const std::uint64_t sx = derive_seed(cfg.seed, kSaltX);
    const std::uint64_t su = derive_seed(cfg.seed, kSaltXi);
    const StreamHandle xs{cfg.x_dist, sx, 0};
    Fig2Result res;
    const auto base = lyapunov_direct(DampedChain{xs, su, 0.0}, cfg.n_cycles, cfg.seed);
    res.gamma_unit_phi = base.gamma;
    res.rows.resize(cfg.amplitude_grid.size());
    parallel_for(cfg.amplitude_grid.size(), cfg.threads, [&](std::size_t j) {
        const double amp = cfg.amplitude_grid[j];
        const DampedChain chain{xs, su, amp};
        const auto est = lyapunov_direct(chain, cfg.n_cycles, cfg.seed);
        Fig2Row row;
        row.amplitude = amp;
        row.delta_true = base.gamma - est.gamma;
        row.delta_model = delta_gamma_near_unity(
            [&](std::uint64_t i) {
                return std::pair{xs.sample(i), 1.0 - amp * uniform01_at(su, i)};
            },
            cfg.n_cycles);
        row.model_error = row.delta_model - row.delta_true;
        row.std_error = est.std_error;
        res.rows[j] = row;
    });
    std::vector<double> amps, deltas, errors;
    for (const auto& r : res.rows) {
        amps.push_back(r.amplitude);
        deltas.push_back(r.delta_true);
        errors.push_back(std::fabs(r.model_error));
    }
    res.slope_delta = loglog_slope(amps, deltas);
    res.slope_error = loglog_slope(amps, errors);
    return res;
}

Fig3Result run_fig3(const ExperimentConfig& cfg) {
    const std::uint64_t sx = derive_seed(cfg.seed, kSaltX);
    const std::uint64_t su = derive_seed(cfg.seed, kSaltXi);
    const std::uint64_t sx1 = derive_seed(cfg.seed, kSaltX1);
    const std::uint64_t sx2 = derive_seed(cfg.seed, kSaltX2);
    const std::uint64_t sx3 = derive_seed(cfg.seed, kSaltX3);
    const std::uint64_t su1 = derive_seed(cfg.seed, kSaltXi1);
    const std::uint64_t su2 = derive_seed(cfg.seed, kSaltXi2);
    const StreamHandle xs{cfg.x_dist, sx, 0};
    Fig3Result res;
    const auto base = lyapunov_direct(DampedChain{xs, su, 0.0}, cfg.n_cycles, cfg.seed);
    res.rows.resize(cfg.amplitude_grid.size());
    parallel_for(cfg.amplitude_grid.size(), cfg.threads, [&](std::size_t j) {
        const double amp = cfg.amplitude_grid[j];
        const auto est = lyapunov_direct(DampedChain{xs, su, amp}, cfg.n_cycles, cfg.seed);
        const auto draws = [&](std::uint64_t i) {
            ApproxDraw d;
            d.x1 = cfg.x_dist.sample_from(uniform01_at(sx1, i));
            d.x2 = cfg.x_dist.sample_from(uniform01_at(sx2, i));
            d.x3 = cfg.x_dist.sample_from(uniform01_at(sx3, i));
            d.phi1 = 1.0 - amp * uniform01_at(su1, i);
            d.phi2 = 1.0 - amp * uniform01_at(su2, i);
            return d;
        };
        Fig3Row row;
        row.amplitude = amp;
        row.gamma_unit_phi = base.gamma;
        row.gamma_direct = est.gamma;
        row.gamma_truncated = gamma_truncated_tail(draws, cfg.n_cycles);
        row.gamma_fixed_point = gamma_fixed_point_tail(draws, cfg.n_cycles);
        row.gamma_lower_bound = gamma_lower_bound(
            base.gamma,
            [&](std::uint64_t i) { return 1.0 - amp * uniform01_at(su, i); },
            cfg.n_cycles);
        row.std_error = est.std_error;
        res.rows[j] = row;
    });
    return res;
}

EllipticSweepResult run_elliptic_sweep(const ExperimentConfig& cfg) {
    const std::uint64_t st = derive_seed(cfg.seed, kSaltTheta);
    const std::uint64_t se = derive_seed(cfg.seed, kSaltEta);
    EllipticSweepResult res;
    const std::size_t n_grid = cfg.amplitude_grid.size();
    double max_amp = 0.0;
    for (double a : cfg.amplitude_grid) max_amp = std::max(max_amp, a);
    res.rows.resize(n_grid + 1);
    // One extra row at theta = pi/2 and the largest amplitude: the phase
    // never leaves the off-diagonal there, consecutive ratios cancel, and
    // the direct estimate collapses to zero while the averaged formula
    // does not. It documents where the formula's assumptions end.
    parallel_for(n_grid + 1, cfg.threads, [&](std::size_t j) {
        const bool null_row = j == n_grid;
        const double amp = null_row ? max_amp : cfg.amplitude_grid[j];
        const DistributionSpec theta_dist =
            null_row ? DistributionSpec::constant(kPi / 2.0) : cfg.theta_dist;
        const DistributionSpec eta_dist = scale_spec(cfg.eta_base, amp);
        const StreamHandle thetas{theta_dist, st, 0};
        const StreamHandle etas{eta_dist, se, 0};
        const auto est = lyapunov_direct(
            [&](std::uint64_t i) {
                return elliptic_matrix(
                    {thetas.sample(i), cfg.L0 * (1.0 + etas.sample(i))});
            },
            cfg.n_cycles, cfg.seed);
        const auto chain = gamma_elliptic_chain(
            [&](std::uint64_t i) { return thetas.sample(i); },
            {cfg.L0, eta_dist}, cfg.n_cycles, cfg.seed);
        double mean_sin2 = 0.0;
        for (std::uint64_t i = 0; i < cfg.n_cycles; ++i) {
            const double s = std::sin(thetas.sample(i));
            mean_sin2 += s * s;
        }
        mean_sin2 /= static_cast<double>(cfg.n_cycles);
        EllipticRow row;
        row.theta_mean = theta_dist.moment(1);
        row.eta_amplitude = amp;
        row.gamma_direct = est.gamma;
        row.gamma_chain = chain.gamma;
        row.gamma_small_eta = gamma_small_eta(mean_sin2, eta_dist.moment(2));
        row.std_error = est.std_error;
        res.rows[j] = row;
    });
    return res;
}

HillEndToEndResult run_hill_end_to_end(const ExperimentConfig& cfg) {
    const bool lazy = cfg.shape.kind == BarrierKind::DeltaAtMidpoint;
    std::vector<CycleParams> cache;
    if (!lazy) {
        cache = cycle_stream(cfg.af_dist, cfg.q_dist, cfg.shape, cfg.seed, cfg.n_cycles);
    }
    auto cycle_at = [&](std::uint64_t i) {
        return lazy ? nth_cycle(cfg.af_dist, cfg.q_dist, cfg.shape, cfg.seed, i)
                    : cache[i];
    };
    HillEndToEndResult res;
    res.direct_full = lyapunov_direct(
        [&](std::uint64_t i) {
            const CycleParams c = cycle_at(i);
            return from_principal(c.h, c.g);
        },
        cfg.n_cycles, cfg.seed);
    res.scalar_part = gamma_h_component(
        [&](std::uint64_t i) { return cycle_at(i).h; }, cfg.n_cycles, cfg.seed);
    res.direct_unit = lyapunov_direct(
        [&](std::uint64_t i) {
            const CycleParams c = cycle_at(i);
            return unit_factor(c.x, c.phi);
        },
        cfg.n_cycles, cfg.seed);
    std::vector<std::pair<double, double>> eligible;
    eligible.reserve(cfg.n_cycles);
    for (std::uint64_t i = 0; i < cfg.n_cycles; ++i) {
        const CycleParams c = cycle_at(i);
        if (recursion_eligible(c)) eligible.emplace_back(c.x, c.phi);
    }
    res.eligible_cycles = eligible.size();
    res.excluded_cycles = cfg.n_cycles - eligible.size();
    if (eligible.size() < 2) {
        throw insufficient_data_error(
            "fewer than two cycles are eligible for the exact recursion");
    }
    res.recursion = gamma_exact_recursion(
        [&](std::uint64_t i) { return eligible[i]; }, eligible.size(), 1.0, cfg.seed);
    return res;
}

DirectResult run_direct(const ExperimentConfig& cfg) {
    DirectResult res;
    res.matrices = cfg.matrices;
    if (cfg.matrices == "unit") {
        const StreamHandle xs{cfg.x_dist, derive_seed(cfg.seed, kSaltX), 0};
        const StreamHandle phis{cfg.phi_dist, derive_seed(cfg.seed, kSaltXi), 0};
        res.estimate = lyapunov_direct(
            [&](std::uint64_t i) { return unit_factor(xs.sample(i), phis.sample(i)); },
            cfg.n_cycles, cfg.seed);
        return res;
    }
    if (cfg.matrices == "full") {
        const bool lazy = cfg.shape.kind == BarrierKind::DeltaAtMidpoint;
        std::vector<CycleParams> cache;
        if (!lazy) {
            cache =
                cycle_stream(cfg.af_dist, cfg.q_dist, cfg.shape, cfg.seed, cfg.n_cycles);
        }
        res.estimate = lyapunov_direct(
            [&](std::uint64_t i) {
                const CycleParams c =
                    lazy ? nth_cycle(cfg.af_dist, cfg.q_dist, cfg.shape, cfg.seed, i)
                         : cache[i];
                return from_principal(c.h, c.g);
            },
            cfg.n_cycles, cfg.seed);
        return res;
    }
    throw config_error("matrices must be 'unit' or 'full'");
}

namespace {

void push_common_meta(Csv& csv, const ExperimentConfig& cfg) {
    csv.meta.emplace_back("experiment", to_string(cfg.experiment));
    csv.meta.emplace_back("n_cycles", std::to_string(cfg.n_cycles));
    csv.meta.emplace_back("seed", std::to_string(cfg.seed));
}

std::string provenance(const ExperimentConfig& cfg) {
    return std::to_string(cfg.n_cycles) + "," + std::to_string(cfg.seed);
}

}  // namespace

int run_and_write(const ExperimentConfig& cfg) {
    Csv csv;
    switch (cfg.experiment) {
        case ExperimentKind::Fig1: {
            const auto res = run_fig1(cfg);
            push_common_meta(csv, cfg);
            csv.meta.emplace_back("x_dist", cfg.x_dist.encode());
            csv.meta.emplace_back("phi_rule", "a*xi with xi ~ uniform(0,1)");
            csv.columns = "a,gamma_direct,gamma_weak_phi,delta,std_error,n_cycles,seed";
            for (const auto& r : res.rows) {
                csv.rows.push_back(fmt17(r.a) + "," + fmt17(r.gamma_direct) + "," +
                                   fmt17(r.gamma_weak_phi) + "," + fmt17(r.delta) + "," +
                                   fmt17(r.std_error) + "," + provenance(cfg));
            }
            csv.footer.emplace_back("slope_gamma_direct", fmt17(res.slope_gamma));
            csv.footer.emplace_back("slope_delta", fmt17(res.slope_delta));
            break;
        }
        case ExperimentKind::Fig2: {
            const auto res = run_fig2(cfg);
            push_common_meta(csv, cfg);
            csv.meta.emplace_back("x_dist", cfg.x_dist.encode());
            csv.meta.emplace_back("phi_rule", "1 - A*xi with xi ~ uniform(0,1)");
            csv.meta.emplace_back("gamma_unit_phi", fmt17(res.gamma_unit_phi));
            csv.columns =
                "amplitude,delta_true,delta_model,model_error,std_error,n_cycles,seed";
            for (const auto& r : res.rows) {
                csv.rows.push_back(fmt17(r.amplitude) + "," + fmt17(r.delta_true) + "," +
                                   fmt17(r.delta_model) + "," + fmt17(r.model_error) +
                                   "," + fmt17(r.std_error) + "," + provenance(cfg));
            }
            csv.footer.emplace_back("slope_delta_true", fmt17(res.slope_delta));
            csv.footer.emplace_back("slope_model_error", fmt17(res.slope_error));
            break;
        }
        case ExperimentKind::Fig3: {
            const auto res = run_fig3(cfg);
            push_common_meta(csv, cfg);
            csv.meta.emplace_back("x_dist", cfg.x_dist.encode());
            csv.meta.emplace_back("phi_rule", "1 - A*xi with xi ~ uniform(0,1)");
            csv.columns =
                "amplitude,gamma_unit_phi,gamma_direct,gamma_truncated,"
                "gamma_fixed_point,gamma_lower_bound,std_error,n_cycles,seed";
            for (const auto& r : res.rows) {
                csv.rows.push_back(fmt17(r.amplitude) + "," + fmt17(r.gamma_unit_phi) +
                                   "," + fmt17(r.gamma_direct) + "," +
                                   fmt17(r.gamma_truncated) + "," +
                                   fmt17(r.gamma_fixed_point) + "," +
                                   fmt17(r.gamma_lower_bound) + "," +
                                   fmt17(r.std_error) + "," + provenance(cfg));
            }
            break;
        }
        case ExperimentKind::EllipticSweep: {
            const auto res = run_elliptic_sweep(cfg);
            push_common_meta(csv, cfg);
            csv.meta.emplace_back("theta_dist", cfg.theta_dist.encode());
            csv.meta.emplace_back("l0", fmt17(cfg.L0));
            csv.meta.emplace_back("eta_base", cfg.eta_base.encode());
            csv.meta.emplace_back("final_row",
                                  "theta = pi/2 at the largest amplitude (phase null)");
            csv.columns =
                "theta_mean,eta_amplitude,gamma_direct,gamma_chain,gamma_small_eta,"
                "std_error,n_cycles,seed";
            for (const auto& r : res.rows) {
                csv.rows.push_back(fmt17(r.theta_mean) + "," + fmt17(r.eta_amplitude) +
                                   "," + fmt17(r.gamma_direct) + "," +
                                   fmt17(r.gamma_chain) + "," +
                                   fmt17(r.gamma_small_eta) + "," + fmt17(r.std_error) +
                                   "," + provenance(cfg));
            }
            break;
        }
        case ExperimentKind::HillEndToEnd: {
            const auto res = run_hill_end_to_end(cfg);
            push_common_meta(csv, cfg);
            csv.meta.emplace_back("af_dist", cfg.af_dist.encode());
            csv.meta.emplace_back("q_dist", cfg.q_dist.encode());
            csv.meta.emplace_back("shape", cfg.shape.encode());
            csv.columns =
                "gamma_direct,std_error,gamma_scalar,gamma_unit_direct,gamma_recursion,"
                "recursion_std_error,eligible_cycles,excluded_cycles,n_cycles,seed";
            csv.rows.push_back(
                fmt17(res.direct_full.gamma) + "," + fmt17(res.direct_full.std_error) +
                "," + fmt17(res.scalar_part.gamma) + "," + fmt17(res.direct_unit.gamma) +
                "," + fmt17(res.recursion.gamma) + "," +
                fmt17(res.recursion.std_error) + "," +
                std::to_string(res.eligible_cycles) + "," +
                std::to_string(res.excluded_cycles) + "," + provenance(cfg));
            if (res.excluded_cycles > 0) {
                std::cerr << "warning: " << res.excluded_cycles
                          << " cycle(s) were not eligible for the recursion\n";
            }
            break;
        }
        case ExperimentKind::Custom: {
            const auto res = run_direct(cfg);
            push_common_meta(csv, cfg);
            csv.meta.emplace_back("matrices", res.matrices);
            if (cfg.matrices == "unit") {
                csv.meta.emplace_back("x_dist", cfg.x_dist.encode());
                csv.meta.emplace_back("phi_dist", cfg.phi_dist.encode());
            } else {
                csv.meta.emplace_back("af_dist", cfg.af_dist.encode());
                csv.meta.emplace_back("q_dist", cfg.q_dist.encode());
                csv.meta.emplace_back("shape", cfg.shape.encode());
            }
            csv.columns = "gamma,std_error,n_cycles,seed";
            csv.rows.push_back(fmt17(res.estimate.gamma) + "," +
                               fmt17(res.estimate.std_error) + "," + provenance(cfg));
            break;
        }
    }
    return write_csv(cfg.output_path, csv);
}

int run_extract_forcing(const ExperimentConfig& cfg, const std::string& shapes_path) {
    if (cfg.trajectory_path.empty()) {
        throw config_error("forcing extraction needs a trajectory file");
    }
    const TriaxialHalo halo =
        make_halo(cfg.halo_a, cfg.halo_b, cfg.halo_c, cfg.halo_rho0);
    const Trajectory traj = read_trajectory_csv(cfg.trajectory_path);
    const auto cycles = extract_cycles(halo, traj);
    if (cfg.output_path.empty() || cfg.output_path == "-") {
        throw config_error("forcing extraction needs an output file path");
    }
    write_cycles_csv(cfg.output_path, cycles);
    if (!shapes_path.empty()) write_cycle_shapes_csv(shapes_path, cycles);
    return static_cast<int>(cycles.size());
}

}  // namespace hillgrow
