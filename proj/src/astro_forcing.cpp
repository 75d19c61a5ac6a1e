#include "hillgrow/astro_forcing.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace hillgrow {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string format_number(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_field(const std::string& tok, const std::string& line) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (tok.empty() || end != tok.c_str() + tok.size()) {
        throw config_error("bad trajectory field '" + tok + "' in line '" + line + "'");
    }
    return v;
}

}  // namespace

TriaxialHalo make_halo(double a, double b, double c, double rho0) {
    if (!(c > 0.0) || !(b >= c) || !(a >= b)) {
        throw config_error("halo axes must satisfy a >= b >= c > 0");
    }
    if (!(rho0 > 0.0)) {
        throw config_error("halo density scale must be positive");
    }
    return {a, b, c, rho0};
}

void validate_trajectory(const Trajectory& traj) {
    if (traj.samples.size() < 3) {
        throw insufficient_data_error("a trajectory needs at least three samples");
    }
    for (std::size_t i = 1; i < traj.samples.size(); ++i) {
        if (!(traj.samples[i].t > traj.samples[i - 1].t)) {
            throw config_error("trajectory times must increase strictly");
        }
    }
}

Trajectory read_trajectory_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open trajectory file '" + path + "'");
    Trajectory traj;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            std::string squeezed;
            for (char c : line) {
                if (c != ' ' && c != '\t') squeezed.push_back(c);
            }
            if (squeezed != "t,x,z") {
                throw config_error("trajectory header must be 't,x,z', got '" + line + "'");
            }
            header_seen = true;
            continue;
        }
        std::stringstream ss(line);
        std::string tok;
        double vals[3];
        for (int i = 0; i < 3; ++i) {
            if (!std::getline(ss, tok, ',')) {
                throw config_error("trajectory row needs three fields: '" + line + "'");
            }
            vals[i] = parse_field(tok, line);
        }
        if (std::getline(ss, tok, ',')) {
            throw config_error("trajectory row has extra fields: '" + line + "'");
        }
        traj.samples.push_back({vals[0], vals[1], vals[2]});
    }
    if (!header_seen) throw config_error("trajectory file '" + path + "' has no header");
    validate_trajectory(traj);
    return traj;
}

double omega_y_squared(const TriaxialHalo& halo, double x, double z) {
    if (x == 0.0 && z == 0.0) {
        throw numeric_domain_error("the restoring frequency is unbounded at the origin");
    }
    const double cross = std::hypot(halo.c * x, halo.a * z);
    const double radial = std::hypot(x, z);
    return (4.0 / halo.b) / (cross + halo.b * radial);
}

std::vector<ExtractedCycle> extract_cycles(const TriaxialHalo& halo,
                                           const Trajectory& traj) {
    validate_trajectory(traj);
    const std::size_t n = traj.samples.size();
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = omega_y_squared(halo, traj.samples[i].x, traj.samples[i].z);
    }
    // Local minima with a one-sided endpoint rule; an interior plateau
    // counts its first point only.
    std::vector<std::size_t> boundaries;
    if (w[0] <= w[1]) boundaries.push_back(0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (w[i] < w[i - 1] && w[i] <= w[i + 1]) boundaries.push_back(i);
    }
    if (w[n - 1] < w[n - 2]) boundaries.push_back(n - 1);
    if (boundaries.size() < 2) {
        throw insufficient_data_error(
            "fewer than two frequency minima; no full oscillation cycle in the trace");
    }
    std::vector<ExtractedCycle> cycles;
    cycles.reserve(boundaries.size() - 1);
    for (std::size_t b = 0; b + 1 < boundaries.size(); ++b) {
        const std::size_t i0 = boundaries[b];
        const std::size_t i1 = boundaries[b + 1];
        const double t0 = traj.samples[i0].t;
        const double period = traj.samples[i1].t - t0;
        double floor_w = w[i0];
        for (std::size_t i = i0; i <= i1; ++i) floor_w = std::min(floor_w, w[i]);
        double excess = 0.0;  // trapezoid integral of (w - floor) over t
        for (std::size_t i = i0; i + 1 <= i1; ++i) {
            const double dt = traj.samples[i + 1].t - traj.samples[i].t;
            excess += 0.5 * (w[i] + w[i + 1] - 2.0 * floor_w) * dt;
        }
        ExtractedCycle c;
        c.index = b;
        c.af = floor_w;
        c.segment_length = period;
        c.q = excess * kPi / period;
        c.shape.reserve(i1 - i0 + 1);
        for (std::size_t i = i0; i <= i1; ++i) {
            const double tau = (traj.samples[i].t - t0) * kPi / period;
            const double profile = c.q > 0.0 ? (w[i] - floor_w) / c.q : 0.0;
            c.shape.emplace_back(tau, profile);
        }
        cycles.push_back(std::move(c));
    }
    return cycles;
}

void write_cycles_csv(const std::string& path, const std::vector<ExtractedCycle>& cycles) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("cannot open output file '" + path + "'");
    out << "cycle_index,af,q,segment_length\n";
    for (const auto& c : cycles) {
        out << c.index << ',' << format_number(c.af) << ',' << format_number(c.q) << ','
            << format_number(c.segment_length) << '\n';
    }
}

void write_cycle_shapes_csv(const std::string& path,
                            const std::vector<ExtractedCycle>& cycles) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("cannot open output file '" + path + "'");
    out << "cycle_index,tau,profile\n";
    for (const auto& c : cycles) {
        for (const auto& [tau, profile] : c.shape) {
            out << c.index << ',' << format_number(tau) << ',' << format_number(profile)
                << '\n';
        }
    }
}

}  // namespace hillgrow
