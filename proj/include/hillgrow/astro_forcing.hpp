#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hillgrow/errors.hpp"

namespace hillgrow {

// Axis lengths of a triaxial density profile, a >= b >= c > 0. Only the
// combination in omega_y_squared enters the dynamics; rho0 rides along for
// the record.
struct TriaxialHalo {
    double a = 1.0, b = 1.0, c = 1.0;
    double rho0 = 1.0;
};

TriaxialHalo make_halo(double a, double b, double c, double rho0 = 1.0);

struct TrajectorySample {
    double t = 0.0, x = 0.0, z = 0.0;
};

// In-plane orbit samples with strictly increasing times; at least three
// samples are needed to talk about minima.
struct Trajectory {
    std::vector<TrajectorySample> samples;
};

// CSV with header "t,x,z"; '#' lines and blank lines are skipped.
Trajectory read_trajectory_csv(const std::string& path);
void validate_trajectory(const Trajectory& traj);

// Squared frequency of small vertical oscillations at in-plane position
// (x, z): (4/b) / (sqrt(c^2 x^2 + a^2 z^2) + b sqrt(x^2 + z^2)).
// Unbounded at the origin.
double omega_y_squared(const TriaxialHalo& halo, double x, double z);

// One oscillation cycle cut out of a trace: af is the floor of omega_y^2
// on the segment, q the excess integral rescaled to the unit period, and
// shape carries (tau, profile) samples with tau mapped onto [0, pi].
struct ExtractedCycle {
    std::uint64_t index = 0;
    double af = 0.0;
    double q = 0.0;
    double segment_length = 0.0;
    std::vector<std::pair<double, double>> shape;
};

// Cut the trace at local minima of omega_y^2(t). Endpoints qualify with a
// one-sided test; interior plateaus count their first point. Fewer than
// two boundaries cannot delimit a cycle.
std::vector<ExtractedCycle> extract_cycles(const TriaxialHalo& halo,
                                           const Trajectory& traj);

void write_cycles_csv(const std::string& path, const std::vector<ExtractedCycle>& cycles);
void write_cycle_shapes_csv(const std::string& path,
                            const std::vector<ExtractedCycle>& cycles);

}  // namespace hillgrow
