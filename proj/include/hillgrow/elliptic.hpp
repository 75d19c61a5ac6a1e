#pragma once

#include <cstddef>
#include <cstdint>

#include "hillgrow/random_stream.hpp"
#include "hillgrow/symplectic_core.hpp"

namespace hillgrow {

// Rotation normal form of a stable cycle: the period map conjugate to a
// rotation by theta with axis ratio L > 0,
//   E(theta, L) = [[cos theta, -L sin theta], [sin theta / L, cos theta]].
// (theta, L) and (-theta, -L) describe the same map; L > 0 is canonical.
struct EllipticParams {
    double theta = 0.0;
    double L = 1.0;
};

CycleMatrix elliptic_matrix(const EllipticParams& p);

// Maps with equal axis ratio compose by adding angles.
EllipticParams compose_same_L(const EllipticParams& a, const EllipticParams& b,
                              double tol = 1e-12);

// Invert the (h, g) description of a stable cycle, |h| <= 1. Picks theta in
// (-pi, pi] with sign(theta) = sign(g) so that L = sin(theta)/g > 0. On the
// |h| = 1 boundary sin(theta) = 0 and L is unobservable; the convention is
// theta in {0, pi}, L = 1.
EllipticParams from_stable_cycle(double h, double g);

// Back-conversion to the half-trace description. Near theta = +-pi/2 the
// diagonal vanishes and (h, g, x, phi) stops being usable, hence the guard.
CycleParams to_cycle_params(const EllipticParams& p, double cos_tol = 1e-6);

// Per-cycle axis-ratio fluctuations L_k = L0 (1 + eta_k) with eta drawn
// i.i.d., symmetric, supported inside (-1, inf).
struct FluctuationSpec {
    double L0 = 1.0;
    DistributionSpec eta;
};

// Throws config_error if L0 <= 0, the support of eta reaches -1, or eta
// is not symmetric about zero.
void validate_fluctuation(const FluctuationSpec& f);

// R = <1 / (1 + eta)>, in closed form for every distribution kind.
double mean_inv_one_plus_eta(const DistributionSpec& eta);

// Deterministic midpoint-rule evaluation of the same mean; kept as a
// cross-check for the closed forms.
double mean_inv_one_plus_eta_quadrature(const DistributionSpec& eta,
                                        std::size_t points = 1000000);

// Growth rate of a stable chain whose axis ratio is redrawn every cycle:
//   gamma = (1/2) < log(cos^2 theta + R sin^2 theta) >,  R = <1/(1+eta)> >= 1.
// The result is checked to be nonnegative on every evaluation.
GrowthEstimate gamma_elliptic_chain(const ValueStream& theta_stream,
                                    const FluctuationSpec& fluct,
                                    std::uint64_t n_cycles, std::uint64_t seed = 0);

// Second-order small-fluctuation law (1/2) <sin^2 theta> <eta^2>. Loses
// validity as theta approaches pi/2 where phase decorrelation fails.
double gamma_small_eta(double mean_sin2_theta, double mean_eta2);

}  // namespace hillgrow
