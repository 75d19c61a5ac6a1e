#pragma once

#include <cstdint>
#include <functional>

#include "hillgrow/exact_growth.hpp"

namespace hillgrow {

struct MomentSummary {
    double mean_inv_x = 0.0;  // <1/x>
    double mean_x_phi = 0.0;  // <x phi>
    std::uint64_t n = 0;
};

// Weak-forcing growth law log(1 + sqrt(<1/x><x phi>)). The simplified
// variant returns the square root itself, valid when it is small.
double gamma_small_phi(const MomentSummary& m, bool simplified = false);

// Growth deficit of a nearly marginal chain (phi <= 1) relative to its
// phi == 1 counterpart: mean over interior cycles k = 2..n-1 of
//   (1 - phi_k) x_k^2 / ((x_{k+1} + x_k)(x_k + x_{k-1})).
// Edge cycles lack a neighbor on one side and are dropped.
double delta_gamma_near_unity(const XPhiStream& stream, std::uint64_t n_cycles);

// One independent draw for the truncated-tail estimates: three x values
// and the two phi values the truncation depth needs.
struct ApproxDraw {
    double x1 = 1.0, x2 = 1.0, x3 = 1.0;
    double phi1 = 1.0, phi2 = 1.0;
};
using ApproxDrawStream = std::function<ApproxDraw(std::uint64_t)>;

// Growth factor with the entry-ratio tail cut after two levels; the mean
// of log F over fresh independent draws.
double gamma_truncated_tail(const ApproxDrawStream& stream, std::uint64_t n_terms);

// Same depth, but the tail is closed with its self-consistent fixed point
// (the positive root of the quadratic it satisfies).
double gamma_fixed_point_tail(const ApproxDrawStream& stream, std::uint64_t n_terms);

}  // namespace hillgrow
