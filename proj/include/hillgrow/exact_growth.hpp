#pragma once

#include <cstdint>
#include <functional>
#include <utility>

#include "hillgrow/symplectic_core.hpp"

namespace hillgrow {

// State of the entry-ratio recursion behind the exact growth formula.
// alpha_k equals P11 / (x_k P21) of the running product of unit-diagonal
// factors B = [[1, x phi], [1/x, 1]], so it starts at 1 after one factor.
struct AlphaState {
    double alpha = 1.0;
    double x_prev = 0.0;
    double phi_prev = 0.0;
};

// Advance alpha_k -> alpha_{k+1} given the next cycle's (x, phi).
// alpha_{k+1} = (x phi + x_prev alpha) / (x + x_prev alpha).
AlphaState alpha_step(const AlphaState& s, double x, double phi,
                      std::uint64_t cycle_index = 0);

using XPhiStream = std::function<std::pair<double, double>(std::uint64_t)>;

// Exact growth rate of products of B factors as the mean of log F_k over
// cycles 2..n, where
//   F_k = 1 + (x_k^2 phi_k + b alpha_{k-1} x_{k-1}) / (x_k (b + alpha_{k-1} x_{k-1})).
// The estimate is independent of b > 0 up to O(1/n) boundary terms; b = 1
// is the production value and other b are exercised by tests.
GrowthEstimate gamma_exact_recursion(const XPhiStream& stream, std::uint64_t n_cycles,
                                     double b = 1.0, std::uint64_t seed = 0);

// phi == 1 specialization: mean of log(1 + x_{k-1} / x_k) over cycles 2..n.
GrowthEstimate gamma_highly_unstable(const ValueStream& x_stream, std::uint64_t n_cycles,
                                     std::uint64_t seed = 0);

// gamma0 + <log phi> / 2: a lower bound for the growth rate of the
// phi-damped chain in terms of its phi == 1 counterpart gamma0.
double gamma_lower_bound(double gamma0, const ValueStream& phi_stream,
                         std::uint64_t n_cycles);

}  // namespace hillgrow
