#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hillgrow/random_stream.hpp"
#include "hillgrow/symplectic_core.hpp"

namespace hillgrow {

enum class BarrierKind { DeltaAtMidpoint, SquareWell, RaisedCosine };

// Forcing profile within one period t in [0, pi]: unit integral, symmetric
// about the midpoint. Canonical text forms: "delta", "square(w=0.5)",
// "cosine".
struct BarrierShape {
    BarrierKind kind = BarrierKind::DeltaAtMidpoint;
    double width = 0.0;  // square well only, in (0, pi]

    static BarrierShape delta();
    static BarrierShape square(double width);
    static BarrierShape cosine();
    static BarrierShape parse(const std::string& text);
    std::string encode() const;

    // Pointwise profile value; the delta has no pointwise density.
    double density(double t) const;
};

// One cycle of y'' + (af + q * profile(t)) y = 0 over t in [0, pi].
struct HillCycleParams {
    double af = 0.0;
    double q = 0.0;  // q >= 0
    BarrierShape shape;
};

// Principal-solution data of one cycle: h = y1(pi), g = y1'(pi) with
// y1(0) = 1, y1'(0) = 0. The delta barrier dispatches to its closed form;
// other shapes integrate the fundamental matrix with fixed-step RK4,
// halving the step until the Wronskian, the h = y2'(pi) symmetry, and a
// step-doubling comparison all pass.
CycleParams principal_solutions(const HillCycleParams& p);

// Exact period maps built from constant-coefficient transfer matrices.
CycleParams delta_barrier_closed_form(double af, double q);
CycleParams square_well_closed_form(double af, double q, double width);

// Deterministic sequence of cycles with af and q redrawn each period.
std::vector<CycleParams> cycle_stream(const DistributionSpec& af_dist,
                                      const DistributionSpec& q_dist,
                                      const BarrierShape& shape,
                                      std::uint64_t seed, std::uint64_t n_cycles);

// Random access into the same sequence: nth_cycle(..., i) equals element i
// of cycle_stream(...) for any n_cycles > i.
CycleParams nth_cycle(const DistributionSpec& af_dist, const DistributionSpec& q_dist,
                      const BarrierShape& shape, std::uint64_t seed, std::uint64_t i);

// Streaming form of cycle_stream for long chains.
void for_each_cycle(const DistributionSpec& af_dist, const DistributionSpec& q_dist,
                    const BarrierShape& shape, std::uint64_t seed,
                    std::uint64_t n_cycles,
                    const std::function<void(std::uint64_t, const CycleParams&)>& fn);

// True when a cycle can feed the recursion-based growth estimators.
bool recursion_eligible(const CycleParams& c);

}  // namespace hillgrow
