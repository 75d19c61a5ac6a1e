#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "hillgrow/errors.hpp"

namespace hillgrow {

enum class Regime { Hyperbolic, Elliptic, Parabolic };

// Period-advance map of one forcing cycle. The maps of interest have unit
// determinant and equal diagonal entries h = m11 = m22.
struct CycleMatrix {
    double m11 = 1.0, m12 = 0.0, m21 = 0.0, m22 = 1.0;

    static CycleMatrix identity() { return {}; }
    double det() const { return m11 * m22 - m12 * m21; }
    double trace() const { return m11 + m22; }
    double frobenius_norm() const;
    double max_abs() const;
    CycleMatrix operator*(const CycleMatrix& rhs) const;
};

// Scalar description of one cycle: h is the shared diagonal entry of the
// period map, g the lower-left entry, x = h/g, phi = 1 - 1/h^2. x > 0 is
// required by the recursion-based growth estimators and is validated there;
// period maps can legitimately produce x <= 0 and such cycles are excluded
// from those paths by the caller.
struct CycleParams {
    double h = 0.0;
    double g = 0.0;
    double x = 0.0;
    double phi = 0.0;
    Regime regime = Regime::Parabolic;
};

// Stability class from the shared diagonal entry alone.
Regime classify(double h, double tol = 1e-12);

// Rebuild the period map [[h, (h^2-1)/g], [g, h]] from its scalar data.
CycleMatrix from_principal(double h, double g);

// Full scalar record for (h, g). g = 0 is representable only on the
// |h| = 1 boundary, where x comes out infinite.
CycleParams cycle_params_from(double h, double g, double tol = 1e-12);

// Split m = h * B with B = [[1, x*phi], [1/x, 1]]. Requires equal diagonal
// entries; |m11| <= tol has no usable factorization of this shape.
std::pair<double, CycleMatrix> decompose(const CycleMatrix& m, double tol = 1e-12);

enum class RenormNorm { Frobenius, MaxAbs };

// Running product P_k = M_k * ... * M_1 held as a norm-1 matrix plus the
// accumulated log of the peeled-off scale. The start state is the exact
// identity with log_scale = 0, so after the first accumulate log_scale
// equals log ||M_1||.
struct ProductState {
    CycleMatrix scaled = CycleMatrix::identity();
    double log_scale = 0.0;
    std::uint64_t count = 0;
};

ProductState multiply_accumulate(const ProductState& s, const CycleMatrix& m,
                                 RenormNorm norm = RenormNorm::Frobenius);

struct GrowthEstimate {
    double gamma = 0.0;
    std::uint64_t n_cycles = 0;
    double std_error = 0.0;
    std::uint64_t seed = 0;
};

using MatrixStream = std::function<CycleMatrix(std::uint64_t)>;
using ValueStream = std::function<double(std::uint64_t)>;

// Top growth rate log||M_n ... M_1|| / n of a matrix stream. The standard
// error comes from splitting the per-cycle log increments into up to 32
// contiguous batches.
GrowthEstimate lyapunov_direct(const MatrixStream& stream, std::uint64_t n_cycles,
                               std::uint64_t seed = 0,
                               RenormNorm norm = RenormNorm::Frobenius);

// Mean of log|h_k|: the scalar part of the growth rate when each period
// map is written as h * B.
GrowthEstimate gamma_h_component(const ValueStream& h_stream, std::uint64_t n_cycles,
                                 std::uint64_t seed = 0);

// Standard error of the mean of `values` from min(32, n) contiguous batches.
double batched_std_error(const std::vector<double>& values);

}  // namespace hillgrow
