#include "hillgrow/symplectic_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hillgrow {

double CycleMatrix::max_abs() const {
    return std::max(std::max(std::fabs(m11), std::fabs(m12)),
                    std::max(std::fabs(m21), std::fabs(m22)));
}

double CycleMatrix::frobenius_norm() const {
    // Scaled form stays finite even when entries approach the overflow edge.
    const double m = max_abs();
    if (m == 0.0) return 0.0;
    const double a = m11 / m, b = m12 / m, c = m21 / m, d = m22 / m;
    return m * std::sqrt(a * a + b * b + c * c + d * d);
}

CycleMatrix CycleMatrix::operator*(const CycleMatrix& r) const {
    return {m11 * r.m11 + m12 * r.m21, m11 * r.m12 + m12 * r.m22,
            m21 * r.m11 + m22 * r.m21, m21 * r.m12 + m22 * r.m22};
}

Regime classify(double h, double tol) {
    const double d = std::fabs(h) - 1.0;
    if (std::fabs(d) <= tol) return Regime::Parabolic;
    return d > 0.0 ? Regime::Hyperbolic : Regime::Elliptic;
}

CycleMatrix from_principal(double h, double g) {
    if (g == 0.0) {
        throw degenerate_input_error("cannot rebuild the period map with g = 0");
    }
    return {h, (h * h - 1.0) / g, g, h};
}

CycleParams cycle_params_from(double h, double g, double tol) {
    if (g == 0.0 && std::fabs(std::fabs(h) - 1.0) > 1e-6) {
        throw degenerate_input_error(
            "g = 0 is only consistent with |h| = 1 for a unit-determinant map");
    }
    CycleParams p;
    p.h = h;
    p.g = g;
    p.x = h / g;  // +-inf on the g = 0 boundary
    p.phi = 1.0 - 1.0 / (h * h);
    p.regime = classify(h, tol);
    return p;
}

std::pair<double, CycleMatrix> decompose(const CycleMatrix& m, double tol) {
    const double scale = std::max(1.0, std::fabs(m.m11));
    if (std::fabs(m.m11 - m.m22) > tol * scale) {
        throw contract_violation_error("factorization requires equal diagonal entries");
    }
    if (std::fabs(m.m11) <= tol) {
        throw wrong_regime_error(
            "diagonal entry too small to factor out; use the rotation normal form");
    }
    const double h = m.m11;
    return {h, CycleMatrix{1.0, m.m12 / h, m.m21 / h, 1.0}};
}

ProductState multiply_accumulate(const ProductState& s, const CycleMatrix& m,
                                 RenormNorm norm) {
    ProductState out;
    out.scaled = m * s.scaled;
    const double nv = (norm == RenormNorm::Frobenius) ? out.scaled.frobenius_norm()
                                                      : out.scaled.max_abs();
    if (!(nv > 0.0) || !std::isfinite(nv)) {
        throw numeric_overflow_error("product scale lost after multiply at cycle " +
                                     std::to_string(s.count));
    }
    out.scaled.m11 /= nv;
    out.scaled.m12 /= nv;
    out.scaled.m21 /= nv;
    out.scaled.m22 /= nv;
    out.log_scale = s.log_scale + std::log(nv);
    out.count = s.count + 1;
    return out;
}

double batched_std_error(const std::vector<double>& values) {
    const std::size_t n = values.size();
    const std::size_t nb = std::min<std::size_t>(32, n);
    if (nb < 2) return 0.0;
    std::vector<double> means(nb, 0.0);
    std::size_t start = 0;
    for (std::size_t b = 0; b < nb; ++b) {
        const std::size_t stop = ((b + 1) * n) / nb;
        double acc = 0.0;
        for (std::size_t i = start; i < stop; ++i) acc += values[i];
        means[b] = acc / static_cast<double>(stop - start);
        start = stop;
    }
    double mean = 0.0;
    for (double v : means) mean += v;
    mean /= static_cast<double>(nb);
    double ss = 0.0;
    for (double v : means) ss += (v - mean) * (v - mean);
    const double sample_var = ss / static_cast<double>(nb - 1);
    return std::sqrt(sample_var / static_cast<double>(nb));
}

GrowthEstimate lyapunov_direct(const MatrixStream& stream, std::uint64_t n_cycles,
                               std::uint64_t seed, RenormNorm norm) {
    if (n_cycles == 0) {
        throw insufficient_data_error("growth estimation needs at least one cycle");
    }
    const std::uint64_t nb = std::min<std::uint64_t>(32, n_cycles);
    std::vector<double> batch_rates;
    batch_rates.reserve(nb);
    ProductState st;
    double prev_log = 0.0;
    std::uint64_t prev_count = 0;
    std::uint64_t next_edge = n_cycles / nb;
    for (std::uint64_t i = 0; i < n_cycles; ++i) {
        st = multiply_accumulate(st, stream(i), norm);
        if (st.count == next_edge) {
            batch_rates.push_back((st.log_scale - prev_log) /
                                  static_cast<double>(st.count - prev_count));
            prev_log = st.log_scale;
            prev_count = st.count;
            next_edge = ((batch_rates.size() + 1) * n_cycles) / nb;
        }
    }
    GrowthEstimate est;
    est.gamma = st.log_scale / static_cast<double>(n_cycles);
    est.n_cycles = n_cycles;
    est.seed = seed;
    if (batch_rates.size() >= 2) {
        double mean = 0.0;
        for (double v : batch_rates) mean += v;
        mean /= static_cast<double>(batch_rates.size());
        double ss = 0.0;
        for (double v : batch_rates) ss += (v - mean) * (v - mean);
        est.std_error = std::sqrt(ss / static_cast<double>(batch_rates.size() - 1) /
                                  static_cast<double>(batch_rates.size()));
    }
    return est;
}

GrowthEstimate gamma_h_component(const ValueStream& h_stream, std::uint64_t n_cycles,
                                 std::uint64_t seed) {
    if (n_cycles == 0) {
        throw insufficient_data_error("growth estimation needs at least one cycle");
    }
    std::vector<double> terms;
    terms.reserve(n_cycles);
    for (std::uint64_t i = 0; i < n_cycles; ++i) {
        const double h = h_stream(i);
        if (h == 0.0) {
            throw numeric_domain_error("log|h| undefined at h = 0 (cycle " +
                                       std::to_string(i) + ")");
        }
        terms.push_back(std::log(std::fabs(h)));
    }
    double mean = 0.0;
    for (double v : terms) mean += v;
    mean /= static_cast<double>(n_cycles);
    GrowthEstimate est;
    est.gamma = mean;
    est.n_cycles = n_cycles;
    est.std_error = batched_std_error(terms);
    est.seed = seed;
    return est;
}

}  // namespace hillgrow
