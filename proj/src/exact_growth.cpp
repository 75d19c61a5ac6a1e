#include "hillgrow/exact_growth.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace hillgrow {

namespace {

constexpr double kDenFloor = 1e-300;

void require_positive_x(double x, std::uint64_t index) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw numeric_domain_error("recursion requires x > 0, got " +
                                   std::to_string(x) + " at cycle " +
                                   std::to_string(index));
    }
}

GrowthEstimate mean_estimate(const std::vector<double>& terms, std::uint64_t n_cycles,
                             std::uint64_t seed) {
    double mean = 0.0;
    for (double v : terms) mean += v;
    mean /= static_cast<double>(terms.size());
    GrowthEstimate est;
    est.gamma = mean;
    est.n_cycles = n_cycles;
    est.std_error = batched_std_error(terms);
    est.seed = seed;
    return est;
}

}  // namespace

AlphaState alpha_step(const AlphaState& s, double x, double phi,
                      std::uint64_t cycle_index) {
    const double den = x + s.x_prev * s.alpha;
    if (std::fabs(den) < kDenFloor) {
        throw singular_step_error("entry-ratio recursion denominator vanished",
                                  static_cast<std::size_t>(cycle_index));
    }
    return {(x * phi + s.x_prev * s.alpha) / den, x, phi};
}

GrowthEstimate gamma_exact_recursion(const XPhiStream& stream, std::uint64_t n_cycles,
                                     double b, std::uint64_t seed) {
    if (n_cycles < 2) {
        throw insufficient_data_error("the exact recursion needs at least two cycles");
    }
    auto [x1, phi1] = stream(0);
    require_positive_x(x1, 0);
    AlphaState st{1.0, x1, phi1};
    std::vector<double> terms;
    terms.reserve(n_cycles - 1);
    for (std::uint64_t k = 1; k < n_cycles; ++k) {
        const auto [x, phi] = stream(k);
        require_positive_x(x, k);
        const double tail = st.alpha * st.x_prev;
        const double den = x * (b + tail);
        if (std::fabs(den) < kDenFloor) {
            throw singular_step_error("growth factor denominator vanished",
                                      static_cast<std::size_t>(k));
        }
        const double f = 1.0 + (x * x * phi + b * tail) / den;
        if (!(f > 0.0) || !std::isfinite(f)) {
            throw numeric_domain_error("growth factor left the log domain at cycle " +
                                       std::to_string(k));
        }
        terms.push_back(std::log(f));
        st = alpha_step(st, x, phi, k);
    }
    return mean_estimate(terms, n_cycles, seed);
}

GrowthEstimate gamma_highly_unstable(const ValueStream& x_stream, std::uint64_t n_cycles,
                                     std::uint64_t seed) {
    if (n_cycles < 2) {
        throw insufficient_data_error("the ratio form needs at least two cycles");
    }
    double x_prev = x_stream(0);
    require_positive_x(x_prev, 0);
    std::vector<double> terms;
    terms.reserve(n_cycles - 1);
    for (std::uint64_t k = 1; k < n_cycles; ++k) {
        const double x = x_stream(k);
        require_positive_x(x, k);
        terms.push_back(std::log1p(x_prev / x));
        x_prev = x;
    }
    return mean_estimate(terms, n_cycles, seed);
}

double gamma_lower_bound(double gamma0, const ValueStream& phi_stream,
                         std::uint64_t n_cycles) {
    if (n_cycles == 0) {
        throw insufficient_data_error("the lower bound needs at least one cycle");
    }
    double acc = 0.0;
    for (std::uint64_t k = 0; k < n_cycles; ++k) {
        const double phi = phi_stream(k);
        if (!(phi > 0.0)) {
            throw numeric_domain_error("lower bound requires phi > 0, got " +
                                       std::to_string(phi) + " at cycle " +
                                       std::to_string(k));
        }
        acc += std::log(phi);
    }
    return gamma0 + 0.5 * acc / static_cast<double>(n_cycles);
}

}  // namespace hillgrow
