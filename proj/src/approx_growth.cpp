#include "hillgrow/approx_growth.hpp"

#include <cmath>
#include <string>

namespace hillgrow {

namespace {

void require_positive(const char* what, double v, std::uint64_t index) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw numeric_domain_error(std::string(what) + " must be positive, got " +
                                   std::to_string(v) + " at draw " +
                                   std::to_string(index));
    }
}

double checked_log_factor(double num, double den, std::uint64_t index) {
    if (!(std::fabs(den) > 0.0)) {
        throw singular_step_error("truncated growth factor denominator vanished",
                                  static_cast<std::size_t>(index));
    }
    const double f = 1.0 + num / den;
    if (!(f > 0.0) || !std::isfinite(f)) {
        throw numeric_domain_error("truncated growth factor left the log domain at draw " +
                                   std::to_string(index));
    }
    return std::log(f);
}

}  // namespace

double gamma_small_phi(const MomentSummary& m, bool simplified) {
    if (m.mean_x_phi < 0.0) {
        throw numeric_domain_error("<x phi> must be nonnegative for the weak-forcing law");
    }
    if (m.mean_inv_x <= 0.0) {
        throw numeric_domain_error("<1/x> must be positive for the weak-forcing law");
    }
    const double root = std::sqrt(m.mean_inv_x * m.mean_x_phi);
    return simplified ? root : std::log1p(root);
}

double delta_gamma_near_unity(const XPhiStream& stream, std::uint64_t n_cycles) {
    if (n_cycles < 3) {
        throw insufficient_data_error(
            "the growth-deficit estimate needs at least three cycles");
    }
    auto draw = [&](std::uint64_t i) {
        const auto [x, phi] = stream(i);
        require_positive("x", x, i);
        if (phi > 1.0) {
            throw numeric_domain_error("the growth deficit assumes phi <= 1, got " +
                                       std::to_string(phi) + " at cycle " +
                                       std::to_string(i));
        }
        return std::pair{x, phi};
    };
    auto [x_prev, phi_prev] = draw(0);
    auto [x_cur, phi_cur] = draw(1);
    double acc = 0.0;
    for (std::uint64_t k = 2; k < n_cycles; ++k) {
        const auto [x_next, phi_next] = draw(k);
        acc += (1.0 - phi_cur) * x_cur * x_cur /
               ((x_next + x_cur) * (x_cur + x_prev));
        x_prev = x_cur;
        phi_prev = phi_cur;
        x_cur = x_next;
        phi_cur = phi_next;
    }
    (void)phi_prev;
    return acc / static_cast<double>(n_cycles - 2);
}

double gamma_truncated_tail(const ApproxDrawStream& stream, std::uint64_t n_terms) {
    if (n_terms == 0) {
        throw insufficient_data_error("the truncated estimate needs at least one draw");
    }
    double acc = 0.0;
    for (std::uint64_t i = 0; i < n_terms; ++i) {
        const ApproxDraw d = stream(i);
        require_positive("x1", d.x1, i);
        require_positive("x2", d.x2, i);
        require_positive("x3", d.x3, i);
        const double tail = d.x2 * (d.x2 * d.phi2 + d.x3);
        const double num = d.x1 * d.x1 * d.phi1 * (d.x2 + d.x3) + tail;
        const double den = d.x1 * ((d.x2 + d.x3) + tail);
        acc += checked_log_factor(num, den, i);
    }
    return acc / static_cast<double>(n_terms);
}

double gamma_fixed_point_tail(const ApproxDrawStream& stream, std::uint64_t n_terms) {
    if (n_terms == 0) {
        throw insufficient_data_error("the fixed-point estimate needs at least one draw");
    }
    double acc = 0.0;
    for (std::uint64_t i = 0; i < n_terms; ++i) {
        const ApproxDraw d = stream(i);
        require_positive("x1", d.x1, i);
        require_positive("x2", d.x2, i);
        require_positive("x3", d.x3, i);
        const double half_disc = d.x3 - d.x2;
        const double disc = half_disc * half_disc + 4.0 * d.x2 * d.x3 * d.phi2;
        if (disc < 0.0) {
            throw numeric_domain_error("tail fixed point has no real root at draw " +
                                       std::to_string(i));
        }
        const double root = half_disc + std::sqrt(disc);
        const double num = 2.0 * d.x1 * d.x1 * d.phi1 * d.x3 + d.x2 * root;
        const double den = d.x1 * (2.0 * d.x3 + d.x2 * root);
        acc += checked_log_factor(num, den, i);
    }
    return acc / static_cast<double>(n_terms);
}

}  // namespace hillgrow
