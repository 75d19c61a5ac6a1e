#include "hillgrow/elliptic.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace hillgrow {

namespace {

constexpr double kPi = 3.14159265358979323846;

double wrap_angle(double t) {
    // Map to (-pi, pi].
    t = std::fmod(t, 2.0 * kPi);
    if (t <= -kPi) t += 2.0 * kPi;
    if (t > kPi) t -= 2.0 * kPi;
    return t;
}

}  // namespace

CycleMatrix elliptic_matrix(const EllipticParams& p) {
    if (!(p.L > 0.0)) {
        throw numeric_domain_error("axis ratio must be positive, got " +
                                   std::to_string(p.L));
    }
    const double c = std::cos(p.theta);
    const double s = std::sin(p.theta);
    return {c, -p.L * s, s / p.L, c};
}

EllipticParams compose_same_L(const EllipticParams& a, const EllipticParams& b,
                              double tol) {
    const double scale = std::max(1.0, std::fabs(a.L));
    if (std::fabs(a.L - b.L) > tol * scale) {
        throw contract_violation_error("angle addition needs equal axis ratios");
    }
    return {wrap_angle(a.theta + b.theta), a.L};
}

EllipticParams from_stable_cycle(double h, double g) {
    if (std::fabs(h) > 1.0) {
        throw wrong_regime_error("rotation normal form needs |h| <= 1, got h = " +
                                 std::to_string(h));
    }
    if (std::fabs(h) == 1.0) {
        // sin(theta) = 0: the rotation part is +-identity and the axis
        // ratio is unobservable; fix it at 1.
        return {h > 0.0 ? 0.0 : kPi, 1.0};
    }
    if (g == 0.0) {
        throw degenerate_input_error(
            "a strictly stable cycle cannot have g = 0 in this normal form");
    }
    const double theta0 = std::acos(h);  // in (0, pi)
    const double theta = g > 0.0 ? theta0 : -theta0;
    return {theta, std::sin(theta) / g};
}

CycleParams to_cycle_params(const EllipticParams& p, double cos_tol) {
    if (!(p.L > 0.0)) {
        throw numeric_domain_error("axis ratio must be positive");
    }
    const double c = std::cos(p.theta);
    if (std::fabs(c) <= cos_tol) {
        throw wrong_regime_error(
            "diagonal entry vanishes near theta = +-pi/2; the (h, g) form is unusable");
    }
    const double s = std::sin(p.theta);
    CycleParams out;
    out.h = c;
    out.g = s / p.L;
    out.x = p.L * c / s;           // h / g
    out.phi = 1.0 - 1.0 / (c * c); // equals -tan^2(theta)
    out.regime = classify(c);
    return out;
}

void validate_fluctuation(const FluctuationSpec& f) {
    if (!(f.L0 > 0.0)) {
        throw config_error("base axis ratio L0 must be positive");
    }
    if (f.eta.support_min() <= -1.0) {
        throw config_error("fluctuation support must stay inside (-1, inf)");
    }
    const double mean = f.eta.moment(1);
    const double scale = std::max(1.0, std::fabs(f.eta.support_max()));
    if (std::fabs(mean) > 1e-12 * scale) {
        throw config_error("fluctuations must be symmetric about zero, got mean " +
                           std::to_string(mean));
    }
}

double mean_inv_one_plus_eta(const DistributionSpec& eta) {
    if (eta.support_min() <= -1.0) {
        throw numeric_domain_error("<1/(1+eta)> diverges when the support reaches -1");
    }
    switch (eta.kind) {
        case DistKind::Constant:
            return 1.0 / (1.0 + eta.p0);
        case DistKind::Uniform:
            return (std::log1p(eta.p1) - std::log1p(eta.p0)) / (eta.p1 - eta.p0);
        case DistKind::AffineOfUniform: {
            if (eta.p1 == 0.0) return 1.0 / (1.0 + eta.p0);
            const double lo = eta.support_min();
            const double hi = eta.support_max();
            return (std::log1p(hi) - std::log1p(lo)) / (hi - lo);
        }
        case DistKind::LogUniform: {
            // <1/(1+10^u)> over u uniform on [u0, u1]; the antiderivative of
            // the integrand is -log10(1 + 10^{-u}) up to a constant.
            const double ln10 = std::log(10.0);
            const double a0 = std::log1p(std::pow(10.0, -eta.p0));
            const double a1 = std::log1p(std::pow(10.0, -eta.p1));
            return (a0 - a1) / (ln10 * (eta.p1 - eta.p0));
        }
    }
    throw not_implemented_error("unhandled distribution kind");
}

double mean_inv_one_plus_eta_quadrature(const DistributionSpec& eta,
                                        std::size_t points) {
    if (eta.support_min() <= -1.0) {
        throw numeric_domain_error("<1/(1+eta)> diverges when the support reaches -1");
    }
    if (points == 0) {
        throw insufficient_data_error("quadrature needs at least one point");
    }
    // Midpoint rule through the quantile map; deterministic, no RNG.
    double acc = 0.0;
    const double np = static_cast<double>(points);
    for (std::size_t i = 0; i < points; ++i) {
        const double u = (static_cast<double>(i) + 0.5) / np;
        acc += 1.0 / (1.0 + eta.sample_from(u));
    }
    return acc / np;
}

GrowthEstimate gamma_elliptic_chain(const ValueStream& theta_stream,
                                    const FluctuationSpec& fluct,
                                    std::uint64_t n_cycles, std::uint64_t seed) {
    if (n_cycles == 0) {
        throw insufficient_data_error("growth estimation needs at least one cycle");
    }
    validate_fluctuation(fluct);
    const double r = mean_inv_one_plus_eta(fluct.eta);
    if (!std::isfinite(r)) {
        throw numeric_domain_error("<1/(1+eta)> is not finite");
    }
    std::vector<double> terms;
    terms.reserve(n_cycles);
    for (std::uint64_t i = 0; i < n_cycles; ++i) {
        const double c = std::cos(theta_stream(i));
        const double c2 = c * c;
        terms.push_back(0.5 * std::log(c2 + (1.0 - c2) * r));
    }
    double mean = 0.0;
    for (double v : terms) mean += v;
    mean /= static_cast<double>(n_cycles);
    if (mean < 0.0) {
        throw numeric_domain_error(
            "stable-chain growth came out negative; fluctuation input is inconsistent");
    }
    GrowthEstimate est;
    est.gamma = mean;
    est.n_cycles = n_cycles;
    est.std_error = batched_std_error(terms);
    est.seed = seed;
    return est;
}

double gamma_small_eta(double mean_sin2_theta, double mean_eta2) {
    if (mean_sin2_theta < 0.0 || mean_eta2 < 0.0) {
        throw numeric_domain_error("second moments cannot be negative");
    }
    return 0.5 * mean_sin2_theta * mean_eta2;
}

}  // namespace hillgrow
