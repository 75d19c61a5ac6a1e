#include "hillgrow/hill_cycle.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <string>

namespace hillgrow {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Transfer matrix of y'' + a y = 0 over a span tau: trigonometric for
// a > 0, hyperbolic for a < 0, linear drift for a = 0.
CycleMatrix span_map(double a, double tau) {
    if (a > 0.0) {
        const double w = std::sqrt(a);
        const double c = std::cos(w * tau);
        const double s = std::sin(w * tau);
        return {c, s / w, -w * s, c};
    }
    if (a < 0.0) {
        const double k = std::sqrt(-a);
        const double c = std::cosh(k * tau);
        const double s = std::sinh(k * tau);
        return {c, s / k, k * s, c};
    }
    return {1.0, tau, 0.0, 1.0};
}

double parse_number(const std::string& tok, const std::string& context) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (tok.empty() || end != tok.c_str() + tok.size()) {
        throw config_error("bad number '" + tok + "' in '" + context + "'");
    }
    return v;
}

std::string format_number(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

}  // namespace

BarrierShape BarrierShape::delta() { return {BarrierKind::DeltaAtMidpoint, 0.0}; }

BarrierShape BarrierShape::square(double width) {
    if (!(width > 0.0) || !(width <= kPi)) {
        throw config_error("square well width must lie in (0, pi]");
    }
    return {BarrierKind::SquareWell, width};
}

BarrierShape BarrierShape::cosine() { return {BarrierKind::RaisedCosine, 0.0}; }

BarrierShape BarrierShape::parse(const std::string& text) {
    std::string s;
    s.reserve(text.size());
    for (char c : text) {
        if (c != ' ' && c != '\t') s.push_back(c);
    }
    if (s == "delta") return delta();
    if (s == "cosine") return cosine();
    if (s.rfind("square(", 0) == 0 && !s.empty() && s.back() == ')') {
        std::string body = s.substr(7, s.size() - 8);
        if (body.rfind("w=", 0) == 0) body = body.substr(2);
        return square(parse_number(body, text));
    }
    throw config_error("cannot parse barrier shape '" + text + "'");
}

std::string BarrierShape::encode() const {
    switch (kind) {
        case BarrierKind::DeltaAtMidpoint:
            return "delta";
        case BarrierKind::SquareWell:
            return "square(w=" + format_number(width) + ")";
        case BarrierKind::RaisedCosine:
            return "cosine";
    }
    throw not_implemented_error("unhandled barrier kind");
}

double BarrierShape::density(double t) const {
    switch (kind) {
        case BarrierKind::DeltaAtMidpoint:
            throw not_implemented_error("the delta barrier has no pointwise density");
        case BarrierKind::SquareWell:
            return (t >= (kPi - width) / 2.0 && t <= (kPi + width) / 2.0) ? 1.0 / width
                                                                          : 0.0;
        case BarrierKind::RaisedCosine:
            return (1.0 - std::cos(2.0 * t)) / kPi;
    }
    throw not_implemented_error("unhandled barrier kind");
}

CycleParams delta_barrier_closed_form(double af, double q) {
    if (q < 0.0) throw config_error("barrier strength q must be nonnegative");
    const CycleMatrix half = span_map(af, kPi / 2.0);
    const CycleMatrix kick{1.0, 0.0, -q, 1.0};
    const CycleMatrix full = half * (kick * half);
    return cycle_params_from(full.m11, full.m21);
}

CycleParams square_well_closed_form(double af, double q, double width) {
    if (q < 0.0) throw config_error("barrier strength q must be nonnegative");
    const BarrierShape shape = BarrierShape::square(width);
    const CycleMatrix outer = span_map(af, (kPi - width) / 2.0);
    const CycleMatrix inner = span_map(af + q / width, width);
    const CycleMatrix full = outer * (inner * outer);
    (void)shape;
    return cycle_params_from(full.m11, full.m21);
}

namespace {

struct Fundamental {
    // Columns of the fundamental matrix: (y1, y1') and (y2, y2').
    double y1 = 1.0, v1 = 0.0, y2 = 0.0, v2 = 1.0;
};

// One classic RK4 step of y'' = -F(t) y for both columns at once.
template <typename Force>
Fundamental rk4_step(const Fundamental& s, double t, double dt, const Force& force) {
    auto deriv = [&](double tt, const Fundamental& u) {
        const double f = force(tt);
        return Fundamental{u.v1, -f * u.y1, u.v2, -f * u.y2};
    };
    auto axpy = [](const Fundamental& u, const Fundamental& d, double a) {
        return Fundamental{u.y1 + a * d.y1, u.v1 + a * d.v1, u.y2 + a * d.y2,
                           u.v2 + a * d.v2};
    };
    const Fundamental k1 = deriv(t, s);
    const Fundamental k2 = deriv(t + dt / 2.0, axpy(s, k1, dt / 2.0));
    const Fundamental k3 = deriv(t + dt / 2.0, axpy(s, k2, dt / 2.0));
    const Fundamental k4 = deriv(t + dt, axpy(s, k3, dt));
    Fundamental out = s;
    out.y1 += dt / 6.0 * (k1.y1 + 2.0 * k2.y1 + 2.0 * k3.y1 + k4.y1);
    out.v1 += dt / 6.0 * (k1.v1 + 2.0 * k2.v1 + 2.0 * k3.v1 + k4.v1);
    out.y2 += dt / 6.0 * (k1.y2 + 2.0 * k2.y2 + 2.0 * k3.y2 + k4.y2);
    out.v2 += dt / 6.0 * (k1.v2 + 2.0 * k2.v2 + 2.0 * k3.v2 + k4.v2);
    return out;
}

// Integrate the fundamental matrix over [0, pi] with steps no larger than
// max_step, splitting at the profile's discontinuities so no RK4 step
// straddles a jump.
Fundamental integrate_period(const HillCycleParams& p, double max_step) {
    std::vector<double> edges{0.0, kPi};
    if (p.shape.kind == BarrierKind::SquareWell && p.shape.width < kPi) {
        edges.insert(edges.begin() + 1, {(kPi - p.shape.width) / 2.0,
                                         (kPi + p.shape.width) / 2.0});
    }
    auto force = [&](double t) { return p.af + p.q * p.shape.density(t); };
    Fundamental st;
    for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
        const double len = edges[e + 1] - edges[e];
        if (len <= 0.0) continue;
        const auto steps = static_cast<std::uint64_t>(std::ceil(len / max_step));
        const double dt = len / static_cast<double>(steps);
        // Sample the force strictly inside the segment so the boundary
        // values of a discontinuous profile never leak across it.
        auto clamped_force = [&](double t) {
            const double lo = edges[e] + dt * 1e-9;
            const double hi = edges[e + 1] - dt * 1e-9;
            return force(std::min(std::max(t, lo), hi));
        };
        for (std::uint64_t i = 0; i < steps; ++i) {
            const double t = edges[e] + static_cast<double>(i) * dt;
            st = rk4_step(st, t, dt, clamped_force);
        }
    }
    return st;
}

}  // namespace

CycleParams principal_solutions(const HillCycleParams& p) {
    if (p.q < 0.0) throw config_error("barrier strength q must be nonnegative");
    if (p.shape.kind == BarrierKind::DeltaAtMidpoint) {
        // Never integrated numerically; the kick map is exact.
        return delta_barrier_closed_form(p.af, p.q);
    }
    double step = kPi / 2048.0;
    Fundamental coarse = integrate_period(p, step);
    for (int attempt = 0; attempt < 7; ++attempt) {
        const Fundamental fine = integrate_period(p, step / 2.0);
        const double diff = std::max(
            std::max(std::fabs(coarse.y1 - fine.y1), std::fabs(coarse.v1 - fine.v1)),
            std::max(std::fabs(coarse.y2 - fine.y2), std::fabs(coarse.v2 - fine.v2)));
        const double wronskian = fine.y1 * fine.v2 - fine.y2 * fine.v1;
        const bool ok = std::fabs(wronskian - 1.0) <= 1e-10 &&
                        std::fabs(fine.y1 - fine.v2) <= 1e-8 && diff <= 1e-9;
        if (ok) {
            // Use the shared diagonal value so downstream identities that
            // assume h = y1(pi) = y2'(pi) hold exactly.
            const double h = 0.5 * (fine.y1 + fine.v2);
            return cycle_params_from(h, fine.v1);
        }
        step /= 2.0;
        coarse = fine;
    }
    throw integration_accuracy_error(
        "step halving exhausted without meeting the Wronskian and symmetry targets");
}

std::vector<CycleParams> cycle_stream(const DistributionSpec& af_dist,
                                      const DistributionSpec& q_dist,
                                      const BarrierShape& shape, std::uint64_t seed,
                                      std::uint64_t n_cycles) {
    std::vector<CycleParams> out;
    out.reserve(n_cycles);
    for_each_cycle(af_dist, q_dist, shape, seed, n_cycles,
                   [&](std::uint64_t, const CycleParams& c) { out.push_back(c); });
    return out;
}

CycleParams nth_cycle(const DistributionSpec& af_dist, const DistributionSpec& q_dist,
                      const BarrierShape& shape, std::uint64_t seed, std::uint64_t i) {
    const StreamHandle af_stream{af_dist, derive_seed(seed, 101), 0};
    const StreamHandle q_stream{q_dist, derive_seed(seed, 202), 0};
    const HillCycleParams p{af_stream.sample(i), q_stream.sample(i), shape};
    return principal_solutions(p);
}

void for_each_cycle(const DistributionSpec& af_dist, const DistributionSpec& q_dist,
                    const BarrierShape& shape, std::uint64_t seed,
                    std::uint64_t n_cycles,
                    const std::function<void(std::uint64_t, const CycleParams&)>& fn) {
    if (q_dist.support_min() < 0.0) {
        throw config_error("barrier strength ensemble must be nonnegative");
    }
    for (std::uint64_t i = 0; i < n_cycles; ++i) {
        fn(i, nth_cycle(af_dist, q_dist, shape, seed, i));
    }
}

bool recursion_eligible(const CycleParams& c) {
    return std::isfinite(c.x) && c.x > 0.0 && c.g != 0.0;
}

}  // namespace hillgrow
