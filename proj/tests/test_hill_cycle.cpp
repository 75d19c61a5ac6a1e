#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "hillgrow/errors.hpp"
#include "hillgrow/hill_cycle.hpp"

using namespace hillgrow;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Free-oscillation values over a full period: h = cos(w pi), g = -w sin(w pi)
// for af = w^2 > 0.
void check_free_map(const CycleParams& c, double af, double tol) {
    const double w = std::sqrt(af);
    CHECK(std::fabs(c.h - std::cos(w * kPi)) <= tol);
    CHECK(std::fabs(c.g + w * std::sin(w * kPi)) <= tol);
}

}  // namespace

TEST_CASE("barrier shape text forms") {
    CHECK(BarrierShape::parse("delta").kind == BarrierKind::DeltaAtMidpoint);
    CHECK(BarrierShape::parse("cosine").kind == BarrierKind::RaisedCosine);
    const BarrierShape sq = BarrierShape::parse("square(w=0.5)");
    CHECK(sq.kind == BarrierKind::SquareWell);
    CHECK(sq.width == 0.5);
    CHECK(sq.encode() == "square(w=0.5)");
    CHECK(BarrierShape::parse("square(0.5)").width == 0.5);
    CHECK(BarrierShape::parse(" square( w = 0.5 ) ").width == 0.5);
    CHECK(BarrierShape::delta().encode() == "delta");
    CHECK(BarrierShape::cosine().encode() == "cosine");

    CHECK_THROWS_AS(BarrierShape::parse("triangle"), config_error);
    CHECK_THROWS_AS(BarrierShape::parse("square()"), config_error);
    CHECK_THROWS_AS(BarrierShape::square(0.0), config_error);
    CHECK_THROWS_AS(BarrierShape::square(-1.0), config_error);
    CHECK_THROWS_AS(BarrierShape::square(3.15), config_error);
}

TEST_CASE("pointwise profiles integrate to one") {
    // Midpoint sums: the smooth profile converges fast, the discontinuous
    // one is limited by the two cells straddling its edges.
    const int n = 200000;
    auto midpoint_mass = [n](const BarrierShape& shape) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            acc += shape.density((i + 0.5) * kPi / n);
        }
        return acc * kPi / n;
    };
    CHECK(midpoint_mass(BarrierShape::cosine()) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(midpoint_mass(BarrierShape::square(0.7)) == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(BarrierShape::cosine().density(0.0) == doctest::Approx(0.0));
    CHECK(BarrierShape::square(0.5).density(kPi / 2.0) == doctest::Approx(2.0));
    CHECK(BarrierShape::square(0.5).density(0.1) == 0.0);
    CHECK_THROWS_AS(BarrierShape::delta().density(1.0), not_implemented_error);
}

TEST_CASE("midpoint kick closed form") {
    // af = 1/4 makes the half-period map a quarter turn at frequency 1/2,
    // which collapses the kick sandwich to simple exact values.
    const CycleParams a = delta_barrier_closed_form(0.25, 2.0);
    CHECK(a.h == doctest::Approx(-2.0).epsilon(1e-13));
    CHECK(a.g == doctest::Approx(-1.5).epsilon(1e-13));
    CHECK(a.regime == Regime::Hyperbolic);

    for (double q : {1.5, 2.0, 2.5, 3.0}) {
        const CycleParams c = delta_barrier_closed_form(0.25, q);
        CHECK(c.h == doctest::Approx(-q).epsilon(1e-13));
        CHECK(c.g == doctest::Approx(-(1.0 + q) / 2.0).epsilon(1e-13));
    }

    // af = 1: the free half-period is a half turn and the kick's effect on
    // the trace cancels, leaving -identity with an upper-right -q.
    const CycleParams b = delta_barrier_closed_form(1.0, 3.0);
    CHECK(b.h == doctest::Approx(-1.0).epsilon(1e-13));
    CHECK(std::fabs(b.g) <= 1e-12);

    // af = 0: straight-line drift plus the kick.
    const CycleParams z = delta_barrier_closed_form(0.0, 0.8);
    CHECK(z.h == doctest::Approx(1.0 - 0.8 * kPi / 2.0).epsilon(1e-14));
    CHECK(z.g == doctest::Approx(-0.8).epsilon(1e-14));

    CHECK_THROWS_AS(delta_barrier_closed_form(0.25, -1.0), config_error);
}

TEST_CASE("square well closed form against numeric integration") {
    for (const auto& [af, q, w] : std::vector<std::array<double, 3>>{
             {0.7, 1.3, 0.9}, {0.25, 2.0, 0.5}, {-0.5, 3.0, 1.2}, {4.0, 0.7, 2.0}}) {
        const CycleParams exact = square_well_closed_form(af, q, w);
        const CycleParams numeric = principal_solutions({af, q, BarrierShape::square(w)});
        CHECK_MESSAGE(std::fabs(exact.h - numeric.h) <= 1e-8,
                      "h at af=" << af << " q=" << q << " w=" << w);
        CHECK_MESSAGE(std::fabs(exact.g - numeric.g) <= 1e-8,
                      "g at af=" << af << " q=" << q << " w=" << w);
    }
}

TEST_CASE("full-width well is a single constant span") {
    const CycleParams c = square_well_closed_form(0.3, 1.1, kPi);
    check_free_map(c, 0.3 + 1.1 / kPi, 1e-12);
}

TEST_CASE("zero barrier reduces to the free map") {
    for (double af : {0.01, 0.25, 1.0, 4.0, 25.0}) {
        for (const auto& shape : {BarrierShape::square(0.5), BarrierShape::cosine()}) {
            const CycleParams c = principal_solutions({af, 0.0, shape});
            check_free_map(c, af, 1e-8);
        }
        check_free_map(delta_barrier_closed_form(af, 0.0), af, 1e-13);
    }
}

TEST_CASE("negative floor levels integrate accurately") {
    const CycleParams c = principal_solutions({-0.25, 0.0, BarrierShape::cosine()});
    // Hyperbolic free map: h = cosh(0.5 pi), g = 0.5 sinh(0.5 pi).
    CHECK(c.h == doctest::Approx(std::cosh(0.5 * kPi)).epsilon(1e-9));
    CHECK(c.g == doctest::Approx(0.5 * std::sinh(0.5 * kPi)).epsilon(1e-9));
    CHECK(c.regime == Regime::Hyperbolic);
}

TEST_CASE("numeric cycles are deterministic") {
    const HillCycleParams p{0.6, 1.7, BarrierShape::cosine()};
    const CycleParams a = principal_solutions(p);
    const CycleParams b = principal_solutions(p);
    CHECK(a.h == b.h);
    CHECK(a.g == b.g);
    CHECK(std::isfinite(a.h));
}

TEST_CASE("narrow wells approach the midpoint kick linearly in width") {
    const CycleParams kick = delta_barrier_closed_form(0.25, 2.0);
    const double err2 =
        std::fabs(principal_solutions({0.25, 2.0, BarrierShape::square(1e-2)}).h - kick.h);
    const double err3 =
        std::fabs(principal_solutions({0.25, 2.0, BarrierShape::square(1e-3)}).h - kick.h);
    CHECK(err2 < 1e-2);
    CHECK(err3 < 1e-3);
    // First-order convergence: shrinking the width tenfold cuts the error
    // tenfold, not faster.
    CHECK(err2 / err3 == doctest::Approx(10.0).epsilon(0.2));
}

TEST_CASE("kick strength drives the instability monotonically") {
    // af = 0.8 keeps both closed-form terms alive, so the growth in q is
    // not just |h| = q as it would be at af = 0.25.
    double prev = 1.0;
    for (double q : {1.0, 2.0, 4.0, 8.0}) {
        const CycleParams c = delta_barrier_closed_form(0.8, q);
        CHECK(std::fabs(c.h) > prev);
        prev = std::fabs(c.h);
    }
}

TEST_CASE("cycle sequences are addressable and reproducible") {
    const DistributionSpec af = DistributionSpec::constant(0.25);
    const DistributionSpec q = DistributionSpec::uniform(1.5, 2.5);
    const auto cycles = cycle_stream(af, q, BarrierShape::delta(), 42, 100);
    REQUIRE(cycles.size() == 100);
    for (std::uint64_t i = 0; i < cycles.size(); ++i) {
        const CycleParams c = nth_cycle(af, q, BarrierShape::delta(), 42, i);
        CHECK(c.h == cycles[i].h);
        CHECK(c.g == cycles[i].g);
    }
    std::uint64_t calls = 0;
    for_each_cycle(af, q, BarrierShape::delta(), 42, 50,
                   [&](std::uint64_t i, const CycleParams& c) {
                       CHECK(i == calls);
                       CHECK(c.h == cycles[i].h);
                       ++calls;
                   });
    CHECK(calls == 50);
}

TEST_CASE("kick chains at af = 1/4 are always recursion eligible") {
    // h = -q and g = -(1+q)/2 give x = 2q/(1+q) > 0 and phi = 1 - 1/q^2.
    const auto cycles = cycle_stream(DistributionSpec::constant(0.25),
                                     DistributionSpec::uniform(1.5, 2.5),
                                     BarrierShape::delta(), 7, 200);
    for (const auto& c : cycles) {
        CHECK(recursion_eligible(c));
        CHECK(c.regime == Regime::Hyperbolic);
        CHECK(c.x == doctest::Approx(2.0 * -c.h / (1.0 - c.h)).epsilon(1e-12));
        CHECK(c.phi == doctest::Approx(1.0 - 1.0 / (c.h * c.h)).epsilon(1e-12));
    }
    CHECK_FALSE(recursion_eligible(cycle_params_from(0.5, -1.0)));  // x < 0
    CHECK_FALSE(recursion_eligible(cycle_params_from(1.0, 0.0)));   // x infinite
}

TEST_CASE("negative barrier strengths are rejected") {
    CHECK_THROWS_AS(principal_solutions({0.25, -0.5, BarrierShape::cosine()}),
                    config_error);
    CHECK_THROWS_AS(cycle_stream(DistributionSpec::constant(0.25),
                                 DistributionSpec::uniform(-1.0, 1.0),
                                 BarrierShape::delta(), 1, 10),
                    config_error);
}
