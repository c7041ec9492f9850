#include "ststoa/errors.hpp"
#include "ststoa/potential.hpp"

#include <doctest.h>

#include <cmath>

using namespace ststoa;

TEST_CASE("phase integral across free and forbidden segments") {
    const PiecewisePotential free;
    const auto f = phase_integral(free, 2.0, 1.0, 1.0, 0.0, 50.0);
    CHECK(f.theta == cplx{100.0, 0.0});

    const auto barrier = PiecewisePotential::square_barrier(4.5, 10.0);
    const auto inside = phase_integral(barrier, 2.0, 1.0, 1.0, 0.0, 10.0);
    CHECK(inside.theta.real() == 0.0);
    CHECK(inside.theta.imag() == doctest::Approx(10.0 * std::sqrt(5.0)).epsilon(1e-15));
    CHECK(inside.evanescent_decay == inside.theta.imag());

    const auto through = phase_integral(barrier, 2.0, 1.0, 1.0, 0.0, 50.0);
    CHECK(through.theta.real() == doctest::Approx(80.0).epsilon(1e-15));
    CHECK(through.theta.imag() == doctest::Approx(10.0 * std::sqrt(5.0)).epsilon(1e-15));
    CHECK(through.real_part == through.theta.real());
}

TEST_CASE("phase integral is additive and antisymmetric") {
    const PiecewisePotential pot({{-3.0, -1.0, 0.7}, {0.0, 10.0, 4.5}, {12.5, 13.0, -2.0}});
    const double xs[] = {-7.0, -2.0, 0.0, 4.25, 11.0, 12.75, 20.0};
    for (const double e : {0.3, 2.0, 5.0}) {
        for (const double a : xs) {
            for (const double b : xs) {
                const cplx ab = phase_integral(pot, e, 1.3, 0.8, a, b).theta;
                const cplx ba = phase_integral(pot, e, 1.3, 0.8, b, a).theta;
                CHECK(ab == -ba);
                for (const double c : xs) {
                    const cplx bc = phase_integral(pot, e, 1.3, 0.8, b, c).theta;
                    const cplx ac = phase_integral(pot, e, 1.3, 0.8, a, c).theta;
                    CHECK(std::abs(ab + bc - ac) <= 1e-12 * (1.0 + std::abs(ac)));
                }
            }
        }
    }
}

TEST_CASE("evanescent decay grows with barrier length") {
    double previous = 0.0;
    for (double len = 0.5; len <= 20.0; len += 0.5) {
        const auto r = phase_integral(PiecewisePotential::square_barrier(4.5, len), 2.0, 1.0, 1.0,
                                      0.0, 30.0);
        CHECK(r.evanescent_decay >= previous);
        previous = r.evanescent_decay;
    }
}

TEST_CASE("local momenta") {
    const auto barrier = PiecewisePotential::square_barrier(4.5, 10.0);
    const auto out = local_momentum(barrier, 2.0, 1.0, 30.0);
    CHECK(out.plus == cplx{2.0, 0.0});
    CHECK(out.minus == cplx{-2.0, 0.0});
    const auto in = local_momentum(barrier, 2.0, 1.0, 5.0);
    CHECK(in.plus.imag() == doctest::Approx(std::sqrt(5.0)).epsilon(1e-15));
    CHECK(in.minus.imag() == doctest::Approx(-std::sqrt(5.0)).epsilon(1e-15));
    const auto turning = local_momentum(barrier, 4.5, 1.0, 5.0);
    CHECK(std::abs(turning.plus) == 0.0);
    CHECK(std::abs(turning.minus) == 0.0);
    CHECK_THROWS_AS(local_momentum(barrier, 2.0, 1.0, 0.0), BoundaryAmbiguity);
    CHECK_THROWS_AS(local_momentum(barrier, 2.0, 1.0, 10.0), BoundaryAmbiguity);
}

TEST_CASE("piecewise potential construction and edge convention") {
    const auto barrier = PiecewisePotential::square_barrier(4.5, 10.0);
    REQUIRE(barrier.segments().size() == 1);
    CHECK(barrier.segments()[0] == Segment{0.0, 10.0, 4.5});
    CHECK(barrier.value(0.0) == 4.5);
    CHECK(barrier.value(10.0) == 0.0);
    CHECK(barrier.value(-1e-12) == 0.0);
    CHECK(barrier.right_end() == 10.0);
    CHECK(barrier.edges() == std::vector<double>{0.0, 10.0});

    const PiecewisePotential touching({{0.0, 1.0, 1.0}, {1.0, 2.0, 2.0}});
    CHECK(touching.edges() == std::vector<double>{0.0, 1.0, 2.0});
    CHECK(touching.value(1.0) == 2.0);

    CHECK_THROWS_AS(PiecewisePotential({{0.0, 2.0, 1.0}, {1.0, 3.0, 1.0}}), ConfigError);
    CHECK_THROWS_AS(PiecewisePotential({{2.0, 1.0, 1.0}}), ConfigError);
    CHECK_THROWS_AS(PiecewisePotential({{1.0, 2.0, 1.0}, {0.0, 0.5, 1.0}}), ConfigError);
    CHECK_THROWS_AS(PiecewisePotential({{0.0, 1.0, std::nan("")}}), ConfigError);
}
