#include "ststoa/errors.hpp"
#include "ststoa/numerics.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace ststoa;

namespace {

double max_abs(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

// Sum of a few Gaussian bumps with random centres, widths and phases,
// all well inside [e_lo, e_hi].
std::vector<cplx> smooth_random(const EnergyGrid& g, unsigned seed) {
    std::mt19937 rng(seed);
    const double span = g.e_max() - g.e_min();
    std::uniform_real_distribution<double> centre(g.e_min() + 0.3 * span, g.e_max() - 0.3 * span);
    std::uniform_real_distribution<double> width(0.03 * span, 0.06 * span);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    std::uniform_real_distribution<double> slope(-5.0, 5.0);
    std::vector<cplx> a(g.size(), 0.0);
    for (int b = 0; b < 4; ++b) {
        const double c = centre(rng), w = width(rng), ph = phase(rng), s = slope(rng);
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double u = (g[i] - c) / w;
            a[i] += std::exp(-0.5 * u * u) * std::polar(1.0, ph + s * (g[i] - c));
        }
    }
    return a;
}

std::vector<cplx> gaussian(const EnergyGrid& g, double e0, double s) {
    std::vector<cplx> a(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double u = (g[i] - e0) / s;
        a[i] = std::exp(-0.5 * u * u);
    }
    return a;
}

} // namespace

TEST_CASE("complex_sqrt_2m follows the upper-half-plane branch") {
    CHECK(complex_sqrt_2m(2.0, 0.0, 1.0) == cplx{2.0, 0.0});
    const cplx evanescent = complex_sqrt_2m(2.0, 4.5, 1.0);
    CHECK(evanescent.real() == 0.0);
    CHECK(evanescent.imag() == doctest::Approx(std::sqrt(5.0)).epsilon(1e-15));
    CHECK(complex_sqrt_2m(3.7, 3.7, 2.5) == cplx{0.0, 0.0});

    std::mt19937 rng(7);
    std::uniform_real_distribution<double> ev(-10.0, 10.0);
    std::uniform_real_distribution<double> mass(0.1, 10.0);
    for (int k = 0; k < 2000; ++k) {
        const double e = ev(rng), v = ev(rng), m = mass(rng);
        const cplx s = complex_sqrt_2m(e, v, m);
        const double target = 2.0 * m * (e - v);
        CHECK(s.imag() >= 0.0);
        CHECK(std::abs(s * s - target) <= 1e-12 * std::abs(target));
    }
}

TEST_CASE("grids are uniform, exclude E = 0 and hit their end points") {
    const EnergyGrid g(0.125, 6.125, 1u << 14);
    CHECK(g[0] == 0.125);
    CHECK(g[g.size() - 1] == 6.125);
    for (std::size_t i = 1; i < g.size(); ++i) {
        CHECK(g[i] - g[i - 1] == doctest::Approx(g.spacing()).epsilon(1e-9));
    }
    CHECK_THROWS_AS(EnergyGrid(0.0, 1.0, 16), ConfigError);
    CHECK_THROWS_AS(EnergyGrid(-1.0, 1.0, 16), ConfigError);
    CHECK_THROWS_AS(EnergyGrid(1.0, 1.0, 16), ConfigError);
    CHECK_THROWS_AS(TimeGrid(0.0, 1.0, 1), ConfigError);
    CHECK(TimeGrid(0.0, 150.0, 4096).samples().back() == 150.0);
}

TEST_CASE("trapezoid rules") {
    for (const std::size_t n : {2u, 3u, 17u, 1000u}) {
        const std::vector<double> ones(n, 1.0);
        CHECK(trapezoid(ones, 1.0 / static_cast<double>(n - 1)) == doctest::Approx(1.0).epsilon(1e-14));
        std::vector<double> line(n);
        for (std::size_t i = 0; i < n; ++i) {
            line[i] = static_cast<double>(i) / static_cast<double>(n - 1);
        }
        CHECK(trapezoid(line, 1.0 / static_cast<double>(n - 1)) == doctest::Approx(0.5).epsilon(1e-14));
    }
    const std::size_t n = 10000;
    const double h = 2.0 * std::numbers::pi / static_cast<double>(n - 1);
    std::vector<cplx> osc(n);
    for (std::size_t i = 0; i < n; ++i) {
        osc[i] = std::polar(1.0, static_cast<double>(i) * h);
    }
    CHECK(std::abs(trapezoid_complex(osc, h)) < 1e-6);
    CHECK_THROWS_AS(trapezoid(std::vector<double>{1.0}, 1.0), std::invalid_argument);
}

TEST_CASE("chirp-z transform matches direct quadrature") {
    const EnergyGrid g(0.5, 4.5, 4096);
    const TimeGrid t(0.0, 150.0, 4096);
    for (const unsigned seed : {1u, 2u, 3u}) {
        const auto a = smooth_random(g, seed);
        const auto fft = fourier_E_to_t(a, g, t, 1.0, FourierPath::Fft);
        const auto direct = fourier_E_to_t(a, g, t, 1.0, FourierPath::Direct);
        CHECK(max_abs(fft, direct) < 1e-8);
    }
    // Output and input lengths need not match.
    const TimeGrid t_short(-20.0, 30.0, 777);
    const auto a = smooth_random(g, 4);
    CHECK(max_abs(fourier_E_to_t(a, g, t_short, 0.7, FourierPath::Fft),
                  fourier_E_to_t(a, g, t_short, 0.7, FourierPath::Direct)) < 1e-8);
}

TEST_CASE("forward then inverse transform recovers the amplitude") {
    const EnergyGrid g(1.0, 3.0, 1024);
    const TimeGrid t(-150.0, 150.0, 2048);
    const auto a = gaussian(g, 2.0, 0.1);
    const auto f = fourier_E_to_t(a, g, t);
    const auto back = fourier_t_to_E(f, t, g);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += std::norm(back[i] - a[i]);
        den += std::norm(a[i]);
    }
    CHECK(std::sqrt(num / den) < 1e-10);
}

TEST_CASE("Plancherel identity") {
    for (const double hbar : {1.0, 0.5}) {
        const EnergyGrid g(1.0, 3.0, 1024);
        const TimeGrid t(-150.0 * hbar, 150.0 * hbar, 2048);
        const auto a = gaussian(g, 2.0, 0.1);
        const auto f = fourier_E_to_t(a, g, t, hbar);
        std::vector<double> ae(a.size()), ft(f.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            ae[i] = std::norm(a[i]);
        }
        for (std::size_t i = 0; i < f.size(); ++i) {
            ft[i] = std::norm(f[i]);
        }
        const double lhs = trapezoid(ae, g.spacing());
        const double rhs = trapezoid(ft, t.spacing());
        CHECK(std::abs(lhs - rhs) < 1e-6 * lhs);
    }
}

TEST_CASE("energy phase e^{iEt0} shifts the time series by t0 on the grid") {
    const EnergyGrid g(0.5, 4.5, 4096);
    const TimeGrid t(0.0, 150.0, 4096);
    const auto a = smooth_random(g, 11);
    const std::size_t k = 300;
    const double t0 = static_cast<double>(k) * t.spacing();
    std::vector<cplx> shifted(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        shifted[i] = a[i] * std::polar(1.0, g[i] * t0);
    }
    const auto f = fourier_E_to_t(a, g, t);
    const auto fs = fourier_E_to_t(shifted, g, t);
    double d = 0.0;
    for (std::size_t i = k; i < t.size(); ++i) {
        d = std::max(d, std::abs(fs[i] - f[i - k]));
    }
    CHECK(d < 1e-12);
}

TEST_CASE("transform is linear") {
    const EnergyGrid g(0.5, 4.5, 2048);
    const TimeGrid t(0.0, 150.0, 1024);
    const auto a = smooth_random(g, 21);
    const auto b = smooth_random(g, 22);
    std::vector<cplx> sum(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        sum[i] = a[i] + b[i];
    }
    const auto fa = fourier_E_to_t(a, g, t);
    const auto fb = fourier_E_to_t(b, g, t);
    const auto fsum = fourier_E_to_t(sum, g, t);
    double d = 0.0;
    for (std::size_t i = 0; i < fsum.size(); ++i) {
        d = std::max(d, std::abs(fsum[i] - fa[i] - fb[i]));
    }
    CHECK(d < 1e-12);
}

TEST_CASE("coarse energy grid over a long window is rejected") {
    const EnergyGrid g(0.5, 4.5, 64);  // dE ~ 0.063
    const TimeGrid t(0.0, 150.0, 256);  // dE * T ~ 9.5 > pi
    const std::vector<cplx> a(g.size(), 1.0);
    CHECK_THROWS_AS(fourier_E_to_t(a, g, t), GridTooCoarse);
    CHECK_THROWS_AS(fourier_E_to_t(a, g, t, 1.0, FourierPath::Direct), GridTooCoarse);
}
