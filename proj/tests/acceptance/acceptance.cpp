// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "ststoa/kijowski.hpp"
#include "ststoa/oracle.hpp"
#include "ststoa/sc_evolution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace ststoa;

namespace {

const GaussianPacketSpec kSpec = GaussianPacketSpec::fig2();
constexpr double kLength = 10.0;
constexpr double kDetector = 50.0;
const std::vector<double> kSweep = {0.0, 1.125, 1.8, 4.5};

struct Outcome {
    bool pass;
    std::string detail;
};

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

std::string fix(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        d = std::max(d, std::abs(a[i] - b[i]));
    }
    return d;
}

double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        d = std::max(d, std::abs(a[i] - b[i]));
    }
    return d;
}

TOADistribution sts(double v0, const PipelineOptions& opts = {}) {
    return barrier_toa(kSpec, v0, kLength, kDetector, default_time_grid(), opts);
}

TOADistribution kij(double v0) {
    return transmitted_kijowski(kSpec, v0, kLength, kDetector, default_time_grid());
}

Outcome model_identity() {
    const auto s = sts(0.0);
    const auto k = kij(0.0);
    const auto f = free_kijowski(kSpec, kDetector, default_time_grid());
    const double sk = max_abs_diff(s.density, k.density);
    const double sf = max_abs_diff(s.density, f.density);
    const double kf = max_abs_diff(k.density, f.density);
    return {std::max({sk, sf, kf}) < 1e-8,
            "sts-kij " + sci(sk) + ", sts-free " + sci(sf) + ", kij-free " + sci(kf)};
}

Outcome free_peak() {
    const double t = free_kijowski(kSpec, kDetector, default_time_grid()).peak_time();
    return {t >= 48.0 && t <= 52.0, "peak at t = " + fix(t)};
}

Outcome ordering() {
    std::vector<double> ms, mk;
    for (const double v0 : kSweep) {
        ms.push_back(sts(v0).mean_arrival_time());
        mk.push_back(kij(v0).mean_arrival_time());
    }
    bool ok = true;
    for (const auto* m : {&ms, &mk}) {
        const auto& v = *m;
        ok = ok && v[1] > v[0] + 0.5 && v[2] > v[0] + 0.5 && v[3] < v[0] - 0.5;
    }
    std::ostringstream s;
    s << "means sts/kij:";
    for (std::size_t i = 0; i < kSweep.size(); ++i) {
        s << " V0=" << kSweep[i] << " " << fix(ms[i]) << "/" << fix(mk[i]);
    }
    return {ok, s.str()};
}

Outcome high_barrier() {
    const double d45 = model_distance(sts(4.5), kij(4.5));
    const double d20 = model_distance(sts(20.0), kij(20.0));
    return {d20 < d45 && d20 < 0.05, "d(20) " + sci(d20) + ", d(4.5) " + sci(d45)};
}

Outcome divergence() {
    const double d0 = model_distance(sts(0.0), kij(0.0));
    bool ok = true;
    std::string detail = "d(0) " + sci(d0);
    for (const double v0 : {1.125, 1.8, 4.5}) {
        const double d = model_distance(sts(v0), kij(v0));
        ok = ok && d > 10.0 * d0;
        detail += ", d(" + fix(v0) + ") " + sci(d);
    }
    return {ok, detail};
}

Outcome transmission_oracle() {
    double dt = 0.0;
    double du = 0.0;
    for (const double v0 : {1.125, 1.8, 4.5, 20.0}) {
        for (int k = 0; k < 512; ++k) {
            const double p = 0.05 + 4.0 * k / 511.0;
            const auto tm = transfer_matrix_T(p, v0, kLength, kSpec.m, kSpec.hbar);
            dt = std::max(dt, std::abs(tm.t - transmission_amplitude(p, v0, kLength, kSpec.m, kSpec.hbar)));
            du = std::max(du, std::abs(std::norm(tm.t) + std::norm(tm.r) - 1.0));
        }
    }
    return {dt < 1e-10 && du < 1e-12, "max|dT| " + sci(dt) + ", max| |T|^2+|R|^2-1 | " + sci(du)};
}

Outcome arrival_is_transmission() {
    const std::vector<double> heights = {1.125, 1.8, 4.5};
    std::vector<double> cn(heights.size());
    {
        std::vector<std::jthread> pool;
        for (std::size_t i = 0; i < heights.size(); ++i) {
            pool.emplace_back([&, i] {
                cn[i] = measure_transmission(kSpec, PiecewisePotential::square_barrier(heights[i], kLength),
                                             GridSolverConfig::fig2(), 100.0)
                            .transmitted;
            });
        }
    }
    bool ok = true;
    std::string detail;
    for (std::size_t i = 0; i < heights.size(); ++i) {
        const double k = kij(heights[i]).arrival_probability;
        ok = ok && std::abs(k - cn[i]) < 1e-3;
        detail += (i ? ", " : "") + std::string("V0=") + fix(heights[i]) + " kij " + fix(k) + " cn " +
                  fix(cn[i]) + " diff " + sci(std::abs(k - cn[i]));
    }
    return {ok, detail};
}

Outcome propagator_equivalence() {
    PipelineOptions sliced;
    // Slices of width L/2 put both barrier edges on slice boundaries.
    sliced.propagation = Propagation::slices(static_cast<std::size_t>(2.0 * kDetector / kLength));
    double d = 0.0;
    for (const double v0 : kSweep) {
        d = std::max(d, max_abs_diff(sts(v0).density, sts(v0, sliced).density));
    }
    return {d < 1e-10, "max-abs " + sci(d)};
}

Outcome normalization() {
    bool ok = true;
    double worst = 0.0;
    double lowest = 0.0;
    double pmax = 0.0;
    auto check = [&](const TOADistribution& d) {
        const double mn = *std::min_element(d.density.begin(), d.density.end());
        lowest = std::min(lowest, mn);
        worst = std::max(worst, std::abs(d.integral() - 1.0));
        pmax = std::max(pmax, d.arrival_probability);
        ok = ok && mn >= 0.0 && d.arrival_probability >= 0.0 && d.arrival_probability <= 1.0 + 1e-6;
    };
    check(free_kijowski(kSpec, kDetector, default_time_grid()));
    for (const double v0 : {0.0, 1.125, 1.8, 4.5, 20.0}) {
        check(sts(v0));
        check(kij(v0));
    }
    return {ok && worst < 1e-4, "max|integral-1| " + sci(worst) + ", min density " + sci(lowest) +
                                    ", max arrival probability " + fix(pmax)};
}

Outcome fourier_layer() {
    const EnergyGrid eg(0.5, 4.5, 4096);
    const TimeGrid tg(-100.0, 100.0, 2048);
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    // Random smooth a(E): a few random Gaussians with random phases.
    std::vector<cplx> a(eg.size(), cplx{0.0, 0.0});
    for (int g = 0; g < 6; ++g) {
        const double c = 2.5 + 1.2 * u(rng);
        const double w = 0.15 + 0.05 * u(rng);
        const cplx amp{u(rng), u(rng)};
        const double tau = 30.0 * u(rng);
        for (std::size_t i = 0; i < eg.size(); ++i) {
            const double e = eg[i];
            a[i] += amp * std::exp(-0.5 * (e - c) * (e - c) / (w * w)) * std::polar(1.0, e * tau);
        }
    }
    const auto fft = fourier_E_to_t(a, eg, tg, 1.0, FourierPath::Fft);
    const auto direct = fourier_E_to_t(a, eg, tg, 1.0, FourierPath::Direct);
    const double d_fd = max_abs_diff(fft, direct);

    const std::size_t s = 37;
    const double t0 = static_cast<double>(s) * tg.spacing();
    std::vector<cplx> shifted_in(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        shifted_in[i] = a[i] * std::polar(1.0, eg[i] * t0);
    }
    const auto shifted = fourier_E_to_t(shifted_in, eg, tg, 1.0, FourierPath::Fft);
    double d_shift = 0.0;
    double scale = 0.0;
    for (std::size_t k = 0; k + s < tg.size(); ++k) {
        d_shift = std::max(d_shift, std::abs(shifted[k + s] - fft[k]));
        scale = std::max(scale, std::abs(fft[k]));
    }
    d_shift /= scale;

    std::vector<double> pa(a.size()), pt(fft.size());
    std::transform(a.begin(), a.end(), pa.begin(), [](cplx v) { return std::norm(v); });
    std::transform(fft.begin(), fft.end(), pt.begin(), [](cplx v) { return std::norm(v); });
    const double ea = trapezoid(pa, eg.spacing());
    const double et = trapezoid(pt, tg.spacing());
    const double d_planch = std::abs(ea - et) / ea;

    return {d_fd < 1e-8 && d_shift < 1e-12 && d_planch < 1e-6,
            "fft-direct " + sci(d_fd) + ", shift " + sci(d_shift) + ", Plancherel " + sci(d_planch)};
}

Outcome time_dependent_potential() {
    const auto zero = TabulatedTimePotential::constant(0.0);
    const auto constant = TabulatedTimePotential::constant(0.9);
    double d_const = 0.0;
    for (const double x : {-80.0, -55.0, -47.5, -20.0}) {
        for (const double t : {0.0, 3.0, 12.0}) {
            d_const = std::max(d_const, std::abs(std::norm(time_potential_solution(kSpec, constant, x, t)) -
                                                 std::norm(time_potential_solution(kSpec, zero, x, t))));
        }
    }

    const TabulatedTimePotential ramp({0.0, 2.0, 5.0, 8.0, 10.0}, {0.0, 0.5, 0.2, 0.8, 0.3});
    GridSolverConfig cfg;
    cfg.x_min = -140.0;
    cfg.x_max = 40.0;
    cfg.n_x = 3601;
    cfg.dt = 5e-4;
    cfg.t_final = 10.0;
    cfg.absorber_width = 0.0;
    CrankNicolsonSolver s(kSpec, {}, cfg, ramp);
    s.advance_to(cfg.t_final);
    double d_ramp = 0.0;
    for (std::size_t j = 0; j < s.x().size(); j += 10) {
        d_ramp = std::max(d_ramp, std::abs(s.psi()[j] - time_potential_solution(kSpec, ramp, s.x()[j], s.time())));
    }
    return {d_const < 1e-12 && d_ramp < 1e-5,
            "constant V " + sci(d_const) + ", ramp vs Crank-Nicolson " + sci(d_ramp)};
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"1  V0 = 0 model identity", model_identity},
        {"2  free classical peak in [48, 52]", free_peak},
        {"3  delay at 1.125 and 1.8, advancement at 4.5", ordering},
        {"4  models converge at V0 = 20", high_barrier},
        {"5  models differ at moderate barriers", divergence},
        {"6  closed-form T(P) vs transfer matrix", transmission_oracle},
        {"7  arrival probability = Crank-Nicolson transmitted norm", arrival_is_transmission},
        {"8  aligned slices vs closed form", propagator_equivalence},
        {"9  normalization and positivity", normalization},
        {"10 Fourier layer", fourier_layer},
        {"11 time-dependent uniform potential", time_dependent_potential},
    };
    int failures = 0;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        std::cout << (o.pass ? "PASS " : "FAIL ") << name << "  (" << o.detail << ")" << std::endl;
        failures += o.pass ? 0 : 1;
    }
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
              << std::endl;
    return failures == 0 ? 0 : 1;
}
