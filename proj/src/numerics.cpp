#include "ststoa/numerics.hpp"

#include "ststoa/errors.hpp"

#include <fftw3.h>

#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

namespace ststoa {

namespace {

void validate_uniform(double lo, double hi, std::size_t n, const char* what) {
    if (n < 2) {
        throw ConfigError(what, "grid needs at least 2 samples");
    }
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo)) {
        throw ConfigError(what, "grid bounds must be finite with max > min");
    }
}

// FFTW's planner is not thread-safe; execution on distinct plans is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwFree {
    void operator()(fftw_complex* p) const noexcept { fftw_free(p); }
};
struct PlanDestroy {
    void operator()(fftw_plan_s* p) const noexcept {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(p);
    }
};
using FftwBuffer = std::unique_ptr<fftw_complex[], FftwFree>;
using FftwPlan = std::unique_ptr<fftw_plan_s, PlanDestroy>;

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) {
        p <<= 1;
    }
    return p;
}

cplx load(const fftw_complex& c) { return {c[0], c[1]}; }
void store(fftw_complex& c, cplx v) {
    c[0] = v.real();
    c[1] = v.imag();
}

// exp(i * phase) with the phase reduced modulo 2 pi first; the chirp
// arguments reach ~1e4 rad on default grids.
cplx unit_phase(double phase) {
    const double r = std::remainder(phase, 2.0 * std::numbers::pi);
    return {std::cos(r), std::sin(r)};
}

std::vector<cplx> weighted(std::span<const cplx> values, double dx) {
    std::vector<cplx> w(values.begin(), values.end());
    for (auto& v : w) {
        v *= dx;
    }
    w.front() *= 0.5;
    w.back() *= 0.5;
    return w;
}

std::vector<cplx> direct_sum(const std::vector<cplx>& w, double x0, double dx, double y0,
                             double dy, std::size_t m, int sign, double hbar) {
    std::vector<cplx> out(m);
    const std::size_t n = w.size();
    for (std::size_t k = 0; k < m; ++k) {
        const double y = y0 + static_cast<double>(k) * dy;
        cplx acc{0.0, 0.0};
        for (std::size_t j = 0; j < n; ++j) {
            const double x = x0 + static_cast<double>(j) * dx;
            acc += w[j] * unit_phase(sign * x * y / hbar);
        }
        out[k] = acc;
    }
    return out;
}

// Bluestein: jk = (j^2 + k^2 - (k-j)^2)/2 turns the sum into a convolution
// with the chirp e^{-i alpha s^2/2}.
std::vector<cplx> chirp_sum(const std::vector<cplx>& w, double x0, double dx, double y0,
                            double dy, std::size_t m, int sign, double hbar) {
    const std::size_t n = w.size();
    const std::size_t nfft = next_pow2(n + m - 1);
    const double alpha = sign * dx * dy / hbar;

    FftwBuffer a(fftw_alloc_complex(nfft));
    FftwBuffer g(fftw_alloc_complex(nfft));
    FftwPlan fwd_a, fwd_g, inv_a;
    {
        std::lock_guard lock(planner_mutex());
        fwd_a.reset(fftw_plan_dft_1d(static_cast<int>(nfft), a.get(), a.get(), FFTW_FORWARD,
                                     FFTW_ESTIMATE));
        fwd_g.reset(fftw_plan_dft_1d(static_cast<int>(nfft), g.get(), g.get(), FFTW_FORWARD,
                                     FFTW_ESTIMATE));
        inv_a.reset(fftw_plan_dft_1d(static_cast<int>(nfft), a.get(), a.get(), FFTW_BACKWARD,
                                     FFTW_ESTIMATE));
    }

    for (std::size_t j = 0; j < nfft; ++j) {
        store(a[j], cplx{});
        store(g[j], cplx{});
    }
    for (std::size_t j = 0; j < n; ++j) {
        const double jd = static_cast<double>(j);
        const double phase = sign * jd * dx * y0 / hbar + 0.5 * alpha * jd * jd;
        store(a[j], w[j] * unit_phase(phase));
    }
    const std::size_t span = std::max(n, m);
    for (std::size_t s = 0; s < span; ++s) {
        const double sd = static_cast<double>(s);
        const cplx c = unit_phase(-0.5 * alpha * sd * sd);
        if (s < m) {
            store(g[s], c);
        }
        if (s > 0 && s < n) {
            store(g[nfft - s], c);
        }
    }

    fftw_execute(fwd_a.get());
    fftw_execute(fwd_g.get());
    for (std::size_t j = 0; j < nfft; ++j) {
        store(a[j], load(a[j]) * load(g[j]));
    }
    fftw_execute(inv_a.get());

    std::vector<cplx> out(m);
    const double scale = 1.0 / static_cast<double>(nfft);
    for (std::size_t k = 0; k < m; ++k) {
        const double kd = static_cast<double>(k);
        const double y = y0 + kd * dy;
        const double phase = sign * x0 * y / hbar + 0.5 * alpha * kd * kd;
        out[k] = load(a[k]) * scale * unit_phase(phase);
    }
    return out;
}

void check_aliasing(double de, double t_span, double hbar) {
    const double ratio = de * t_span / hbar;
    if (ratio > std::numbers::pi) {
        throw GridTooCoarse("energy spacing " + std::to_string(de) + " over a time window of " +
                            std::to_string(t_span) + " gives dE*T/hbar = " +
                            std::to_string(ratio) + " > pi; refine the energy grid");
    }
}

} // namespace

EnergyGrid::EnergyGrid(double e_min, double e_max, std::size_t n)
    : e_min_(e_min), e_max_(e_max), n_(n), step_(0.0) {
    validate_uniform(e_min, e_max, n, "energy_grid");
    if (!(e_min > 0.0)) {
        throw ConfigError("energy_grid.e_min", "must be > 0 (E = 0 is excluded)");
    }
    step_ = (e_max - e_min) / static_cast<double>(n - 1);
}

std::vector<double> EnergyGrid::samples() const {
    std::vector<double> s(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        s[i] = (*this)[i];
    }
    return s;
}

TimeGrid::TimeGrid(double t_min, double t_max, std::size_t n)
    : t_min_(t_min), t_max_(t_max), n_(n), step_(0.0) {
    validate_uniform(t_min, t_max, n, "time_grid");
    step_ = (t_max - t_min) / static_cast<double>(n - 1);
}

std::vector<double> TimeGrid::samples() const {
    std::vector<double> s(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        s[i] = (*this)[i];
    }
    return s;
}

cplx branch_sqrt(double radicand, SqrtBranch) noexcept {
    if (radicand >= 0.0) {
        return {std::sqrt(radicand), 0.0};
    }
    return {0.0, std::sqrt(-radicand)};
}

cplx complex_sqrt_2m(double energy, double potential, double mass) noexcept {
    return branch_sqrt(2.0 * mass * (energy - potential));
}

cplx trapezoid_complex(std::span<const cplx> values, double spacing) {
    if (values.size() < 2) {
        throw std::invalid_argument("trapezoid_complex: need at least 2 samples");
    }
    cplx interior{0.0, 0.0};
    for (std::size_t i = 1; i + 1 < values.size(); ++i) {
        interior += values[i];
    }
    return spacing * (interior + 0.5 * (values.front() + values.back()));
}

double trapezoid(std::span<const double> values, double spacing) {
    if (values.size() < 2) {
        throw std::invalid_argument("trapezoid: need at least 2 samples");
    }
    double interior = 0.0;
    for (std::size_t i = 1; i + 1 < values.size(); ++i) {
        interior += values[i];
    }
    return spacing * (interior + 0.5 * (values.front() + values.back()));
}

std::vector<cplx> oscillatory_sum(std::span<const cplx> values, double x0, double dx,
                                  double y0, double dy, std::size_t m, int sign, double hbar,
                                  FourierPath path) {
    if (values.size() < 2) {
        throw std::invalid_argument("oscillatory_sum: need at least 2 samples");
    }
    const auto w = weighted(values, dx);
    return path == FourierPath::Fft ? chirp_sum(w, x0, dx, y0, dy, m, sign, hbar)
                                    : direct_sum(w, x0, dx, y0, dy, m, sign, hbar);
}

std::vector<cplx> fourier_E_to_t(std::span<const cplx> amps, const EnergyGrid& egrid,
                                 const TimeGrid& tgrid, double hbar, FourierPath path) {
    if (amps.size() != egrid.size()) {
        throw std::invalid_argument("fourier_E_to_t: amplitude count does not match energy grid");
    }
    check_aliasing(egrid.spacing(), tgrid.t_max() - tgrid.t_min(), hbar);
    auto out = oscillatory_sum(amps, egrid.e_min(), egrid.spacing(), tgrid.t_min(),
                               tgrid.spacing(), tgrid.size(), -1, hbar, path);
    const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi * hbar);
    for (auto& v : out) {
        v *= norm;
    }
    return out;
}

std::vector<cplx> fourier_t_to_E(std::span<const cplx> series, const TimeGrid& tgrid,
                                 const EnergyGrid& egrid, double hbar, FourierPath path) {
    if (series.size() != tgrid.size()) {
        throw std::invalid_argument("fourier_t_to_E: series length does not match time grid");
    }
    check_aliasing(egrid.spacing(), tgrid.t_max() - tgrid.t_min(), hbar);
    auto out = oscillatory_sum(series, tgrid.t_min(), tgrid.spacing(), egrid.e_min(),
                               egrid.spacing(), egrid.size(), +1, hbar, path);
    const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi * hbar);
    for (auto& v : out) {
        v *= norm;
    }
    return out;
}

} // namespace ststoa
