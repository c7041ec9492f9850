#include "ststoa/sc_evolution.hpp"

#include "ststoa/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace ststoa {

double TOADistribution::integral() const { return trapezoid(density, tgrid.spacing()); }

double TOADistribution::mean_arrival_time() const {
    std::vector<double> weighted(density.size());
    for (std::size_t i = 0; i < density.size(); ++i) {
        weighted[i] = tgrid[i] * density[i];
    }
    return trapezoid(weighted, tgrid.spacing());
}

double TOADistribution::peak_time() const {
    const auto it = std::max_element(density.begin(), density.end());
    return tgrid[static_cast<std::size_t>(std::distance(density.begin(), it))];
}

namespace {

double branch_sign(Branch b) { return b == Branch::Plus ? 1.0 : -1.0; }

void guard_growth(double exponent, double x_from, double x_to) {
    if (exponent > kDivergenceExponent) {
        throw DivergenceWarning("evanescent growth exponent " + std::to_string(exponent) +
                                " exceeds " + std::to_string(kDivergenceExponent) +
                                " propagating from x = " + std::to_string(x_from) +
                                " to x = " + std::to_string(x_to));
    }
}

} // namespace

SpectralAmplitude propagate_closed_form(const SpectralAmplitude& amps,
                                        const PiecewisePotential& pot, double x, double mass,
                                        double hbar) {
    const double sign = branch_sign(amps.branch);
    std::vector<cplx> out(amps.values.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const auto phase = phase_integral(pot, amps.grid[i], mass, hbar, amps.anchor_x, x);
        const cplx exponent = cplx{0.0, sign} * phase.theta;
        guard_growth(exponent.real(), amps.anchor_x, x);
        out[i] = amps.values[i] * std::exp(exponent);
    }
    return {amps.branch, amps.grid, std::move(out), x};
}

SpectralAmplitude propagate_slices(const SpectralAmplitude& amps, const PiecewisePotential& pot,
                                   double x, std::size_t n_slices, double mass, double hbar) {
    if (n_slices < 1) {
        throw ConfigError("method", "n_slices must be >= 1");
    }
    const double sign = branch_sign(amps.branch);
    const double x0 = amps.anchor_x;
    const double dx = (x - x0) / static_cast<double>(n_slices);

    // Slice midpoints visited in the direction of travel: increasing x for
    // x > x0, decreasing x for x < x0. dx carries the sign.
    std::vector<double> mids(n_slices);
    std::vector<double> vmid(n_slices);
    for (std::size_t s = 0; s < n_slices; ++s) {
        mids[s] = x0 + (static_cast<double>(s) + 0.5) * dx;
        vmid[s] = pot.value(mids[s]);
    }

    std::vector<cplx> out(amps.values.begin(), amps.values.end());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double e = amps.grid[i];
        double growth = 0.0;
        cplx value = out[i];
        for (std::size_t s = 0; s < n_slices; ++s) {
            const cplx exponent = cplx{0.0, sign} * dx * complex_sqrt_2m(e, vmid[s], mass) / hbar;
            growth += exponent.real();
            guard_growth(growth, x0, mids[s]);
            value *= std::exp(exponent);
        }
        out[i] = value;
    }
    return {amps.branch, amps.grid, std::move(out), x};
}

TOADistribution toa_density(std::span<const SpectralAmplitude> components, double x,
                            const TimeGrid& tgrid, double hbar, bool normalize,
                            FourierPath path) {
    if (components.empty()) {
        throw std::invalid_argument("toa_density: no amplitude components");
    }
    std::vector<double> density(tgrid.size(), 0.0);
    double arrival = 0.0;
    for (const auto& c : components) {
        if (std::abs(c.anchor_x - x) > 1e-12 * std::max(1.0, std::abs(x))) {
            throw std::invalid_argument("toa_density: amplitude anchored at x = " +
                                        std::to_string(c.anchor_x) + ", detector at x = " +
                                        std::to_string(x));
        }
        const auto series = fourier_E_to_t(c.values, c.grid, tgrid, hbar, path);
        for (std::size_t k = 0; k < density.size(); ++k) {
            density[k] += std::norm(series[k]);
        }
        arrival += c.norm_squared();
    }
    if (!(arrival >= kZeroArrival)) {
        throw ZeroArrival("arrival probability " + std::to_string(arrival) + " at x = " +
                          std::to_string(x) + " is below 1e-300");
    }
    if (normalize) {
        for (auto& d : density) {
            d /= arrival;
        }
    }
    return {tgrid, std::move(density), arrival, x, normalize, false};
}

TOADistribution toa_density(const SpectralAmplitude& amps, double x, const TimeGrid& tgrid,
                            double hbar, bool normalize, FourierPath path) {
    return toa_density(std::span<const SpectralAmplitude>(&amps, 1), x, tgrid, hbar, normalize,
                       path);
}

TOADistribution sts_toa(const GaussianPacketSpec& spec, const PiecewisePotential& pot, double x,
                        const TimeGrid& tgrid, const PipelineOptions& opts) {
    const EnergyGrid egrid = opts.egrid.value_or(default_energy_grid(spec));
    const auto initial = sc_initial_amplitude(spec, egrid);
    const auto at_x =
        opts.propagation.kind == Propagation::Kind::ClosedForm
            ? propagate_closed_form(initial, pot, x, spec.m, spec.hbar)
            : propagate_slices(initial, pot, x, opts.propagation.n_slices, spec.m, spec.hbar);
    auto dist = toa_density(at_x, x, tgrid, spec.hbar, opts.normalize, opts.fourier);
    dist.partial_penetration = pot.value(x) != 0.0;
    return dist;
}

TOADistribution barrier_toa(const GaussianPacketSpec& spec, double v0, double length, double x,
                            const TimeGrid& tgrid, const PipelineOptions& opts) {
    if (!(x > length)) {
        throw ConfigError("detector_x", "barrier_toa needs the detector beyond the barrier (x > L)");
    }
    return sts_toa(spec, PiecewisePotential::square_barrier(v0, length), x, tgrid, opts);
}

TOADistribution kijowski_toa(const GaussianPacketSpec& spec, double x, const TimeGrid& tgrid,
                             std::span<const cplx> momentum_factor, const PipelineOptions& opts) {
    spec.validate();
    const EnergyGrid egrid = opts.egrid.value_or(default_energy_grid(spec));
    if (!momentum_factor.empty() && momentum_factor.size() != egrid.size()) {
        throw std::invalid_argument("kijowski_toa: momentum factor does not match energy grid");
    }
    // int dP sqrt(P) f(P) e^{...} / sqrt(2 pi m hbar)
    //   = int dE (m/2E)^{1/4} f(P(E)) e^{...} / sqrt(2 pi hbar)
    std::vector<cplx> values(egrid.size());
    for (std::size_t i = 0; i < egrid.size(); ++i) {
        const double e = egrid[i];
        const double p = std::sqrt(2.0 * spec.m * e);
        cplx a = std::pow(spec.m / (2.0 * e), 0.25) * psi_momentum(spec, p);
        if (!momentum_factor.empty()) {
            a *= momentum_factor[i];
        }
        values[i] = a * std::exp(cplx{0.0, p * x / spec.hbar});
    }
    return toa_density(SpectralAmplitude{Branch::Plus, egrid, std::move(values), x}, x, tgrid,
                       spec.hbar, opts.normalize, opts.fourier);
}

TOADistribution free_kijowski(const GaussianPacketSpec& spec, double x, const TimeGrid& tgrid,
                              const PipelineOptions& opts) {
    return kijowski_toa(spec, x, tgrid, {}, opts);
}

TimeGrid default_time_grid() { return {0.0, 1000.0, 1u << 12}; }

} // namespace ststoa
