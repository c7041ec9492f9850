#include "ststoa/kijowski.hpp"

#include "ststoa/errors.hpp"

#include <cmath>
#include <string>

namespace ststoa {

namespace {

// (e^{2i theta} - 1) / (2i theta), series near 0.
cplx phase_ratio(cplx theta) {
    const cplx i{0.0, 1.0};
    if (std::abs(theta) < 1e-3) {
        const cplx z = 2.0 * i * theta;
        return 1.0 + z / 2.0 + z * z / 6.0 + z * z * z / 24.0 + z * z * z * z / 120.0;
    }
    return (std::exp(2.0 * i * theta) - 1.0) / (2.0 * i * theta);
}

} // namespace

cplx transmission_amplitude(double p, double v0, double length, double mass, double hbar) {
    if (!(p > 0.0)) {
        throw std::invalid_argument("transmission_amplitude: P must be > 0");
    }
    const cplx i{0.0, 1.0};
    const cplx pp = branch_sqrt(p * p - 2.0 * mass * v0);
    // Numerator and denominator divided by P', using
    // (P+P')^2 - (P-P')^2 = 4PP' and e^{2i theta} - 1 = 2i theta f(theta).
    const cplx theta = pp * length / hbar;
    const cplx num = 4.0 * p * std::exp(-i * (p - pp) * length / hbar);
    const cplx den = 4.0 * p - 2.0 * i * (length / hbar) * phase_ratio(theta) * (p - pp) * (p - pp);
    if (std::abs(den) <= 1e-30) {
        throw NumericalError("transmission_amplitude: vanishing denominator at P = " +
                             std::to_string(p));
    }
    return num / den;
}

TransmissionAmplitude TransmissionAmplitude::on_energy_grid(const EnergyGrid& egrid, double v0,
                                                            double length, double mass,
                                                            double hbar) {
    TransmissionAmplitude t{{}, {}, v0, length, mass, hbar};
    t.pgrid.resize(egrid.size());
    t.values.resize(egrid.size());
    for (std::size_t i = 0; i < egrid.size(); ++i) {
        t.pgrid[i] = std::sqrt(2.0 * mass * egrid[i]);
        t.values[i] = transmission_amplitude(t.pgrid[i], v0, length, mass, hbar);
    }
    return t;
}

TOADistribution transmitted_kijowski(const GaussianPacketSpec& spec, double v0, double length,
                                     double x, const TimeGrid& tgrid,
                                     const PipelineOptions& opts) {
    if (!(x > length)) {
        throw ConfigError("detector_x",
                          "transmitted Kijowski needs the detector beyond the barrier (x > L)");
    }
    PipelineOptions resolved = opts;
    if (!resolved.egrid) {
        resolved.egrid = default_energy_grid(spec);
    }
    const auto t = TransmissionAmplitude::on_energy_grid(*resolved.egrid, v0, length, spec.m,
                                                         spec.hbar);
    return kijowski_toa(spec, x, tgrid, t.values, resolved);
}

double model_distance(const TOADistribution& a, const TOADistribution& b) {
    if (!(a.tgrid == b.tgrid) || a.density.size() != b.density.size()) {
        throw GridMismatch("model_distance: distributions are sampled on different time grids");
    }
    std::vector<double> diff(a.density.size());
    for (std::size_t i = 0; i < diff.size(); ++i) {
        diff[i] = std::abs(a.density[i] - b.density[i]);
    }
    return trapezoid(diff, a.tgrid.spacing());
}

} // namespace ststoa
