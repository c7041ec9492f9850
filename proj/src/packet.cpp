#include "ststoa/packet.hpp"

#include "ststoa/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ststoa {

void GaussianPacketSpec::validate() const {
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!positive(delta)) {
        throw ConfigError("packet.delta", "must be a positive number");
    }
    if (!positive(m)) {
        throw ConfigError("packet.m", "must be a positive number");
    }
    if (!positive(hbar)) {
        throw ConfigError("packet.hbar", "must be a positive number");
    }
    if (!std::isfinite(x_i) || !std::isfinite(p_i)) {
        throw ConfigError("packet", "x_i and p_i must be finite");
    }
}

bool GaussianPacketSpec::left_moving_from_left() const noexcept {
    return x_i + 5.0 * delta < 0.0 && p_i - 5.0 * momentum_sigma() > 0.0;
}

SpectralAmplitude::SpectralAmplitude(Branch b, EnergyGrid g, std::vector<cplx> v, double anchor)
    : branch(b), grid(g), values(std::move(v)), anchor_x(anchor) {
    if (values.size() != grid.size()) {
        throw std::invalid_argument("SpectralAmplitude: value count does not match grid");
    }
}

double SpectralAmplitude::norm_squared() const {
    std::vector<double> mod2(values.size());
    std::transform(values.begin(), values.end(), mod2.begin(),
                   [](cplx v) { return std::norm(v); });
    return trapezoid(mod2, grid.spacing());
}

cplx psi_position(const GaussianPacketSpec& spec, double x) {
    const double d = spec.delta;
    const cplx u{(x - spec.x_i) / (2.0 * d), -spec.p_i * d / spec.hbar};
    const double pref = std::pow(2.0 * std::numbers::pi * d * d, -0.25);
    const double pd = spec.p_i * d / spec.hbar;
    return pref * std::exp(-u * u - pd * pd);
}

cplx psi_momentum(const GaussianPacketSpec& spec, double p) {
    const double d = spec.delta / spec.hbar;
    const double pref = std::pow(2.0 * spec.delta * spec.delta / std::numbers::pi, 0.25) /
                        std::sqrt(spec.hbar);
    const double dp = p - spec.p_i;
    return pref * std::exp(cplx{-d * d * dp * dp, -p * spec.x_i / spec.hbar});
}

SpectralAmplitude sc_initial_amplitude(const GaussianPacketSpec& spec, const EnergyGrid& egrid,
                                       InitialAmplitudeModel model) {
    spec.validate();
    if (model != InitialAmplitudeModel::MatchStandardQm) {
        throw ConfigError("initial_amplitude",
                          "only \"match-standard-qm\" is implemented; no operational "
                          "prescription exists for an independent SC momentum amplitude");
    }
    std::vector<cplx> values(egrid.size());
    for (std::size_t i = 0; i < egrid.size(); ++i) {
        const double e = egrid[i];
        const double p = std::sqrt(2.0 * spec.m * e);
        values[i] = std::pow(spec.m / (2.0 * e), 0.25) * psi_momentum(spec, p);
    }
    return {Branch::Plus, egrid, std::move(values), 0.0};
}

EnergyGrid default_energy_grid(const GaussianPacketSpec& spec, std::size_t n, double n_sigma) {
    spec.validate();
    const double width = n_sigma * spec.momentum_sigma();
    const double p_lo = spec.p_i - width;
    const double p_hi = spec.p_i + width;
    if (!(p_hi > 0.0)) {
        throw ConfigError("packet.p_i", "packet has no positive-momentum support");
    }
    const double e_lo = p_lo > 0.0 ? p_lo * p_lo / (2.0 * spec.m) : 0.0;
    const double e_hi = p_hi * p_hi / (2.0 * spec.m);
    return {std::max(e_lo, EnergyGrid::kFloor), e_hi, n};
}

} // namespace ststoa
