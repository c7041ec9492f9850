#include "ststoa/oracle.hpp"

#include "ststoa/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace ststoa {

TabulatedTimePotential::TabulatedTimePotential(std::vector<double> times,
                                               std::vector<double> values)
    : times_(std::move(times)), values_(std::move(values)) {
    if (times_.empty() || times_.size() != values_.size()) {
        throw ConfigError("potential.v_of_t", "need matching, non-empty time and value tables");
    }
    for (std::size_t k = 0; k < times_.size(); ++k) {
        if (!std::isfinite(times_[k]) || !std::isfinite(values_[k])) {
            throw ConfigError("potential.v_of_t", "non-finite entry at index " + std::to_string(k));
        }
        if (k > 0 && !(times_[k] > times_[k - 1])) {
            throw ConfigError("potential.v_of_t", "times must be strictly increasing");
        }
    }
    cumulative_.assign(times_.size(), 0.0);
    for (std::size_t k = 1; k < times_.size(); ++k) {
        cumulative_[k] = cumulative_[k - 1] +
                         0.5 * (times_[k] - times_[k - 1]) * (values_[k] + values_[k - 1]);
    }
}

TabulatedTimePotential TabulatedTimePotential::constant(double v) { return {{0.0}, {v}}; }

double TabulatedTimePotential::value(double t) const {
    if (t <= times_.front()) {
        return values_.front();
    }
    if (t >= times_.back()) {
        return values_.back();
    }
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    const auto k = static_cast<std::size_t>(std::distance(times_.begin(), it)) - 1;
    const double w = (t - times_[k]) / (times_[k + 1] - times_[k]);
    return (1.0 - w) * values_[k] + w * values_[k + 1];
}

double TabulatedTimePotential::primitive(double t) const {
    if (t <= times_.front()) {
        return (t - times_.front()) * values_.front();
    }
    if (t >= times_.back()) {
        return cumulative_.back() + (t - times_.back()) * values_.back();
    }
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    const auto k = static_cast<std::size_t>(std::distance(times_.begin(), it)) - 1;
    const double v = value(t);
    return cumulative_[k] + 0.5 * (t - times_[k]) * (values_[k] + v);
}

double TabulatedTimePotential::integral(double a, double b) const {
    return primitive(b) - primitive(a);
}

cplx time_potential_solution(const GaussianPacketSpec& spec, const TabulatedTimePotential& vt,
                             double x, double t, double t0, std::size_t n_p) {
    spec.validate();
    if (n_p < 2) {
        throw ConfigError("n_p", "momentum quadrature needs at least 2 samples");
    }
    const double sigma = spec.momentum_sigma();
    const double p_lo = spec.p_i - 12.0 * sigma;
    const double dp = 24.0 * sigma / static_cast<double>(n_p - 1);
    const double elapsed = t - t0;
    const double v_phase = vt.integral(t0, t);
    std::vector<cplx> integrand(n_p);
    for (std::size_t k = 0; k < n_p; ++k) {
        const double p = p_lo + static_cast<double>(k) * dp;
        const double phase = (p * x - p * p * elapsed / (2.0 * spec.m) - v_phase) / spec.hbar;
        integrand[k] = psi_momentum(spec, p) * std::polar(1.0, phase);
    }
    return trapezoid_complex(integrand, dp) / std::sqrt(2.0 * std::numbers::pi * spec.hbar);
}

} // namespace ststoa
