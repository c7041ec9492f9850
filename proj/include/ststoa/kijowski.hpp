#pragma once

#include "ststoa/numerics.hpp"
#include "ststoa/packet.hpp"
#include "ststoa/sc_evolution.hpp"

#include <vector>

namespace ststoa {

/// Square-barrier transmission amplitude
///   T(P) = 4 P P' e^{-i(P-P')L/hbar} / [(P+P')^2 - e^{2iP'L/hbar}(P-P')^2],
/// P' = sqrt(P^2 - 2 m V0) on the upper-half-plane branch. Evaluated with P'
/// divided out of numerator and denominator, so P' = 0 (P^2 = 2 m V0) is
/// regular. Requires P > 0.
cplx transmission_amplitude(double p, double v0, double length, double mass, double hbar);

/// T(P) tabulated at P = sqrt(2 m E) over an energy grid.
struct TransmissionAmplitude {
    std::vector<double> pgrid;
    std::vector<cplx> values;
    double v0;
    double length;
    double mass;
    double hbar;

    static TransmissionAmplitude on_energy_grid(const EnergyGrid& egrid, double v0,
                                                double length, double mass, double hbar);
};

/// Normalised Kijowski distribution of the transmitted packet T(P) psi~(P).
/// arrival_probability = int |T psi~|^2 dP, the transmission probability.
TOADistribution transmitted_kijowski(const GaussianPacketSpec& spec, double v0, double length,
                                     double x, const TimeGrid& tgrid,
                                     const PipelineOptions& opts = {});

/// Trapezoid L1 distance between two densities on the same time grid.
/// Throws GridMismatch otherwise.
double model_distance(const TOADistribution& a, const TOADistribution& b);

} // namespace ststoa
