#pragma once

#include "ststoa/numerics.hpp"
#include "ststoa/packet.hpp"
#include "ststoa/potential.hpp"

#include <optional>
#include <span>
#include <vector>

namespace ststoa {

/// Arrival-time density at a detector position.
struct TOADistribution {
    TimeGrid tgrid;
    std::vector<double> density;
    /// <phi(x)|phi(x)>, always reported before normalisation.
    double arrival_probability = 0.0;
    double detector_x = 0.0;
    bool normalized = false;
    /// Detector sits inside a potential segment (0 < x < L for a barrier).
    bool partial_penetration = false;

    /// Trapezoid integral of the density over the grid.
    double integral() const;
    /// Trapezoid integral of t * density over the configured window.
    double mean_arrival_time() const;
    double peak_time() const;
};

/// Growth exponent above which propagation is refused.
inline constexpr double kDivergenceExponent = 700.0;
/// Arrival probability below which the density is undefined.
inline constexpr double kZeroArrival = 1e-300;

/// Multiplies each sample by exp(+/- i theta(E; anchor -> x)); Plus takes +.
/// Throws DivergenceWarning when any |factor| would exceed e^700.
SpectralAmplitude propagate_closed_form(const SpectralAmplitude& amps,
                                        const PiecewisePotential& pot, double x, double mass,
                                        double hbar);

/// Space-ordered product of n_slices midpoint multipliers, applied in
/// increasing x for x > anchor and decreasing x otherwise. Equal to the
/// closed form when every segment edge falls on a slice boundary.
SpectralAmplitude propagate_slices(const SpectralAmplitude& amps, const PiecewisePotential& pot,
                                   double x, std::size_t n_slices, double mass, double hbar);

/// Sum over branches of |F[phi-bar](t)|^2, optionally divided by the arrival
/// probability integral(|phi-bar|^2 dE). Every component must be anchored at x.
TOADistribution toa_density(std::span<const SpectralAmplitude> components, double x,
                            const TimeGrid& tgrid, double hbar, bool normalize = true,
                            FourierPath path = FourierPath::Fft);
TOADistribution toa_density(const SpectralAmplitude& amps, double x, const TimeGrid& tgrid,
                            double hbar, bool normalize = true,
                            FourierPath path = FourierPath::Fft);

/// How to carry the amplitude from the anchor to the detector.
struct Propagation {
    enum class Kind { ClosedForm, Slices };
    Kind kind = Kind::ClosedForm;
    std::size_t n_slices = 1;

    static Propagation closed_form() { return {}; }
    static Propagation slices(std::size_t n) { return {Kind::Slices, n}; }

    bool operator==(const Propagation&) const = default;
};

struct PipelineOptions {
    /// Defaults to default_energy_grid(spec).
    std::optional<EnergyGrid> egrid;
    Propagation propagation;
    FourierPath fourier = FourierPath::Fft;
    bool normalize = true;
};

/// sc_initial_amplitude -> propagate (closed form or slices) -> toa_density.
TOADistribution sts_toa(const GaussianPacketSpec& spec, const PiecewisePotential& pot, double x,
                        const TimeGrid& tgrid, const PipelineOptions& opts = {});

/// sts_toa for the square barrier (0, L, V0). Requires x > L.
TOADistribution barrier_toa(const GaussianPacketSpec& spec, double v0, double length, double x,
                            const TimeGrid& tgrid, const PipelineOptions& opts = {});

/// Kijowski density built from positive momenta,
/// |int dP g(P) psi~(P) sqrt(P) e^{iPx/hbar - iP^2 t/2m hbar}|^2 / (2 pi m hbar int |g psi~|^2),
/// evaluated on the energy grid through P = sqrt(2mE), dP = (m/P) dE.
/// `momentum_factor` is g(P) per energy sample; empty means g = 1.
TOADistribution kijowski_toa(const GaussianPacketSpec& spec, double x, const TimeGrid& tgrid,
                             std::span<const cplx> momentum_factor,
                             const PipelineOptions& opts = {});

/// Free-particle Kijowski distribution (g = 1).
TOADistribution free_kijowski(const GaussianPacketSpec& spec, double x, const TimeGrid& tgrid,
                              const PipelineOptions& opts = {});

/// Default Fig. 2 time window: [0, 1000] with 2^12 samples. Long enough that
/// the slow tail from energies just above a barrier top stays below 1e-4.
TimeGrid default_time_grid();

} // namespace ststoa
