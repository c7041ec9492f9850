#pragma once

#include "ststoa/numerics.hpp"

#include <vector>

namespace ststoa {

/// Initial standard-QM Gaussian packet psi(x|0).
struct GaussianPacketSpec {
    double x_i = -50.0;   ///< centre
    double p_i = 2.0;     ///< mean momentum
    double delta = 10.0;  ///< position width parameter
    double m = 1.0;
    double hbar = 1.0;

    /// Throws ConfigError unless delta, m, hbar are all positive and finite.
    void validate() const;

    /// Packet starts left of the origin with only positive momenta:
    /// x_i + 5 delta < 0 and p_i - 5/(2 delta) > 0.
    bool left_moving_from_left() const noexcept;

    /// Standard deviation of |psi~(P)|^2, hbar / (2 delta).
    double momentum_sigma() const noexcept { return hbar / (2.0 * delta); }

    /// Parameters of the tunnelling-time figure: x_i=-50, P0=2, delta=10, m=1.
    static GaussianPacketSpec fig2() { return {}; }

    bool operator==(const GaussianPacketSpec&) const = default;
};

/// Sign component of the two-component SC amplitude (sigma_z = diag(+1, -1)).
enum class Branch { Plus, Minus };

/// phi-bar^{+/-}(E|x) sampled on an energy grid and anchored at x.
struct SpectralAmplitude {
    Branch branch = Branch::Plus;
    EnergyGrid grid;
    std::vector<cplx> values;
    double anchor_x = 0.0;

    SpectralAmplitude(Branch b, EnergyGrid g, std::vector<cplx> v, double anchor);

    /// Trapezoid integral of |phi-bar|^2 over the grid.
    double norm_squared() const;
};

/// How the SC "initial" amplitude at x0 is related to the standard-QM packet.
/// Only MatchStandardQm (phi~(P) = psi~(P)) is implemented; Independent names
/// the alternative where the two momentum amplitudes differ and is rejected.
enum class InitialAmplitudeModel { MatchStandardQm, Independent };

cplx psi_position(const GaussianPacketSpec& spec, double x);

/// (2 delta^2/pi)^{1/4} exp(-delta^2 (P - p_i)^2 - i P x_i), hbar-scaled.
cplx psi_momentum(const GaussianPacketSpec& spec, double p);

/// phi-bar^+(E|0) = Theta(E) (m / 2E)^{1/4} psi~(sqrt(2 m E)). Plus branch,
/// anchored at x = 0; the Minus branch of this preparation is identically zero.
SpectralAmplitude sc_initial_amplitude(
    const GaussianPacketSpec& spec, const EnergyGrid& egrid,
    InitialAmplitudeModel model = InitialAmplitudeModel::MatchStandardQm);

/// Energy window covering p_i +/- n_sigma * hbar/(2 delta), mapped to E = P^2/2m,
/// lower edge clamped to EnergyGrid::kFloor.
EnergyGrid default_energy_grid(const GaussianPacketSpec& spec, std::size_t n = 1u << 14,
                               double n_sigma = 10.0);

} // namespace ststoa
