#pragma once

// Standard-QM cross-checks, independent of the space-conditional solver:
// plane-wave transfer matrices, a Crank-Nicolson packet propagator, the
// probability-current arrival density, and the closed-form solution for a
// spatially uniform V(t).

#include "ststoa/numerics.hpp"
#include "ststoa/packet.hpp"
#include "ststoa/potential.hpp"

#include <optional>
#include <span>
#include <vector>

namespace ststoa {

struct ScatteringAmplitudes {
    cplx t;  ///< coefficient of e^{iPx/hbar} right of the potential
    cplx r;  ///< coefficient of e^{-iPx/hbar} left of the potential
};

/// Plane-wave matching across every segment edge of a piecewise-constant
/// potential (zero outside). Incident e^{iPx/hbar} from the left. Requires P > 0.
ScatteringAmplitudes transfer_matrix(const PiecewisePotential& pot, double p, double mass,
                                     double hbar);

/// Square barrier (0, L, V0) through transfer_matrix.
ScatteringAmplitudes transfer_matrix_T(double p, double v0, double length, double mass,
                                       double hbar);

/// V(t) given at sample times, linearly interpolated and held constant
/// outside the table.
class TabulatedTimePotential {
public:
    TabulatedTimePotential(std::vector<double> times, std::vector<double> values);
    static TabulatedTimePotential constant(double v);

    double value(double t) const;
    /// Exact integral of the interpolant over [a, b] (either order).
    double integral(double a, double b) const;

private:
    double primitive(double t) const;

    std::vector<double> times_;
    std::vector<double> values_;
    std::vector<double> cumulative_;
};

struct GridSolverConfig {
    double x_min = -190.0;
    double x_max = 150.0;
    std::size_t n_x = 6801;
    double dt = 0.00225;
    double t_final = 400.0;
    /// Width of the quadratic absorbing ramp at each end; 0 disables it.
    double absorber_width = 40.0;
    /// Peak of -i W(x). Below ~0.5 a wave at P = 2 leaks through to the hard wall;
    /// 1 keeps the return to the detector under 1e-11.
    double absorber_strength = 1.0;

    double dx() const { return (x_max - x_min) / static_cast<double>(n_x - 1); }

    /// Throws UnstableConfig unless dx < 2 pi hbar / (6 p_max) and dt < m dx^2 / hbar.
    void validate(double p_max, double mass, double hbar) const;

    /// Domain and steps used to cross-check the tunnelling-time figure.
    static GridSolverConfig fig2();

    bool operator==(const GridSolverConfig&) const = default;
};

/// Crank-Nicolson propagation of the Gaussian packet.
///
/// Space is discretised with linear finite elements using the average of the
/// consistent and lumped mass matrices (the Numerov kinetic stencil) and
/// exact element integrals of the piecewise-constant potential, so barrier
/// edges need not sit on nodes. Dirichlet ends, optional absorbing ramps,
/// optional spatially uniform V(t) averaged exactly over each step.
class CrankNicolsonSolver {
public:
    CrankNicolsonSolver(const GaussianPacketSpec& spec, const PiecewisePotential& pot,
                        const GridSolverConfig& cfg,
                        std::optional<TabulatedTimePotential> uniform_vt = std::nullopt);

    void step();
    /// Steps until time() >= t - dt/2.
    void advance_to(double t);

    double time() const noexcept { return time_; }
    std::size_t steps_taken() const noexcept { return steps_; }
    std::span<const cplx> psi() const noexcept { return psi_; }
    std::span<const double> x() const noexcept { return x_; }
    double dx() const noexcept { return cfg_.dx(); }
    const GridSolverConfig& config() const noexcept { return cfg_; }

    /// dx * sum |psi_j|^2. Exactly conserved for V = 0 without absorber.
    double norm() const;
    /// psi^dagger M psi, the norm the scheme conserves for any real V.
    double mass_norm() const;
    /// dx * sum |psi_j|^2 over nodes with a < x_j < b.
    double norm_between(double a, double b) const;
    double mean_position() const;

    /// Node index for a position on the grid; throws ConfigError otherwise.
    std::size_t node_index(double x) const;
    /// (hbar/m) Im(psi* dpsi/dx) at a node, fourth-order central difference.
    double flux_at(std::size_t node) const;

private:
    void build_static_operator(const PiecewisePotential& pot);
    void assemble(double uniform_v);
    void factorise();

    GaussianPacketSpec spec_;
    GridSolverConfig cfg_;
    std::optional<TabulatedTimePotential> vt_;
    std::vector<double> x_;
    std::vector<cplx> psi_;
    // Interior tridiagonals; the off-diagonal k couples unknowns k and k+1.
    std::vector<double> m_diag_, m_off_;
    std::vector<cplx> h_diag_, h_off_;
    // A = M + i dt/2hbar H, B = M - i dt/2hbar H and the Thomas factors of A.
    std::vector<cplx> a_diag_, a_off_, b_diag_, b_off_;
    std::vector<cplx> sup_, inv_;
    std::vector<cplx> rhs_;
    double time_ = 0.0;
    std::size_t steps_ = 0;
};

/// Wave functions at snapshot times.
struct WaveSeries {
    std::vector<double> x;
    std::vector<double> times;
    std::vector<std::vector<cplx>> psi;
    double mass = 1.0;
    double hbar = 1.0;
};

/// Runs to cfg.t_final keeping every `stride`-th step (and t = 0).
WaveSeries crank_nicolson_evolve(const GaussianPacketSpec& spec, const PiecewisePotential& pot,
                                 const GridSolverConfig& cfg, std::size_t stride = 1,
                                 std::optional<TabulatedTimePotential> uniform_vt = std::nullopt);

/// Probability current at a detector. Not clipped: backflow shows up as
/// negative samples.
struct FluxSeries {
    std::vector<double> times;
    std::vector<double> flux;
    double detector_x = 0.0;

    /// Trapezoid integral over the recorded times.
    double integral() const;
    double min() const;
    double peak_time() const;
    /// Linear interpolation onto a time grid, zero outside the record.
    std::vector<double> resample(const TimeGrid& tgrid) const;
};

FluxSeries flux_toa(const WaveSeries& series, double x_detector);

/// Runs the solver to t_final recording the current at x_detector every
/// `stride` steps without keeping the wave functions.
FluxSeries record_flux(CrankNicolsonSolver& solver, double x_detector, std::size_t stride = 1);

struct TransmissionMeasurement {
    double transmitted;       ///< norm in (right_end, probe) + time-integrated flux at probe
    double remaining_beyond;  ///< norm in (right_end, probe) at t_final
    double flux_through_probe;
    double final_norm;
};

/// Transmitted probability measured with a flux probe placed between the
/// potential and the right absorber.
TransmissionMeasurement measure_transmission(const GaussianPacketSpec& spec,
                                             const PiecewisePotential& pot,
                                             const GridSolverConfig& cfg, double probe_x);

/// psi(x|t) = int dP psi~(P|t0)/sqrt(2 pi hbar)
///            exp(-i int_{t0}^{t} [P^2/2m + V(t')] dt'/hbar + i P x/hbar),
/// by trapezoid quadrature over p_i +/- 12 sigma_P with n_p samples.
cplx time_potential_solution(const GaussianPacketSpec& spec, const TabulatedTimePotential& vt,
                             double x, double t, double t0 = 0.0, std::size_t n_p = 4096);

} // namespace ststoa
