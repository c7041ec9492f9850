#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace ststoa {

using cplx = std::complex<double>;

/// Uniform, strictly increasing energy samples. Never contains E = 0.
class EnergyGrid {
public:
    /// Smallest admissible lower edge; the (m/2E)^{1/4} kernel is singular at 0.
    static constexpr double kFloor = 1e-9;

    EnergyGrid(double e_min, double e_max, std::size_t n);

    double e_min() const noexcept { return e_min_; }
    double e_max() const noexcept { return e_max_; }
    std::size_t size() const noexcept { return n_; }
    double spacing() const noexcept { return step_; }
    double operator[](std::size_t i) const noexcept {
        return i + 1 == n_ ? e_max_ : e_min_ + static_cast<double>(i) * step_;
    }
    std::vector<double> samples() const;

    bool operator==(const EnergyGrid&) const = default;

private:
    double e_min_;
    double e_max_;
    std::size_t n_;
    double step_;
};

/// Uniform, strictly increasing time samples.
class TimeGrid {
public:
    TimeGrid(double t_min, double t_max, std::size_t n);

    double t_min() const noexcept { return t_min_; }
    double t_max() const noexcept { return t_max_; }
    std::size_t size() const noexcept { return n_; }
    double spacing() const noexcept { return step_; }
    double operator[](std::size_t i) const noexcept {
        return i + 1 == n_ ? t_max_ : t_min_ + static_cast<double>(i) * step_;
    }
    std::vector<double> samples() const;

    bool operator==(const TimeGrid&) const = default;

private:
    double t_min_;
    double t_max_;
    std::size_t n_;
    double step_;
};

/// Square-root branch used everywhere a local momentum is formed:
/// sqrt(r) >= 0 for r >= 0 and sqrt(-r) = +i sqrt(r).
enum class SqrtBranch { UpperHalfPlane };

/// Principal root of a real radicand under the upper-half-plane branch.
cplx branch_sqrt(double radicand, SqrtBranch branch = SqrtBranch::UpperHalfPlane) noexcept;

/// sqrt(2m(E - V)). Real for E >= V, positive imaginary for E < V.
cplx complex_sqrt_2m(double energy, double potential, double mass) noexcept;

/// Composite trapezoid rule over uniformly spaced samples (at least two).
cplx trapezoid_complex(std::span<const cplx> values, double spacing);
double trapezoid(std::span<const double> values, double spacing);

enum class FourierPath { Fft, Direct };

/// (1/sqrt(2 pi hbar)) * integral dE a(E) exp(-i E t / hbar), trapezoid-weighted,
/// evaluated at every time sample.
///
/// The FFT path is a chirp-z (Bluestein) transform padded to the next power of
/// two, so arbitrary (dE, dt) pairs are hit exactly on the grid; the Direct path
/// sums the same trapezoid rule point by point and is kept as its oracle.
///
/// Throws GridTooCoarse when dE * (t_max - t_min) / hbar > pi.
std::vector<cplx> fourier_E_to_t(std::span<const cplx> amps, const EnergyGrid& egrid,
                                 const TimeGrid& tgrid, double hbar = 1.0,
                                 FourierPath path = FourierPath::Fft);

/// Inverse kernel: (1/sqrt(2 pi hbar)) * integral dt f(t) exp(+i E t / hbar).
std::vector<cplx> fourier_t_to_E(std::span<const cplx> series, const TimeGrid& tgrid,
                                 const EnergyGrid& egrid, double hbar = 1.0,
                                 FourierPath path = FourierPath::Fft);

/// Sum_j w_j a_j exp(sign * i * (x0 + j dx)(y0 + k dy) / hbar) for k in [0, m),
/// w_j the trapezoid weights times dx. Shared engine of both transforms.
std::vector<cplx> oscillatory_sum(std::span<const cplx> values, double x0, double dx,
                                  double y0, double dy, std::size_t m, int sign, double hbar,
                                  FourierPath path);

} // namespace ststoa
