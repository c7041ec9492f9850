#pragma once

#include "ststoa/numerics.hpp"

#include <utility>
#include <vector>

namespace ststoa {

struct Segment {
    double x_start;
    double x_end;
    double v;

    bool operator==(const Segment&) const = default;
};

/// Piecewise-constant V(x): sorted, non-overlapping segments, zero elsewhere.
/// A segment owns its left edge and not its right one ([x_start, x_end)).
class PiecewisePotential {
public:
    PiecewisePotential() = default;
    explicit PiecewisePotential(std::vector<Segment> segments);

    /// One segment (0, L, V0).
    static PiecewisePotential square_barrier(double v0, double length);

    const std::vector<Segment>& segments() const noexcept { return segments_; }
    bool empty() const noexcept { return segments_.empty(); }

    double value(double x) const noexcept;

    /// Every segment edge, ascending, duplicates removed.
    std::vector<double> edges() const;
    bool is_edge(double x) const noexcept;

    /// Largest x_end (0 for the empty potential).
    double right_end() const noexcept;

    bool operator==(const PiecewisePotential&) const = default;

private:
    std::vector<Segment> segments_;
};

/// theta(E; x0 -> x) = integral sqrt(2m[E - V]) dx' / hbar.
struct PhaseIntegralResult {
    cplx theta;
    double real_part;
    /// Im(theta); the accumulated decay exponent, >= 0 whenever x > x0.
    double evanescent_decay;
};

/// Exact segment sum; no quadrature error for piecewise-constant V.
PhaseIntegralResult phase_integral(const PiecewisePotential& pot, double energy, double mass,
                                   double hbar, double x0, double x);

struct LocalMomenta {
    cplx plus;
    cplx minus;
};

/// +/- sqrt(2m(E - V(x))). Throws BoundaryAmbiguity when x is a segment edge.
LocalMomenta local_momentum(const PiecewisePotential& pot, double energy, double mass, double x);

} // namespace ststoa
