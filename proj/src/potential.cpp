#include "ststoa/potential.hpp"

#include "ststoa/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ststoa {

PiecewisePotential::PiecewisePotential(std::vector<Segment> segments)
    : segments_(std::move(segments)) {
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const auto& s = segments_[i];
        const std::string field = "potential.segments[" + std::to_string(i) + "]";
        if (!std::isfinite(s.x_start) || !std::isfinite(s.x_end) || !std::isfinite(s.v)) {
            throw ConfigError(field, "non-finite value");
        }
        if (!(s.x_start < s.x_end)) {
            throw ConfigError(field, "x_start must be < x_end");
        }
        if (i > 0 && s.x_start < segments_[i - 1].x_end) {
            throw ConfigError(field, "segments must be sorted and non-overlapping");
        }
    }
}

PiecewisePotential PiecewisePotential::square_barrier(double v0, double length) {
    if (!(length > 0.0)) {
        throw ConfigError("potential.length", "barrier width must be > 0");
    }
    return PiecewisePotential({Segment{0.0, length, v0}});
}

double PiecewisePotential::value(double x) const noexcept {
    for (const auto& s : segments_) {
        if (x >= s.x_start && x < s.x_end) {
            return s.v;
        }
    }
    return 0.0;
}

std::vector<double> PiecewisePotential::edges() const {
    std::vector<double> e;
    e.reserve(2 * segments_.size());
    for (const auto& s : segments_) {
        e.push_back(s.x_start);
        e.push_back(s.x_end);
    }
    e.erase(std::unique(e.begin(), e.end()), e.end());
    return e;
}

bool PiecewisePotential::is_edge(double x) const noexcept {
    return std::any_of(segments_.begin(), segments_.end(),
                       [x](const Segment& s) { return x == s.x_start || x == s.x_end; });
}

double PiecewisePotential::right_end() const noexcept {
    return segments_.empty() ? 0.0 : segments_.back().x_end;
}

namespace {

// Ascending-only accumulation; the descending case is its exact negation.
cplx ascending_phase(const PiecewisePotential& pot, double energy, double mass, double a,
                     double b) {
    cplx theta{0.0, 0.0};
    double cursor = a;
    for (const auto& s : pot.segments()) {
        if (s.x_end <= cursor) {
            continue;
        }
        if (s.x_start >= b) {
            break;
        }
        if (s.x_start > cursor) {
            theta += (s.x_start - cursor) * complex_sqrt_2m(energy, 0.0, mass);
            cursor = s.x_start;
        }
        const double stop = std::min(s.x_end, b);
        theta += (stop - cursor) * complex_sqrt_2m(energy, s.v, mass);
        cursor = stop;
    }
    if (b > cursor) {
        theta += (b - cursor) * complex_sqrt_2m(energy, 0.0, mass);
    }
    return theta;
}

} // namespace

PhaseIntegralResult phase_integral(const PiecewisePotential& pot, double energy, double mass,
                                   double hbar, double x0, double x) {
    cplx theta = x >= x0 ? ascending_phase(pot, energy, mass, x0, x)
                         : -ascending_phase(pot, energy, mass, x, x0);
    theta /= hbar;
    return {theta, theta.real(), theta.imag()};
}

LocalMomenta local_momentum(const PiecewisePotential& pot, double energy, double mass, double x) {
    if (pot.is_edge(x)) {
        throw BoundaryAmbiguity("x = " + std::to_string(x) +
                                " lies on a potential segment edge; displace by +/- epsilon");
    }
    const cplx p = complex_sqrt_2m(energy, pot.value(x), mass);
    return {p, -p};
}

} // namespace ststoa
