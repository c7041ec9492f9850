#include "ststoa/oracle.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace ststoa {

namespace {

using Mat2 = std::array<std::array<cplx, 2>, 2>;

Mat2 multiply(const Mat2& a, const Mat2& b) {
    Mat2 c{};
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    return c;
}

Mat2 inverse(const Mat2& a) {
    const cplx det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    return {{{a[1][1] / det, -a[0][1] / det}, {-a[1][0] / det, a[0][0] / det}}};
}

// Columns: (value, derivative) of the two basis solutions at position a.
// k != 0: e^{ikx}, e^{-ikx}; k == 0: 1, x.
Mat2 basis_at(cplx k, double a) {
    const cplx i{0.0, 1.0};
    if (k == cplx{0.0, 0.0}) {
        return {{{1.0, a}, {0.0, 1.0}}};
    }
    const cplx ep = std::exp(i * k * a);
    const cplx em = std::exp(-i * k * a);
    return {{{ep, em}, {i * k * ep, -i * k * em}}};
}

cplx wronskian(cplx k) {
    return k == cplx{0.0, 0.0} ? cplx{1.0, 0.0} : cplx{0.0, -2.0} * k;
}

} // namespace

ScatteringAmplitudes transfer_matrix(const PiecewisePotential& pot, double p, double mass,
                                     double hbar) {
    if (!(p > 0.0)) {
        throw std::invalid_argument("transfer_matrix: P must be > 0");
    }
    const double energy = p * p / (2.0 * mass);
    Mat2 total{{{1.0, 0.0}, {0.0, 1.0}}};
    // det(total) is tracked as a product of exact basis Wronskians; forming it
    // from the entries cancels catastrophically under deep tunnelling.
    cplx det{1.0, 0.0};
    cplx k_left = cplx{p / hbar, 0.0};
    for (const double a : pot.edges()) {
        const cplx k_right = complex_sqrt_2m(energy, pot.value(a), mass) / hbar;
        total = multiply(multiply(inverse(basis_at(k_right, a)), basis_at(k_left, a)), total);
        det *= wronskian(k_left) / wronskian(k_right);
        k_left = k_right;
    }
    // (t, 0) = total * (1, r)
    const cplx r = -total[1][0] / total[1][1];
    const cplx t = det / total[1][1];
    return {t, r};
}

ScatteringAmplitudes transfer_matrix_T(double p, double v0, double length, double mass,
                                       double hbar) {
    return transfer_matrix(PiecewisePotential::square_barrier(v0, length), p, mass, hbar);
}

} // namespace ststoa
