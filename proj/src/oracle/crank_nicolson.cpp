#include "ststoa/oracle.hpp"

#include "ststoa/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

namespace ststoa {

void GridSolverConfig::validate(double p_max, double mass, double hbar) const {
    if (!(x_max > x_min) || n_x < 8) {
        throw ConfigError("oracle.n_x", "grid needs x_max > x_min and at least 8 nodes");
    }
    if (!(dt > 0.0) || !(t_final > 0.0)) {
        throw ConfigError("oracle.dt", "dt and t_final must be positive");
    }
    if (absorber_width < 0.0 || 2.0 * absorber_width >= x_max - x_min || absorber_strength < 0.0) {
        throw ConfigError("oracle.absorber_width", "absorbers must be non-negative and fit the domain");
    }
    const double h = dx();
    const double dx_limit = 2.0 * std::numbers::pi * hbar / (6.0 * p_max);
    if (!(h < dx_limit)) {
        throw UnstableConfig("dx = " + std::to_string(h) + " must be below 2 pi hbar/(6 P_max) = " +
                             std::to_string(dx_limit));
    }
    const double dt_limit = mass * h * h / hbar;
    if (!(dt < dt_limit)) {
        throw UnstableConfig("dt = " + std::to_string(dt) + " must be below m dx^2/hbar = " +
                             std::to_string(dt_limit));
    }
}

GridSolverConfig GridSolverConfig::fig2() { return {}; }

namespace {

// Element integrals over s in [sa, sb] of (1-s)^2, s(1-s), s^2, (1-s), s.
struct ElementWeights {
    double ll, lr, rr, l, r;
};

ElementWeights element_weights(double sa, double sb) {
    auto f_ll = [](double s) { return -std::pow(1.0 - s, 3) / 3.0; };
    auto f_lr = [](double s) { return s * s / 2.0 - s * s * s / 3.0; };
    auto f_rr = [](double s) { return s * s * s / 3.0; };
    auto f_l = [](double s) { return s - s * s / 2.0; };
    auto f_r = [](double s) { return s * s / 2.0; };
    return {f_ll(sb) - f_ll(sa), f_lr(sb) - f_lr(sa), f_rr(sb) - f_rr(sa), f_l(sb) - f_l(sa),
            f_r(sb) - f_r(sa)};
}

} // namespace

CrankNicolsonSolver::CrankNicolsonSolver(const GaussianPacketSpec& spec,
                                         const PiecewisePotential& pot,
                                         const GridSolverConfig& cfg,
                                         std::optional<TabulatedTimePotential> uniform_vt)
    : spec_(spec), cfg_(cfg), vt_(std::move(uniform_vt)) {
    spec_.validate();
    cfg_.validate(std::abs(spec_.p_i) + 10.0 * spec_.momentum_sigma(), spec_.m, spec_.hbar);

    const std::size_t n = cfg_.n_x;
    const double h = cfg_.dx();
    x_.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        x_[j] = cfg_.x_min + static_cast<double>(j) * h;
    }
    x_.back() = cfg_.x_max;

    const std::pair<const char*, double> edges[] = {{"oracle.x_min", cfg_.x_min + cfg_.absorber_width},
                                                     {"oracle.x_max", cfg_.x_max - cfg_.absorber_width}};
    for (const auto& [field, edge] : edges) {
        if (std::abs(psi_position(spec_, edge)) >= 1e-8) {
            throw ConfigError(field,
                              "initial packet reaches the absorbing layer or domain edge at x = " +
                                  std::to_string(edge));
        }
    }

    psi_.assign(n, cplx{0.0, 0.0});
    for (std::size_t j = 1; j + 1 < n; ++j) {
        psi_[j] = psi_position(spec_, x_[j]);
    }
    build_static_operator(pot);
    assemble(0.0);
    if (!vt_) {
        factorise();
    }
}

void CrankNicolsonSolver::build_static_operator(const PiecewisePotential& pot) {
    const std::size_t n = cfg_.n_x;
    const double h = cfg_.dx();
    const double kin = spec_.hbar * spec_.hbar / (2.0 * spec_.m);

    // Full-node arrays first; the Dirichlet end nodes are dropped afterwards.
    std::vector<double> md(n, 0.0), mo(n - 1, h / 12.0);
    std::vector<cplx> hd(n, 0.0), ho(n - 1, -kin / h);
    for (std::size_t e = 0; e + 1 < n; ++e) {
        md[e] += 5.0 * h / 12.0;
        md[e + 1] += 5.0 * h / 12.0;
        hd[e] += kin / h;
        hd[e + 1] += kin / h;
    }

    for (const auto& seg : pot.segments()) {
        const double a = std::max(seg.x_start, cfg_.x_min);
        const double b = std::min(seg.x_end, cfg_.x_max);
        if (!(b > a) || seg.v == 0.0) {
            continue;
        }
        const auto first = static_cast<std::size_t>(std::max(0.0, std::floor((a - cfg_.x_min) / h)));
        const auto last = std::min(n - 1, static_cast<std::size_t>(std::ceil((b - cfg_.x_min) / h)));
        for (std::size_t e = first; e < last; ++e) {
            const double lo = std::max(a, x_[e]);
            const double hi = std::min(b, x_[e + 1]);
            if (!(hi > lo)) {
                continue;
            }
            const double len = x_[e + 1] - x_[e];
            const auto w = element_weights((lo - x_[e]) / len, (hi - x_[e]) / len);
            // Average of the consistent and lumped element matrices.
            hd[e] += seg.v * len * 0.5 * (w.ll + w.l);
            hd[e + 1] += seg.v * len * 0.5 * (w.rr + w.r);
            ho[e] += seg.v * len * 0.5 * w.lr;
        }
    }

    if (cfg_.absorber_width > 0.0) {
        const double left = cfg_.x_min + cfg_.absorber_width;
        const double right = cfg_.x_max - cfg_.absorber_width;
        for (std::size_t j = 0; j < n; ++j) {
            double depth = 0.0;
            if (x_[j] < left) {
                depth = (left - x_[j]) / cfg_.absorber_width;
            } else if (x_[j] > right) {
                depth = (x_[j] - right) / cfg_.absorber_width;
            }
            hd[j] -= cplx{0.0, cfg_.absorber_strength * depth * depth * h};
        }
    }

    m_diag_.assign(md.begin() + 1, md.end() - 1);
    m_off_.assign(mo.begin() + 1, mo.end() - 1);
    h_diag_.assign(hd.begin() + 1, hd.end() - 1);
    h_off_.assign(ho.begin() + 1, ho.end() - 1);
}

void CrankNicolsonSolver::assemble(double uniform_v) {
    const cplx c{0.0, cfg_.dt / (2.0 * spec_.hbar)};
    const std::size_t m = m_diag_.size();
    a_diag_.resize(m);
    b_diag_.resize(m);
    a_off_.resize(m - 1);
    b_off_.resize(m - 1);
    for (std::size_t k = 0; k < m; ++k) {
        const cplx hk = h_diag_[k] + uniform_v * m_diag_[k];
        a_diag_[k] = m_diag_[k] + c * hk;
        b_diag_[k] = m_diag_[k] - c * hk;
    }
    for (std::size_t k = 0; k + 1 < m; ++k) {
        const cplx hk = h_off_[k] + uniform_v * m_off_[k];
        a_off_[k] = m_off_[k] + c * hk;
        b_off_[k] = m_off_[k] - c * hk;
    }
}

void CrankNicolsonSolver::factorise() {
    const std::size_t m = a_diag_.size();
    sup_.resize(m);
    inv_.resize(m);
    inv_[0] = 1.0 / a_diag_[0];
    for (std::size_t k = 1; k < m; ++k) {
        sup_[k - 1] = a_off_[k - 1] * inv_[k - 1];
        inv_[k] = 1.0 / (a_diag_[k] - a_off_[k - 1] * sup_[k - 1]);
    }
    rhs_.resize(m);
}

void CrankNicolsonSolver::step() {
    if (vt_) {
        const double t0 = time_;
        assemble(vt_->integral(t0, t0 + cfg_.dt) / cfg_.dt);
        factorise();
    }
    const std::size_t m = a_diag_.size();
    cplx* u = psi_.data() + 1;  // interior unknowns; psi_[0], psi_[n-1] stay zero

    rhs_[0] = b_diag_[0] * u[0] + b_off_[0] * u[1];
    for (std::size_t k = 1; k + 1 < m; ++k) {
        rhs_[k] = b_off_[k - 1] * u[k - 1] + b_diag_[k] * u[k] + b_off_[k] * u[k + 1];
    }
    rhs_[m - 1] = b_off_[m - 2] * u[m - 2] + b_diag_[m - 1] * u[m - 1];

    rhs_[0] *= inv_[0];
    for (std::size_t k = 1; k < m; ++k) {
        rhs_[k] = (rhs_[k] - a_off_[k - 1] * rhs_[k - 1]) * inv_[k];
    }
    u[m - 1] = rhs_[m - 1];
    for (std::size_t k = m - 1; k-- > 0;) {
        u[k] = rhs_[k] - sup_[k] * u[k + 1];
    }
    ++steps_;
    time_ = static_cast<double>(steps_) * cfg_.dt;
}

void CrankNicolsonSolver::advance_to(double t) {
    while (time_ < t - 0.5 * cfg_.dt) {
        step();
    }
}

double CrankNicolsonSolver::norm() const {
    double s = 0.0;
    for (const auto& v : psi_) {
        s += std::norm(v);
    }
    return s * cfg_.dx();
}

double CrankNicolsonSolver::mass_norm() const {
    const cplx* u = psi_.data() + 1;
    double s = 0.0;
    for (std::size_t k = 0; k < m_diag_.size(); ++k) {
        s += m_diag_[k] * std::norm(u[k]);
    }
    for (std::size_t k = 0; k < m_off_.size(); ++k) {
        s += 2.0 * m_off_[k] * std::real(std::conj(u[k]) * u[k + 1]);
    }
    return s;
}

double CrankNicolsonSolver::norm_between(double a, double b) const {
    double s = 0.0;
    for (std::size_t j = 0; j < x_.size(); ++j) {
        if (x_[j] > a && x_[j] < b) {
            s += std::norm(psi_[j]);
        }
    }
    return s * cfg_.dx();
}

double CrankNicolsonSolver::mean_position() const {
    double s = 0.0;
    double w = 0.0;
    for (std::size_t j = 0; j < x_.size(); ++j) {
        s += x_[j] * std::norm(psi_[j]);
        w += std::norm(psi_[j]);
    }
    return s / w;
}

std::size_t CrankNicolsonSolver::node_index(double x) const {
    const double h = cfg_.dx();
    const double r = (x - cfg_.x_min) / h;
    const double j = std::round(r);
    if (j < 2.0 || j > static_cast<double>(cfg_.n_x) - 3.0 || std::abs(r - j) > 1e-6) {
        throw ConfigError("detector_x", "x = " + std::to_string(x) +
                                            " is not an interior node of the oracle grid");
    }
    return static_cast<std::size_t>(j);
}

double CrankNicolsonSolver::flux_at(std::size_t j) const {
    if (j < 2 || j + 2 >= psi_.size()) {
        throw std::out_of_range("flux_at: node too close to the boundary");
    }
    const cplx d = (-psi_[j + 2] + 8.0 * psi_[j + 1] - 8.0 * psi_[j - 1] + psi_[j - 2]) /
                   (12.0 * cfg_.dx());
    return spec_.hbar / spec_.m * std::imag(std::conj(psi_[j]) * d);
}

namespace {

std::size_t total_steps(const GridSolverConfig& cfg) {
    return static_cast<std::size_t>(std::llround(cfg.t_final / cfg.dt));
}

} // namespace

WaveSeries crank_nicolson_evolve(const GaussianPacketSpec& spec, const PiecewisePotential& pot,
                                 const GridSolverConfig& cfg, std::size_t stride,
                                 std::optional<TabulatedTimePotential> uniform_vt) {
    if (stride < 1) {
        throw ConfigError("oracle.stride", "stride must be >= 1");
    }
    CrankNicolsonSolver solver(spec, pot, cfg, std::move(uniform_vt));
    WaveSeries out;
    out.x.assign(solver.x().begin(), solver.x().end());
    out.mass = spec.m;
    out.hbar = spec.hbar;
    auto keep = [&] {
        out.times.push_back(solver.time());
        out.psi.emplace_back(solver.psi().begin(), solver.psi().end());
    };
    keep();
    const std::size_t n = total_steps(cfg);
    while (solver.steps_taken() < n) {
        solver.step();
        if (solver.steps_taken() % stride == 0) {
            keep();
        }
    }
    return out;
}

double FluxSeries::integral() const {
    double s = 0.0;
    for (std::size_t k = 1; k < times.size(); ++k) {
        s += 0.5 * (times[k] - times[k - 1]) * (flux[k] + flux[k - 1]);
    }
    return s;
}

double FluxSeries::min() const {
    return flux.empty() ? 0.0 : *std::min_element(flux.begin(), flux.end());
}

double FluxSeries::peak_time() const {
    if (flux.empty()) {
        return 0.0;
    }
    const auto it = std::max_element(flux.begin(), flux.end());
    return times[static_cast<std::size_t>(std::distance(flux.begin(), it))];
}

std::vector<double> FluxSeries::resample(const TimeGrid& tgrid) const {
    std::vector<double> out(tgrid.size(), 0.0);
    if (times.size() < 2) {
        return out;
    }
    std::size_t k = 0;
    for (std::size_t i = 0; i < tgrid.size(); ++i) {
        const double t = tgrid[i];
        if (t < times.front() || t > times.back()) {
            continue;
        }
        while (k + 2 < times.size() && times[k + 1] < t) {
            ++k;
        }
        const double w = (t - times[k]) / (times[k + 1] - times[k]);
        out[i] = (1.0 - w) * flux[k] + w * flux[k + 1];
    }
    return out;
}

FluxSeries flux_toa(const WaveSeries& series, double x_detector) {
    if (series.x.size() < 5) {
        throw ConfigError("detector_x", "wave series grid is too small for a flux stencil");
    }
    const double h = series.x[1] - series.x[0];
    const double r = (x_detector - series.x.front()) / h;
    const double jr = std::round(r);
    if (jr < 2.0 || jr > static_cast<double>(series.x.size()) - 3.0 || std::abs(r - jr) > 1e-6) {
        throw ConfigError("detector_x", "x = " + std::to_string(x_detector) +
                                            " is not an interior node of the oracle grid");
    }
    const auto j = static_cast<std::size_t>(jr);
    FluxSeries out{series.times, {}, x_detector};
    out.flux.reserve(series.psi.size());
    for (const auto& psi : series.psi) {
        const cplx d = (-psi[j + 2] + 8.0 * psi[j + 1] - 8.0 * psi[j - 1] + psi[j - 2]) / (12.0 * h);
        out.flux.push_back(series.hbar / series.mass * std::imag(std::conj(psi[j]) * d));
    }
    return out;
}

FluxSeries record_flux(CrankNicolsonSolver& solver, double x_detector, std::size_t stride) {
    if (stride < 1) {
        throw ConfigError("oracle.stride", "stride must be >= 1");
    }
    const std::size_t j = solver.node_index(x_detector);
    FluxSeries out{{}, {}, x_detector};
    auto keep = [&] {
        out.times.push_back(solver.time());
        out.flux.push_back(solver.flux_at(j));
    };
    keep();
    const std::size_t n = total_steps(solver.config());
    while (solver.steps_taken() < n) {
        solver.step();
        if (solver.steps_taken() % stride == 0 || solver.steps_taken() == n) {
            keep();
        }
    }
    return out;
}

TransmissionMeasurement measure_transmission(const GaussianPacketSpec& spec,
                                             const PiecewisePotential& pot,
                                             const GridSolverConfig& cfg, double probe_x) {
    if (!(probe_x > pot.right_end()) || !(probe_x < cfg.x_max - cfg.absorber_width)) {
        throw ConfigError("oracle.probe_x",
                          "probe must lie between the potential and the right absorber");
    }
    CrankNicolsonSolver solver(spec, pot, cfg);
    const auto series = record_flux(solver, probe_x);
    const double beyond = solver.norm_between(pot.right_end(), probe_x);
    const double through = series.integral();
    return {beyond + through, beyond, through, solver.norm()};
}

} // namespace ststoa
