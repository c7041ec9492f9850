// sts_toa: arrival-time distributions for a Gaussian packet and a square barrier.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure,
// 1 anything else (I/O, internal).

#include "ststoa/errors.hpp"
#include "ststoa/kijowski.hpp"
#include "ststoa/oracle.hpp"
#include "ststoa/scenario.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace ststoa;
using nlohmann::json;

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitOther = 1;

struct CommonFlags {
    std::string config;
    std::string preset;
    std::vector<double> v0;
    std::string method;
    std::vector<std::string> models;
    std::string out_csv;
    std::string out_svg;
    std::string out_json;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config, "JSON scenario file");
    cmd->add_option("--preset", f.preset, "Parameter preset (fig2)");
    cmd->add_option("--v0", f.v0, "Barrier heights, comma separated")->delimiter(',');
    cmd->add_option("--method", f.method, "closed | slices:<n>");
    cmd->add_option("--models", f.models,
                    "sts,kijowski_free,kijowski_transmitted,flux_oracle")
        ->delimiter(',');
    cmd->add_option("--out-csv", f.out_csv, "Density table (one file per barrier height)");
    cmd->add_option("--out-svg", f.out_svg, "Figure with one panel per barrier height");
    cmd->add_option("--out-json", f.out_json, "Summary file (also printed to stdout)");
}

ScenarioConfig build_config(const CommonFlags& f, const std::vector<std::string>& default_models,
                            const std::vector<double>& default_v0) {
    json doc = json::object();
    if (!f.config.empty()) {
        std::ifstream in(f.config);
        if (!in) {
            throw ConfigError("config", "cannot open " + f.config);
        }
        try {
            doc = json::parse(in);
        } catch (const json::parse_error& e) {
            throw ConfigError("config", f.config + ": " + e.what());
        }
        if (!doc.is_object()) {
            throw ConfigError("config", f.config + ": expected a JSON object");
        }
    }
    if (!f.preset.empty()) {
        doc["preset"] = f.preset;
    } else if (f.config.empty()) {
        doc["preset"] = "fig2";
    }
    const bool from_file = !f.config.empty();
    if (!f.v0.empty()) {
        doc["potential"]["v0"] = f.v0;
    } else if (!from_file && !default_v0.empty()) {
        doc["potential"]["v0"] = default_v0;
    }
    if (!f.models.empty()) {
        doc["models"] = f.models;
    } else if (!from_file || !doc.contains("models")) {
        doc["models"] = default_models;
    }
    if (!f.method.empty()) {
        doc["method"] = f.method;
    }
    if (!f.out_csv.empty()) {
        doc["output"]["csv"] = f.out_csv;
    }
    if (!f.out_svg.empty()) {
        doc["output"]["svg"] = f.out_svg;
    }
    if (!f.out_json.empty()) {
        doc["output"]["json"] = f.out_json;
    }
    return parse_config(doc);
}

void run_and_emit(const ScenarioConfig& cfg) {
    const auto bundle = run_scenario(cfg);
    const auto summary = summary_json(bundle);
    if (cfg.out_csv) {
        for (const auto& p : emit_csv(bundle, *cfg.out_csv)) {
            std::cerr << "wrote " << p.string() << '\n';
        }
    }
    if (cfg.out_svg) {
        emit_svg(bundle, *cfg.out_svg);
        std::cerr << "wrote " << *cfg.out_svg << '\n';
    }
    const std::string text = summary.dump(2) + "\n";
    if (cfg.out_json) {
        std::ofstream out(*cfg.out_json, std::ios::binary | std::ios::trunc);
        if (!(out << text)) {
            throw IoError("cannot write " + *cfg.out_json);
        }
        std::cerr << "wrote " << *cfg.out_json << '\n';
    }
    std::cout << text;
}

struct Check {
    std::string name;
    std::function<std::pair<bool, std::string>()> run;
};

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

int selfcheck(const ScenarioConfig& cfg) {
    const auto& spec = cfg.packet;
    const double len = cfg.barrier_length;
    const double x = cfg.detector_x;
    const TimeGrid tgrid = cfg.time_grid();
    PipelineOptions opts;
    opts.egrid = cfg.energy_grid();

    std::vector<Check> checks;
    checks.push_back({"closed-form T(P) matches transfer matrix; |T|^2+|R|^2 = 1", [&] {
        double dt = 0.0;
        double du = 0.0;
        for (const double v0 : {1.125, 1.8, 4.5, 20.0}) {
            for (int k = 0; k < 512; ++k) {
                const double p = 0.05 + 4.0 * k / 511.0;
                const auto tm = transfer_matrix_T(p, v0, len, spec.m, spec.hbar);
                dt = std::max(dt, std::abs(tm.t - transmission_amplitude(p, v0, len, spec.m, spec.hbar)));
                du = std::max(du, std::abs(std::norm(tm.t) + std::norm(tm.r) - 1.0));
            }
        }
        return std::pair{dt < 1e-10 && du < 1e-12, "max|dT| " + sci(dt) + ", max|unitarity| " + sci(du)};
    }});
    checks.push_back({"FFT and direct quadrature agree", [&] {
        const auto amps = sc_initial_amplitude(spec, *opts.egrid);
        const auto a = fourier_E_to_t(amps.values, amps.grid, tgrid, spec.hbar, FourierPath::Fft);
        const auto b = fourier_E_to_t(amps.values, amps.grid, tgrid, spec.hbar, FourierPath::Direct);
        double d = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            d = std::max(d, std::abs(a[i] - b[i]));
        }
        return std::pair{d < 1e-8, "max-abs " + sci(d)};
    }});
    checks.push_back({"V0 = 0: STS, transmitted Kijowski and free Kijowski coincide", [&] {
        const auto s = barrier_toa(spec, 0.0, len, x, tgrid, opts);
        const auto k = transmitted_kijowski(spec, 0.0, len, x, tgrid, opts);
        const auto f = free_kijowski(spec, x, tgrid, opts);
        const double d = std::max(max_abs_diff(s.density, k.density), max_abs_diff(s.density, f.density));
        return std::pair{d < 1e-8, "max-abs " + sci(d)};
    }});
    checks.push_back({"densities nonnegative, unit integral, arrival probability <= 1", [&] {
        bool ok = true;
        double worst = 0.0;
        for (const double v0 : cfg.v0) {
            for (const auto& d : {barrier_toa(spec, v0, len, x, tgrid, opts),
                                  transmitted_kijowski(spec, v0, len, x, tgrid, opts)}) {
                const double mn = *std::min_element(d.density.begin(), d.density.end());
                worst = std::max(worst, std::abs(d.integral() - 1.0));
                ok = ok && mn >= 0.0 && d.arrival_probability >= 0.0 &&
                     d.arrival_probability <= 1.0 + 1e-6;
            }
        }
        return std::pair{ok && worst < 1e-4, "max|integral - 1| " + sci(worst)};
    }});
    checks.push_back({"aligned slices reproduce the closed form", [&] {
        double d = 0.0;
        PipelineOptions sliced = opts;
        // Slice width len / 2 keeps every barrier edge on a slice boundary when x / len is integral.
        const double ratio = x / len;
        if (std::abs(ratio - std::round(ratio)) > 1e-12) {
            return std::pair{true, std::string("skipped: detector not a multiple of L")};
        }
        sliced.propagation = Propagation::slices(static_cast<std::size_t>(2.0 * std::round(ratio)));
        for (const double v0 : cfg.v0) {
            const auto a = barrier_toa(spec, v0, len, x, tgrid, opts);
            const auto b = barrier_toa(spec, v0, len, x, tgrid, sliced);
            d = std::max(d, max_abs_diff(a.density, b.density));
        }
        return std::pair{d < 1e-10, "max-abs " + sci(d)};
    }});
    checks.push_back({"uniform V(t) leaves |psi|^2 unchanged", [&] {
        const auto vt = TabulatedTimePotential::constant(0.7);
        const auto zero = TabulatedTimePotential::constant(0.0);
        double d = 0.0;
        for (const double xs : {-60.0, -45.0, -30.0}) {
            for (const double ts : {0.0, 5.0, 10.0}) {
                d = std::max(d, std::abs(std::norm(time_potential_solution(spec, vt, xs, ts)) -
                                         std::norm(time_potential_solution(spec, zero, xs, ts))));
            }
        }
        return std::pair{d < 1e-12, "max-abs " + sci(d)};
    }});

    int failures = 0;
    for (const auto& c : checks) {
        const auto [ok, detail] = c.run();
        std::cout << (ok ? "PASS  " : "FAIL  ") << c.name << "  (" << detail << ")\n";
        failures += ok ? 0 : 1;
    }
    std::cout << (failures == 0 ? "all checks passed\n" : std::to_string(failures) + " check(s) failed\n");
    return failures == 0 ? 0 : kExitNumerical;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum time-of-arrival distributions: space-conditional Schrödinger solution "
                 "versus the transmitted Kijowski distribution, with standard-QM oracles"};
    app.require_subcommand(1);

    struct Sub {
        const char* name;
        const char* help;
        std::vector<std::string> models;
        std::vector<double> v0;
    };
    const std::vector<Sub> subs = {
        {"free-toa", "Free-particle Kijowski distribution at the detector", {"kijowski_free"}, {0.0}},
        {"barrier-toa", "Space-conditional solution behind the barrier", {"sts"}, {}},
        {"compare", "STS versus transmitted Kijowski, with L1 distances",
         {"sts", "kijowski_transmitted"}, {}},
        {"sweep", "Every closed-form model over the barrier heights",
         {"sts", "kijowski_transmitted", "kijowski_free"}, {}},
        {"oracle", "Crank-Nicolson probability current against the transmitted Kijowski norm",
         {"flux_oracle", "kijowski_transmitted"}, {}},
        {"selfcheck", "Fast invariant checks, one PASS/FAIL line each", {"sts"}, {}},
    };
    std::vector<CommonFlags> flags(subs.size());
    std::vector<CLI::App*> cmds;
    for (std::size_t k = 0; k < subs.size(); ++k) {
        cmds.push_back(app.add_subcommand(subs[k].name, subs[k].help));
        add_common(cmds.back(), flags[k]);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        for (std::size_t k = 0; k < subs.size(); ++k) {
            if (!cmds[k]->parsed()) {
                continue;
            }
            const auto cfg = build_config(flags[k], subs[k].models, subs[k].v0);
            if (std::string(subs[k].name) == "selfcheck") {
                cfg.validate();
                return selfcheck(cfg);
            }
            run_and_emit(cfg);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return kExitOther;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitOther;
    }
    return 0;
}
