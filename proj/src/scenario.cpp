#include "ststoa/scenario.hpp"

#include "ststoa/errors.hpp"
#include "ststoa/kijowski.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <set>
#include <thread>

namespace ststoa {

using nlohmann::json;

std::string to_string(Model m) {
    switch (m) {
    case Model::Sts: return "sts";
    case Model::KijowskiFree: return "kijowski_free";
    case Model::KijowskiTransmitted: return "kijowski_transmitted";
    case Model::FluxOracle: return "flux_oracle";
    }
    return "unknown";
}

Model parse_model(const std::string& name) {
    for (Model m : {Model::Sts, Model::KijowskiFree, Model::KijowskiTransmitted, Model::FluxOracle}) {
        if (to_string(m) == name) {
            return m;
        }
    }
    throw ConfigError("models", "unknown model '" + name +
                                    "' (expected sts, kijowski_free, kijowski_transmitted, flux_oracle)");
}

Propagation parse_method(const std::string& text) {
    if (text == "closed" || text == "closed_form") {
        return Propagation::closed_form();
    }
    const std::string prefix = "slices:";
    if (text.rfind(prefix, 0) == 0) {
        const std::string count = text.substr(prefix.size());
        std::size_t used = 0;
        long long n = 0;
        try {
            n = std::stoll(count, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != count.size() || count.empty() || n < 1) {
            throw ConfigError("method", "slice count in '" + text + "' must be a positive integer");
        }
        return Propagation::slices(static_cast<std::size_t>(n));
    }
    throw ConfigError("method", "expected 'closed' or 'slices:<n>', got '" + text + "'");
}

std::string to_string(const Propagation& method) {
    return method.kind == Propagation::Kind::ClosedForm ? "closed"
                                                        : "slices:" + std::to_string(method.n_slices);
}

ScenarioConfig ScenarioConfig::fig2() { return {}; }

bool ScenarioConfig::has(Model m) const {
    return std::find(models.begin(), models.end(), m) != models.end();
}

EnergyGrid ScenarioConfig::energy_grid() const {
    return default_energy_grid(packet, egrid_n, egrid_n_sigma);
}

TimeGrid ScenarioConfig::time_grid() const { return {t_min, t_max, t_n}; }

void ScenarioConfig::validate() const {
    packet.validate();
    if (models.empty()) {
        throw ConfigError("models", "select at least one model");
    }
    if (std::set<Model>(models.begin(), models.end()).size() != models.size()) {
        throw ConfigError("models", "models are listed more than once");
    }
    if (!(barrier_length > 0.0) || !std::isfinite(barrier_length)) {
        throw ConfigError("potential.length", "barrier length must be positive and finite");
    }
    if (v0.empty()) {
        throw ConfigError("potential.v0", "give at least one barrier height");
    }
    for (const double v : v0) {
        if (!std::isfinite(v)) {
            throw ConfigError("potential.v0", "barrier heights must be finite");
        }
    }
    if (!std::isfinite(detector_x)) {
        throw ConfigError("detector_x", "detector position must be finite");
    }
    if (has(Model::KijowskiTransmitted) && !(detector_x > barrier_length)) {
        throw ConfigError("detector_x",
                          "kijowski_transmitted needs the detector beyond the barrier end");
    }
    if (egrid_n < 2 || !(egrid_n_sigma > 0.0)) {
        throw ConfigError("egrid", "energy grid needs n >= 2 and n_sigma > 0");
    }
    if (t_n < 2 || !(t_max > t_min) || !std::isfinite(t_min) || !std::isfinite(t_max)) {
        throw ConfigError("tgrid", "time grid needs n >= 2 and t_max > t_min");
    }
    if (!(plot_t_max > t_min)) {
        throw ConfigError("plot.t_max", "plot window must end after t_min");
    }
    if (method.kind == Propagation::Kind::Slices && method.n_slices < 1) {
        throw ConfigError("method", "slice count must be >= 1");
    }
    if (initial_amplitude != InitialAmplitudeModel::MatchStandardQm) {
        throw ConfigError("initial_amplitude",
                          "only match_standard_qm (phi~ = psi~) is implemented");
    }
    if (transmitted_amplitude != TransmittedAmplitude::Full) {
        throw ConfigError("transmitted_amplitude",
                          "only the full amplitude T(P) is implemented; phase_only is a placeholder");
    }
}

namespace {

void reject_unknown(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
    if (!obj.is_object()) {
        throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
    }
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* k : keys) {
            known = known || item.key() == k;
        }
        if (!known) {
            throw ConfigError(path.empty() ? item.key() : path + "." + item.key(), "unknown field");
        }
    }
}

std::string join(const std::string& path, const char* key) {
    return path.empty() ? key : path + "." + key;
}

void read_number(const json& obj, const std::string& path, const char* key, double& out) {
    if (!obj.contains(key)) {
        return;
    }
    const auto& v = obj.at(key);
    if (!v.is_number()) {
        throw ConfigError(join(path, key), "expected a number");
    }
    out = v.get<double>();
}

void read_count(const json& obj, const std::string& path, const char* key, std::size_t& out) {
    if (!obj.contains(key)) {
        return;
    }
    const auto& v = obj.at(key);
    if (!v.is_number_unsigned()) {
        throw ConfigError(join(path, key), "expected a non-negative integer");
    }
    out = v.get<std::size_t>();
}

std::string read_string(const json& v, const std::string& field) {
    if (!v.is_string()) {
        throw ConfigError(field, "expected a string");
    }
    return v.get<std::string>();
}

void read_path(const json& obj, const char* key, std::optional<std::string>& out) {
    if (!obj.contains(key)) {
        return;
    }
    const auto& v = obj.at(key);
    out = v.is_null() ? std::nullopt : std::optional(read_string(v, join("output", key)));
}

} // namespace

ScenarioConfig parse_config(const json& doc) {
    reject_unknown(doc, "", {"preset", "packet", "potential", "detector_x", "egrid", "tgrid", "models",
                             "method", "initial_amplitude", "transmitted_amplitude", "oracle",
                             "plot", "output"});
    ScenarioConfig cfg;
    if (doc.contains("preset")) {
        const auto preset = read_string(doc.at("preset"), "preset");
        if (preset != "fig2") {
            throw ConfigError("preset", "unknown preset '" + preset + "' (expected fig2)");
        }
        cfg = ScenarioConfig::fig2();
    } else {
        for (const char* required : {"packet", "potential", "detector_x"}) {
            if (!doc.contains(required)) {
                throw ConfigError(required, "required when no preset is given");
            }
        }
    }

    if (doc.contains("packet")) {
        const auto& p = doc.at("packet");
        reject_unknown(p, "packet", {"x_i", "p_i", "delta", "m", "hbar"});
        read_number(p, "packet", "x_i", cfg.packet.x_i);
        read_number(p, "packet", "p_i", cfg.packet.p_i);
        read_number(p, "packet", "delta", cfg.packet.delta);
        read_number(p, "packet", "m", cfg.packet.m);
        read_number(p, "packet", "hbar", cfg.packet.hbar);
    }
    if (doc.contains("potential")) {
        const auto& p = doc.at("potential");
        reject_unknown(p, "potential", {"kind", "length", "v0"});
        if (p.contains("kind") && read_string(p.at("kind"), "potential.kind") != "square_barrier") {
            throw ConfigError("potential.kind", "only square_barrier is supported");
        }
        read_number(p, "potential", "length", cfg.barrier_length);
        if (p.contains("v0")) {
            const auto& v = p.at("v0");
            cfg.v0.clear();
            if (v.is_number()) {
                cfg.v0.push_back(v.get<double>());
            } else if (v.is_array()) {
                for (const auto& e : v) {
                    if (!e.is_number()) {
                        throw ConfigError("potential.v0", "expected numbers");
                    }
                    cfg.v0.push_back(e.get<double>());
                }
            } else {
                throw ConfigError("potential.v0", "expected a number or an array of numbers");
            }
        }
    }
    read_number(doc, "", "detector_x", cfg.detector_x);
    if (doc.contains("egrid")) {
        const auto& g = doc.at("egrid");
        reject_unknown(g, "egrid", {"n", "n_sigma"});
        read_count(g, "egrid", "n", cfg.egrid_n);
        read_number(g, "egrid", "n_sigma", cfg.egrid_n_sigma);
    }
    if (doc.contains("tgrid")) {
        const auto& g = doc.at("tgrid");
        reject_unknown(g, "tgrid", {"t_min", "t_max", "n"});
        read_number(g, "tgrid", "t_min", cfg.t_min);
        read_number(g, "tgrid", "t_max", cfg.t_max);
        read_count(g, "tgrid", "n", cfg.t_n);
    }
    if (doc.contains("models")) {
        const auto& m = doc.at("models");
        if (!m.is_array()) {
            throw ConfigError("models", "expected an array of model names");
        }
        cfg.models.clear();
        for (const auto& e : m) {
            cfg.models.push_back(parse_model(read_string(e, "models")));
        }
    }
    if (doc.contains("method")) {
        cfg.method = parse_method(read_string(doc.at("method"), "method"));
    }
    if (doc.contains("initial_amplitude")) {
        const auto s = read_string(doc.at("initial_amplitude"), "initial_amplitude");
        if (s == "match_standard_qm") {
            cfg.initial_amplitude = InitialAmplitudeModel::MatchStandardQm;
        } else if (s == "independent") {
            cfg.initial_amplitude = InitialAmplitudeModel::Independent;
        } else {
            throw ConfigError("initial_amplitude", "expected match_standard_qm or independent");
        }
    }
    if (doc.contains("transmitted_amplitude")) {
        const auto s = read_string(doc.at("transmitted_amplitude"), "transmitted_amplitude");
        if (s == "full") {
            cfg.transmitted_amplitude = TransmittedAmplitude::Full;
        } else if (s == "phase_only") {
            cfg.transmitted_amplitude = TransmittedAmplitude::PhaseOnly;
        } else {
            throw ConfigError("transmitted_amplitude", "expected full or phase_only");
        }
    }
    if (doc.contains("oracle")) {
        const auto& o = doc.at("oracle");
        reject_unknown(o, "oracle", {"x_min", "x_max", "n_x", "dt", "t_final", "absorber_width",
                                     "absorber_strength"});
        read_number(o, "oracle", "x_min", cfg.oracle.x_min);
        read_number(o, "oracle", "x_max", cfg.oracle.x_max);
        read_count(o, "oracle", "n_x", cfg.oracle.n_x);
        read_number(o, "oracle", "dt", cfg.oracle.dt);
        read_number(o, "oracle", "t_final", cfg.oracle.t_final);
        read_number(o, "oracle", "absorber_width", cfg.oracle.absorber_width);
        read_number(o, "oracle", "absorber_strength", cfg.oracle.absorber_strength);
    }
    if (doc.contains("plot")) {
        const auto& p = doc.at("plot");
        reject_unknown(p, "plot", {"t_max"});
        read_number(p, "plot", "t_max", cfg.plot_t_max);
    }
    if (doc.contains("output")) {
        const auto& o = doc.at("output");
        reject_unknown(o, "output", {"csv", "svg", "json"});
        read_path(o, "csv", cfg.out_csv);
        read_path(o, "svg", cfg.out_svg);
        read_path(o, "json", cfg.out_json);
    }
    return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("config", "cannot open " + path.string());
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config", path.string() + ": " + e.what());
    }
    return parse_config(doc);
}

json to_json(const ScenarioConfig& cfg) {
    json models = json::array();
    for (const Model m : cfg.models) {
        models.push_back(to_string(m));
    }
    json output = json::object();
    auto put = [&](const char* key, const std::optional<std::string>& v) {
        output[key] = v ? json(*v) : json(nullptr);
    };
    put("csv", cfg.out_csv);
    put("svg", cfg.out_svg);
    put("json", cfg.out_json);
    return {
        {"packet",
         {{"x_i", cfg.packet.x_i},
          {"p_i", cfg.packet.p_i},
          {"delta", cfg.packet.delta},
          {"m", cfg.packet.m},
          {"hbar", cfg.packet.hbar}}},
        {"potential", {{"kind", "square_barrier"}, {"length", cfg.barrier_length}, {"v0", cfg.v0}}},
        {"detector_x", cfg.detector_x},
        {"egrid", {{"n", cfg.egrid_n}, {"n_sigma", cfg.egrid_n_sigma}}},
        {"tgrid", {{"t_min", cfg.t_min}, {"t_max", cfg.t_max}, {"n", cfg.t_n}}},
        {"models", models},
        {"method", to_string(cfg.method)},
        {"initial_amplitude", cfg.initial_amplitude == InitialAmplitudeModel::MatchStandardQm
                                  ? "match_standard_qm"
                                  : "independent"},
        {"transmitted_amplitude",
         cfg.transmitted_amplitude == TransmittedAmplitude::Full ? "full" : "phase_only"},
        {"oracle",
         {{"x_min", cfg.oracle.x_min},
          {"x_max", cfg.oracle.x_max},
          {"n_x", cfg.oracle.n_x},
          {"dt", cfg.oracle.dt},
          {"t_final", cfg.oracle.t_final},
          {"absorber_width", cfg.oracle.absorber_width},
          {"absorber_strength", cfg.oracle.absorber_strength}}},
        {"plot", {{"t_max", cfg.plot_t_max}}},
        {"output", output},
    };
}

std::size_t worker_count() {
    if (const char* env = std::getenv("STS_TOA_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && n > 0) {
            return static_cast<std::size_t>(n);
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

PanelResult run_panel(const ScenarioConfig& cfg, double v0, const TimeGrid& tgrid,
                      const PipelineOptions& opts, const std::optional<TOADistribution>& free) {
    PanelResult panel;
    panel.v0 = v0;
    const auto barrier = PiecewisePotential::square_barrier(v0, cfg.barrier_length);
    if (cfg.has(Model::Sts)) {
        panel.sts = sts_toa(cfg.packet, barrier, cfg.detector_x, tgrid, opts);
    }
    if (cfg.has(Model::KijowskiTransmitted)) {
        panel.kijowski_transmitted =
            transmitted_kijowski(cfg.packet, v0, cfg.barrier_length, cfg.detector_x, tgrid, opts);
    }
    panel.kijowski_free = free;
    if (cfg.has(Model::FluxOracle)) {
        CrankNicolsonSolver solver(cfg.packet, barrier, cfg.oracle);
        const auto series = record_flux(solver, cfg.detector_x);
        panel.flux = series.resample(tgrid);
        panel.flux_integral = series.integral();
    }
    if (panel.sts && panel.kijowski_transmitted) {
        panel.distance = model_distance(*panel.sts, *panel.kijowski_transmitted);
    }
    return panel;
}

} // namespace

ResultBundle run_scenario(const ScenarioConfig& cfg) {
    cfg.validate();
    const TimeGrid tgrid = cfg.time_grid();
    PipelineOptions opts;
    opts.egrid = cfg.energy_grid();
    opts.propagation = cfg.method;

    std::optional<TOADistribution> free;
    if (cfg.has(Model::KijowskiFree)) {
        free = free_kijowski(cfg.packet, cfg.detector_x, tgrid, opts);
    }

    const std::size_t n = cfg.v0.size();
    std::vector<PanelResult> panels(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t k = next++; k < n; k = next++) {
            try {
                panels[k] = run_panel(cfg, cfg.v0[k], tgrid, opts, free);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };
    const std::size_t workers = std::min(worker_count(), n);
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
    }
    // Report the failure of the lowest v0 index so errors are deterministic too.
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return {cfg, tgrid.samples(), std::move(panels)};
}

} // namespace ststoa
