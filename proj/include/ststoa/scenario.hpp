#pragma once

// Scenario configuration, execution and file output for the command-line tool.

#include "ststoa/oracle.hpp"
#include "ststoa/packet.hpp"
#include "ststoa/sc_evolution.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace ststoa {

enum class Model { Sts, KijowskiFree, KijowskiTransmitted, FluxOracle };

std::string to_string(Model m);
/// Accepts sts, kijowski_free, kijowski_transmitted, flux_oracle.
Model parse_model(const std::string& name);

/// How the transmitted packet enters the Kijowski form. Only the full
/// amplitude T(P) is implemented; PhaseOnly (T/|T|) is a named placeholder
/// and rejected at parse time.
enum class TransmittedAmplitude { Full, PhaseOnly };

struct ScenarioConfig {
    GaussianPacketSpec packet;
    /// Square barrier (0, barrier_length) evaluated once per entry of v0.
    double barrier_length = 10.0;
    std::vector<double> v0 = {0.0, 1.125, 1.8, 4.5};
    double detector_x = 50.0;

    std::size_t egrid_n = 1u << 14;
    double egrid_n_sigma = 10.0;
    double t_min = 0.0;
    double t_max = 1000.0;
    std::size_t t_n = 1u << 12;

    std::vector<Model> models = {Model::Sts, Model::KijowskiTransmitted};
    Propagation method;
    InitialAmplitudeModel initial_amplitude = InitialAmplitudeModel::MatchStandardQm;
    TransmittedAmplitude transmitted_amplitude = TransmittedAmplitude::Full;
    GridSolverConfig oracle = GridSolverConfig::fig2();

    /// Right edge of the plotted window; the computed window is [t_min, t_max].
    double plot_t_max = 150.0;

    std::optional<std::string> out_csv;
    std::optional<std::string> out_svg;
    std::optional<std::string> out_json;

    /// Parameters of the tunnelling-time figure.
    static ScenarioConfig fig2();

    /// Throws ConfigError naming the offending field.
    void validate() const;
    bool has(Model m) const;
    EnergyGrid energy_grid() const;
    TimeGrid time_grid() const;

    bool operator==(const ScenarioConfig&) const = default;
};

/// Parses a config document. "preset": "fig2" seeds every field; explicit
/// fields override it. Without a preset, packet, potential and detector_x
/// are required. Unknown keys are rejected.
ScenarioConfig parse_config(const nlohmann::json& doc);
ScenarioConfig load_config(const std::filesystem::path& path);
/// Fully explicit document (no preset) that parses back to an equal config.
nlohmann::json to_json(const ScenarioConfig& cfg);

/// Parses "closed" or "slices:<n>".
Propagation parse_method(const std::string& text);
std::string to_string(const Propagation& method);

/// Results for one barrier height.
struct PanelResult {
    double v0 = 0.0;
    std::optional<TOADistribution> sts;
    std::optional<TOADistribution> kijowski_transmitted;
    std::optional<TOADistribution> kijowski_free;
    /// Raw probability current at the detector resampled on the time grid.
    std::optional<std::vector<double>> flux;
    std::optional<double> flux_integral;
    /// model_distance(sts, kijowski_transmitted) when both are present.
    std::optional<double> distance;
};

struct ResultBundle {
    ScenarioConfig config;
    std::vector<double> t;
    std::vector<PanelResult> panels;
};

/// Worker cap from STS_TOA_THREADS (unset or invalid: hardware concurrency).
std::size_t worker_count();

/// Evaluates every selected model at every v0. Panels come back in v0 order
/// whatever the worker count.
ResultBundle run_scenario(const ScenarioConfig& cfg);

/// Writes the density table. One panel goes to `path`; several panels go to
/// `<stem>_v0_<value><ext>` next to it. Returns the files written.
std::vector<std::filesystem::path> emit_csv(const ResultBundle& bundle,
                                            const std::filesystem::path& path);
/// One panel per v0: solid STS, dashed transmitted Kijowski, dotted free
/// Kijowski, thin flux.
void emit_svg(const ResultBundle& bundle, const std::filesystem::path& path);
/// Summary: config, units, per-panel arrival probabilities, means, peaks,
/// distances.
nlohmann::json summary_json(const ResultBundle& bundle);

/// Decimal with 17 significant digits (general format), locale independent.
std::string format_double(double v);

} // namespace ststoa
