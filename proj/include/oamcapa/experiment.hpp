// SPDX-License-Identifier: Apache-2.0
//
// Declarative experiment configs and the sweep runner behind the CLI.

#pragma once

#include "oamcapa/metrics.hpp"
#include "oamcapa/result_table.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace oamcapa {

enum class ExperimentKind {
    SeVsSnr,
    SeVsDistance,
    EdofVsDistance,
    EdofVsElements,
    LinkBer,
    Convergence,
};

const char* to_string(ExperimentKind kind);
ExperimentKind parse_experiment(const std::string& name);

enum class GainScaling {
    Raw,        // physical |h_mm|^2, SNR = P_t / (M sigma^2)
    Normalized, // gains rescaled so that gamma = M
};

// Invalid configuration; `field()` names the offending key.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string field, const std::string& message);
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

// A UCA element count of 0 stands for the half-wavelength-spaced count.
inline constexpr int kHalfWavelengthElements = 0;

// All lengths in metres. Wavelength-relative inputs are converted against
// `frequency_hz` when the config is loaded.
struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::SeVsSnr;
    double frequency_hz = 5.8e9;
    std::vector<double> frequencies_hz;  // edof_vs_distance bands
    double tx_radius_m = 0.0;
    double rx_radius_m = 0.0;
    std::vector<double> radii_m;         // edof_vs_distance radius sweep
    std::vector<double> distances_m;
    std::vector<double> snr_db;
    std::vector<int> capa_modes;         // mode counts, centred sets
    std::vector<int> uca_elements;       // UCA series in SE experiments
    std::vector<int> element_counts;     // edof_vs_elements sweep
    std::vector<int> quadrature_sweep;   // convergence sweep
    int quadrature = 0;                  // 0 = automatic per series
    Polarization polarization = Polarization::Azimuthal;
    GainScaling scaling = GainScaling::Raw;
    ApertureDimension rayleigh_dimension = ApertureDimension::Diameter;
    std::uint64_t seed = 1;
    int symbols = 100000;                // link_ber symbols per mode and SNR point
    std::filesystem::path output_dir = ".";
    bool plot = true;

    double wavelength() const;
    // Throws ConfigError on the first violated constraint.
    void validate() const;
    // Resolved key/value listing, sufficient to re-run the experiment.
    std::vector<std::pair<std::string, std::string>> describe() const;
};

ExperimentConfig default_config(ExperimentKind kind);

// Command-line overrides; unset members leave the config untouched.
struct ConfigOverrides {
    std::optional<ExperimentKind> experiment;
    std::optional<std::filesystem::path> output_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> quadrature;
    std::optional<GainScaling> scaling;
    std::optional<bool> plot;
};

// Reads an INI-style config ([section] / key = value). The experiment named
// in the file (or in `overrides`) selects the defaults the file then edits.
// Throws ConfigError on unknown keys or invalid values.
ExperimentConfig load_config(const std::filesystem::path& path,
                             const ConfigOverrides& overrides = {});
ExperimentConfig load_config_string(const std::string& text,
                                    const ConfigOverrides& overrides = {});
ExperimentConfig resolve_config(ExperimentKind kind, const ConfigOverrides& overrides);

struct ExperimentResult {
    ResultTable table;
    std::vector<PlotSpec> plots;
    // Rows carrying an SE value whose se <= se_upper_bound + 1e-9 check failed.
    int bound_violations = 0;
    double runtime_s = 0.0;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Writes <experiment>.csv (and one .svg per plot when cfg.plot). Returns the
// paths written. Throws std::runtime_error when the directory is not writable.
std::vector<std::filesystem::path> write_outputs(const ExperimentConfig& cfg,
                                                 const ExperimentResult& result);

} // namespace oamcapa
