#pragma once

// Config-driven experiment commands behind the CLI. One JSON document
// describes the model, the state and per-command options; every command
// writes CSV/JSON files plus a manifest.json into the output directory.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pmtomo/grid.hpp"
#include "pmtomo/hilbert.hpp"
#include "pmtomo/models.hpp"

namespace pmtomo {

struct DeconvSettings {
    double eps = 1e-8;
    int order = 20;
};

struct HusimiSettings {
    std::optional<double> r_max;      ///< default sqrt(dim) + 6
    std::optional<std::size_t> r_points; ///< default 40 r_max + 1
    std::size_t theta_points = 64;
    int max_order = 6;                ///< reconstruct rho_{n,m} with n + m <= max_order
    double r_fit = 1.5;
};

struct LemmaSettings {
    std::size_t constructions = 100;
    std::size_t attempts = 1000;
    bool log = true;
};

struct ExperimentConfig {
    nlohmann::json source; ///< the document as read
    std::optional<ModelSpec> model;
    std::optional<StateVector> state;
    int k_max = 8;
    std::size_t samples = 0;
    std::uint64_t seed = 1;
    bool seed_set = false; ///< seed came from the config or --seed
    std::optional<Grid> grid;
    std::filesystem::path outputs = "out";
    DeconvSettings deconv;
    HusimiSettings husimi;
    LemmaSettings lemma;
    std::vector<int> criteria; ///< report: empty means all
    std::optional<std::size_t> statistical_samples;
};

/// Throws ConfigError on malformed JSON, unknown descriptors, or parameters
/// rejected by the library's constructors.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);

ModelSpec parse_model(const nlohmann::json& j);
StateVector parse_state(const nlohmann::json& j);

inline const std::vector<std::string> kCommands = {"simulate", "recover", "deconvolve", "husimi", "lemma", "report"};

struct CommandResult {
    std::vector<std::string> files; ///< written, relative to the output directory
    bool success = true;            ///< false when a report contains failing checks
};

/// Runs `command` and writes its outputs and manifest.json into config.outputs.
CommandResult run_command(const std::string& command, const ExperimentConfig& config);

} // namespace pmtomo
