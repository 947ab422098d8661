#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mtc/braiding.hpp"
#include "mtc/spectrum.hpp"

namespace mtc {

struct ConfigError : InvalidInput {
    using InvalidInput::InvalidInput;
};

struct ChainConfig {
    int n_sites = 0;
    double period = 1.0;
    double mu1T = 0, mu2T = 0;
    Complex JT = 0, DeltaT = 0;
    double h2_hoppingT = 0;

    ChainSpec spec() const;
};

struct ScheduleConfig {
    int periods_per_step = 200;
    std::string f_profile = "cosine";  // cosine | mixed
    std::string deformations = "none"; // none | reference
};

struct DisorderConfig {
    double d_hoppingT = 0.1, d_pairingT = 0.1, d_mu1T = 0.1, d_mu2T = 0.1;
    double h2_meanT = 0.025, d_h2T = 0.01;
    int realizations = 100;
};

struct SweepConfig {
    std::string parameter = "mu2";
    double start = 0, stop = 0;
    int points = 101;
};

struct MultiwireConfig {
    int wires = 2;
    int index = 0;
    bool inter_wire_coupling = true;
};

struct OracleConfig {
    int max_sites = 6;
    int seeds = 10;
    int magic_sites = 4;
    int magic_periods_per_step = 100;
};

struct RunConfig {
    std::string experiment;
    std::optional<ChainConfig> chain;
    ScheduleConfig schedule;
    DisorderConfig disorder;
    SweepConfig sweep;
    MultiwireConfig multiwire;
    OracleConfig oracle;
    int dtc_n_max = 200;
    int bulk_k_points = 201;
    EdgeModeOptions edge;
    double leakage_abort = 0.05;
    bool instantaneous_leakage = true;
    bool state_overlap = true;
    std::string output_dir;
    std::optional<std::uint64_t> master_seed;
    int record_every = 1;
    int threads = 1;
    bool quiet = false;
};

bool is_stochastic(const std::string& experiment);

// Accepts a config document or a manifest written by run().
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::filesystem::path& path);

// Fully resolved config as JSON text (the manifest's "config" entry).
std::string resolved_config_json(const RunConfig& cfg);

struct RunOutcome {
    int exit_code = 0;
    std::vector<std::string> warnings;
    std::vector<std::pair<std::string, std::string>> summary;
};

RunOutcome run(const RunConfig& cfg);

struct ExperimentInfo {
    std::string name;
    std::string reference;
    std::string description;
};

std::vector<ExperimentInfo> list_experiments();
std::string format_catalog();

std::string format_number(double x);

}  // namespace mtc
