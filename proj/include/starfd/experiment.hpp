// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "starfd/config.hpp"
#include "starfd/keyvalue.hpp"
#include "starfd/optimize.hpp"
#include "starfd/rates_mc.hpp"

namespace starfd {

enum class SweepVariable { snr_db, n_elements, tau, xi, beta, target_rate };
enum class Design { pgam, aligned, random };
enum class PowerScheme { fixed, closed_form, split_targets };

const char* to_string(SweepVariable v);
const char* to_string(Design d);
const char* to_string(PowerScheme p);

struct ExperimentSpec {
    std::string name;
    SystemConfig base;
    // Transmit power: snr_db relative to the noise, unless tx_power_dbw is set.
    double noise_dbw = 0.0;
    double snr_db = 30.0;
    std::optional<double> tx_power_dbw;
    double alpha1 = 0.2;
    double ul_share_u1 = 0.5;

    SweepVariable sweep = SweepVariable::snr_db;
    std::vector<double> grid;
    std::vector<double> target_dl_cases;  // outer loop over edge DL targets when non-empty
    std::vector<Design> designs;
    double rho_t = 0.5;  // amplitude of the aligned and random designs, and PGAM's start
    PowerScheme power_scheme = PowerScheme::fixed;
    bool cf = true;
    bool mc = false;
    std::size_t trials = 100000;
    std::uint64_t seed = 1;
    PgamOptions pgam;
    std::filesystem::path output;
    unsigned threads = 0;  // 0: hardware concurrency

    // Every key with its resolved text; excludes threads.
    KeyValues resolved;
};

// Defaults, then the preset named by a `preset` key, then the given entries.
// Throws ValidationError listing every offending key.
ExperimentSpec resolve_experiment(const KeyValues& given);
ExperimentSpec load_experiment(const std::filesystem::path& path);
// The resolved system configuration of a spec file.
SystemConfig validate_config(const std::filesystem::path& path);

// Config and powers at one grid point, before any design-specific allocation.
struct GridPoint {
    SystemConfig config;
    double total_power = 0.0;
};
GridPoint grid_point(const ExperimentSpec& spec, double value, std::optional<double> target_dl);

struct ResultRow {
    std::optional<double> target_dl;
    double value = 0.0;
    Design design = Design::aligned;
    RateReport report;
    PowerConfig power;
};

struct TauSummary {
    double target_dl = 0.0;
    Design design = Design::aligned;
    Estimator estimator = Estimator::cf;
    double argmax_tau = 0.0;
    double max_sum = 0.0;
};

struct ExperimentResult {
    std::vector<ResultRow> rows;  // grid order, then design, then estimator
    std::vector<TauSummary> summary;  // tau sweeps only
    std::string csv;
    std::string summary_csv;
    std::string manifest;
};

// Runs every grid point; no files are touched.
ExperimentResult execute(const ExperimentSpec& spec);
// execute() plus the CSV, the manifest (<output>.manifest) and, for tau
// sweeps, the argmax table (<output>.summary.csv).
ExperimentResult run_experiment(const ExperimentSpec& spec);

std::vector<std::string> preset_names();
std::optional<std::string> preset_text(std::string_view name);

}  // namespace starfd
