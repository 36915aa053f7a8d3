// SPDX-License-Identifier: Apache-2.0
#include <array>
#include <utility>

#include "starfd/experiment.hpp"

namespace starfd {

namespace {

// Each preset overrides the defaults; a user file overrides the preset.
constexpr std::array<std::pair<std::string_view, std::string_view>, 14> kPresets{{
    {"reference", R"(name = reference
sweep = snr_db
grid = 20, 30, 40
designs = aligned
estimators = both
trials = 100000
)"},
    {"snr_designs", R"(name = snr_designs
sweep = snr_db
grid = 0:5:50
designs = pgam, aligned, random
estimators = both
)"},
    {"snr_sic", R"(name = snr_sic
sweep = snr_db
grid = 0:5:50
sic_error = 0.01
designs = pgam
estimators = cf
)"},
    {"snr_si", R"(name = snr_si
sweep = snr_db
grid = 0:5:50
si_beta = 1
designs = pgam
estimators = cf
)"},
    {"elements", R"(name = elements
sweep = n_elements
grid = 16, 36, 64, 100
snr_db = 40
designs = aligned
estimators = cf
power_scheme = fixed
)"},
    {"tau_targets", R"(name = tau_targets
sweep = tau
grid = 0.01, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5, 0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95, 1
tx_power_dbw = 50
noise_dbw = -50
target_dl_cases = 6, 3
power_scheme = split_targets
designs = aligned
estimators = cf
)"},
    {"bidir_elements", R"(name = bidir_elements
scenario = bidirectional
sweep = n_elements
grid = 4, 9, 16, 25, 36, 49, 64, 81, 100
snr_db = 40
designs = aligned
estimators = cf
)"},
    {"bidir_elements_sic", R"(name = bidir_elements_sic
scenario = bidirectional
sweep = n_elements
grid = 4, 9, 16, 25, 36, 49, 64, 81, 100
snr_db = 40
sic_error = 0.5
designs = aligned
estimators = cf
)"},
    {"bidir_elements_si", R"(name = bidir_elements_si
scenario = bidirectional
sweep = n_elements
grid = 4, 9, 16, 25, 36, 49, 64, 81, 100
snr_db = 40
si_beta = 1.25
si_lambda = 0
designs = aligned
estimators = cf
)"},
    {"bidir_snr", R"(name = bidir_snr
scenario = bidirectional
sweep = snr_db
grid = 0:5:50
alpha1 = 0.1
designs = pgam, aligned, random
estimators = cf
)"},
    {"bidir_tau_a", R"(name = bidir_tau_a
scenario = bidirectional
sweep = tau
grid = 0.05:0.05:0.95
tx_power_dbw = 40
alpha1 = 0.1
ul_share_u1 = 0.5
designs = aligned
estimators = cf
)"},
    {"bidir_tau_b", R"(name = bidir_tau_b
scenario = bidirectional
sweep = tau
grid = 0.05:0.05:0.95
tx_power_dbw = 40
alpha1 = 0.4
ul_share_u1 = 0.5
designs = aligned
estimators = cf
)"},
    {"bidir_tau_c", R"(name = bidir_tau_c
scenario = bidirectional
sweep = tau
grid = 0.05:0.05:0.95
tx_power_dbw = 40
alpha1 = 0.1
ul_share_u1 = 0.6
designs = aligned
estimators = cf
)"},
    {"quick", R"(name = quick
sweep = snr_db
grid = 10, 20
designs = aligned, random
estimators = both
trials = 2000
)"},
}};

}  // namespace

std::vector<std::string> preset_names() {
    std::vector<std::string> out;
    for (const auto& [name, text] : kPresets) out.emplace_back(name);
    return out;
}

std::optional<std::string> preset_text(std::string_view name) {
    for (const auto& [n, text] : kPresets)
        if (n == name) return std::string(text);
    return std::nullopt;
}

}  // namespace starfd
