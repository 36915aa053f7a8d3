// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

#include "starfd/channel.hpp"
#include "starfd/config.hpp"

namespace starfd {

// Model reductions used by the simplified expressions.
struct Simplifications {
    bool no_center_ris_paths = false;  // drop RIS cascades in A_u1d, C_u1d and A_u1u
    bool no_bs_loop = false;           // drop the BS-RIS-BS loop C_u1u
};

// Effective squared channel gains, path loss included.
struct LinkGains {
    double A_u1d = 0.0;  // BS -> u1d
    double C_u1d = 0.0;  // u1u -> u1d
    double D_u1d = 0.0;  // u2u -> u1d
    double A_u2d = 0.0;  // BS -> u2d
    double C_u2d = 0.0;  // u1u -> u2d
    double D_u2d = 0.0;  // u2u -> u2d
    double A_u1u = 0.0;  // u1u -> BS
    double B_u1u = 0.0;  // u2u -> BS
    double C_u1u = 0.0;  // BS -> RIS -> BS loop

    double A_u2u() const { return B_u1u; }
    double B_u2u() const { return A_u1u; }
    double C_u2u() const { return C_u1u; }
};

LinkGains link_gains(const ChannelRealization& ch, const StarRisState& ris,
                     const Simplifications& simplify = {});
LinkGains link_gains(const ChannelRealization& ch, std::span<const cplx> coeff_t,
                     std::span<const cplx> coeff_r, const Simplifications& simplify = {});

double sinr_dl_center(const LinkGains& g, const PowerConfig& pw);
double sinr_dl_edge(const LinkGains& g, const PowerConfig& pw);
double sinr_ul_center(const LinkGains& g, const PowerConfig& pw, double si_draw);
double sinr_ul_edge(const LinkGains& g, const PowerConfig& pw, double si_draw);
double sinr_strong_decodes_weak(const LinkGains& g, const PowerConfig& pw);

double sinr_dl_center(const ChannelRealization& ch, const StarRisState& ris, const PowerConfig& pw);
double sinr_dl_edge(const ChannelRealization& ch, const StarRisState& ris, const PowerConfig& pw);
double sinr_ul_center(const ChannelRealization& ch, const StarRisState& ris, const PowerConfig& pw,
                      double si_draw);
double sinr_ul_edge(const ChannelRealization& ch, const StarRisState& ris, const PowerConfig& pw,
                    double si_draw);
double rate_strong_decodes_weak(const ChannelRealization& ch, const StarRisState& ris,
                                const PowerConfig& pw);

struct BidirectionalRates {
    double combined_center = 0.0;  // R_uc, MRC of the RIS relay and the BS relay
    double combined_edge = 0.0;    // R_ue
    double center = 0.0;           // min(R_u2u, R_uc)
    double edge = 0.0;             // min(R_u1u, R_ue)
};

// Instantaneous end-to-end rates; si_draw is |s|^2 of the residual self-interference.
BidirectionalRates rates_bidirectional(const LinkGains& g, const PowerConfig& pw, double si_draw);
BidirectionalRates rates_bidirectional(const ChannelRealization& ch, const StarRisState& ris,
                                       const PowerConfig& pw, double si_draw);

bool noma_beneficial(double gamma_noma, double gamma_oma);

enum class Estimator { cf, mc };
const char* to_string(Estimator e);

// Every rate the model defines, bits/s/Hz.
struct RateSet {
    double u1d = 0.0;
    double u2d = 0.0;
    double u1u = 0.0;
    double u2u = 0.0;
    double u1d_to_u2d = 0.0;
    double uc = 0.0;
    double ue = 0.0;
    double c = 0.0;
    double e = 0.0;
};

struct RateReport {
    Scenario scenario = Scenario::noma_pair;
    Estimator estimator = Estimator::cf;
    RateSet rates;
    RateSet stderr_;  // zero for closed forms
    double weighted_sum = 0.0;
    double weighted_sum_stderr = 0.0;
    std::size_t trials = 0;
};

double weighted_sum(const RateSet& r, const Weights& w, Scenario scenario);

struct McOptions {
    unsigned threads = 1;
    Simplifications simplify;
    std::optional<UserPositions> fixed_positions;
};

// Mean of log2(1 + SINR) over positions, fading and residual SI. Trial t uses
// the stream derive_seed(seed, t); the reduction runs in trial order.
RateReport ergodic_rate_mc(const SystemConfig& config, const StarRisState& ris,
                           const PowerConfig& pw, std::size_t trials, std::uint64_t seed,
                           const McOptions& options = {});

}  // namespace starfd
