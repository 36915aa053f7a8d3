// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <span>
#include <utility>

#include "starfd/channel.hpp"
#include "starfd/config.hpp"
#include "starfd/rates_mc.hpp"

namespace starfd {

// Path-loss factors of the closed forms: disk expectations, or plain (1 + d)^-m
// values when the users sit at known positions.
struct PathlossMoments {
    double direct_u1d = 0.0;  // BS -> u1d
    double direct_u1u = 0.0;  // BS -> u1u
    double user_user = 0.0;   // u1u -> u1d
    double ris_u1d = 0.0;     // RIS -> u1d
    double ris_u1u = 0.0;
    double ris_u2d = 0.0;
    double ris_u2u = 0.0;
    double bs_ris = 0.0;

    static PathlossMoments disk_averaged(const SystemConfig& config);
    static PathlossMoments fixed(const LinkPathloss& l);
};

// Rician mixing of one cascade: E|g_x Theta g_y|^2 = varpi * xi + varpi_hat.
struct PairMixing {
    double varpi = 0.0;
    double varpi_hat = 0.0;
};

// Index of each cascade in MomentSet::xi and MomentSet::mix.
enum CascadeIndex : int {
    u1d_br = 1,
    u1d_u1u = 2,
    u1d_u2u = 3,
    u2d_br = 4,
    u2d_u1u = 5,
    u2d_u2u = 6,
    br_u1u = 7,
    br_u2u = 8,
    br_loop = 9,
};

struct MomentSet {
    PathlossMoments pathloss;
    double upsilon = 0.0;
    double rho_2pt = 0.0;
    std::array<double, 10> xi{};       // xi[1..9]
    std::array<PairMixing, 9> mix{};   // mix[1..8]
    cplx zeta;                         // LoS loop gain
    double sum_rho_sq_t = 0.0;
    double sum_rho_sq_r = 0.0;
    cplx sum_coeff_t;                  // sum_n rho_n e^{j phi_n}, transmit side
    cplx cross_phase_t;                // sum over n1 != n2 of c_n1 conj(c_n2)
    double loop_second_moment = 0.0;   // E|g_br Theta_t g_br^H|^2
};

struct UserTerms {
    double x1 = 0.0;
    double y1 = 0.0;
    double y2 = 0.0;
};

struct CfRateInputs {
    UserTerms u1d;
    UserTerms u2d;
    UserTerms u1u;
    UserTerms u2u;
};

// Closed-form evaluator. The path-loss moments do not depend on the STAR-RIS
// state and are computed once.
class CfModel {
public:
    explicit CfModel(SystemConfig config);
    CfModel(SystemConfig config, const PathlossMoments& pathloss);

    const SystemConfig& config() const { return config_; }
    const PathlossMoments& pathloss() const { return pathloss_; }

    MomentSet moments(const StarRisState& ris) const;
    // Moments for arbitrary per-element coefficients rho * theta on each side.
    MomentSet moments(std::span<const cplx> ct, std::span<const cplx> cr) const;
    CfRateInputs inputs(const StarRisState& ris, const Simplifications& simplify = {}) const;
    CfRateInputs inputs(std::span<const cplx> ct, std::span<const cplx> cr) const;
    RateReport rates(const StarRisState& ris, const PowerConfig& pw,
                     const Simplifications& simplify = {}) const;
    double objective(const StarRisState& ris, const PowerConfig& pw) const;
    double objective(std::span<const cplx> ct, std::span<const cplx> cr, const PowerConfig& pw) const;

private:
    SystemConfig config_;
    PathlossMoments pathloss_;
    LosVectors los_;
};

CfRateInputs rate_inputs(const MomentSet& m, const Simplifications& simplify = {});

// Closed-form SINRs, the arguments of log2(1 + .) in every rate.
struct SinrSet {
    double u1d = 0.0;
    double u2d = 0.0;
    double u1u = 0.0;
    double u2u = 0.0;
    double u1d_to_u2d = 0.0;
};
SinrSet cf_sinrs(const CfRateInputs& in, const PowerConfig& pw);

// The two terms combined at each bidirectional receiver: the user-to-user
// path through the RIS and the stream relayed by the BS.
struct BidirectionalParts {
    double center_direct = 0.0;
    double center_relay = 0.0;
    double edge_direct = 0.0;
    double edge_relay = 0.0;
};
BidirectionalParts cf_bidirectional_parts(const CfRateInputs& in, const PowerConfig& pw);
// Every closed-form rate from the deterministic terms.
RateSet cf_rate_set(const CfRateInputs& in, const PowerConfig& pw);

MomentSet compute_moments(const SystemConfig& config, const StarRisState& ris);

double cf_rate_dl_center(const SystemConfig& config, const StarRisState& ris, const PowerConfig& pw);
double cf_rate_dl_edge(const SystemConfig& config, const StarRisState& ris, const PowerConfig& pw);
double cf_rate_ul_center(const SystemConfig& config, const StarRisState& ris, const PowerConfig& pw);
double cf_rate_ul_edge(const SystemConfig& config, const StarRisState& ris, const PowerConfig& pw);
double cf_rate_strong_decodes_weak(const SystemConfig& config, const StarRisState& ris,
                                   const PowerConfig& pw);
// (R_c, R_e)
std::pair<double, double> cf_rates_bidirectional(const SystemConfig& config,
                                                 const StarRisState& ris, const PowerConfig& pw);
RateReport cf_rates(const SystemConfig& config, const StarRisState& ris, const PowerConfig& pw);

// Center users on opposite sides of the BS at 2R/3, edge users likewise around the RIS.
UserPositions representative_positions(const CellGeometry& geometry);

// Reduced expressions: perfect SIC and SI cancellation, no RIS paths to the
// center users, users at the given positions.
RateReport cf_rates_simplified(const SystemConfig& config, const StarRisState& ris,
                               const PowerConfig& pw, const UserPositions& positions);

}  // namespace starfd
