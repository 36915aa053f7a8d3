// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <span>
#include <utility>
#include <vector>

#include "starfd/channel.hpp"
#include "starfd/rates_cf.hpp"

namespace starfd {

// ok plus a numeric margin: slack for inequalities (negative when violated),
// worst deviation for equalities.
struct ConstraintCheck {
    bool ok = false;
    double margin = 0.0;
};

struct ConstraintReport {
    ConstraintCheck power_budget;    // C.1
    ConstraintCheck sic_order;       // C.2, in expectation
    ConstraintCheck dl_target;       // C.3
    ConstraintCheck ul_target;       // C.3
    ConstraintCheck energy_split;    // C.4
    ConstraintCheck unit_modulus;    // C.5
    std::array<ConstraintCheck, 4> noma_benefit;  // u1d, u2d, u1u, u2u

    bool feasible() const;  // C.1 to C.5
};

enum class Termination { converged, max_iters };

const char* to_string(Termination t);

struct PgamOptions {
    double mu = 0.5;
    double alpha = 1.0;  // extra scale on the amplitude step
    double eps = 1e-6;
    int max_iters = 200;
    double fd_step = 1e-6;
    bool backtracking = true;  // false: fixed step
};

struct OptimizationResult {
    StarRisState state;
    PowerConfig power;
    std::vector<double> trace;  // objective before the first and after every iteration
    Termination termination = Termination::max_iters;
    ConstraintReport constraints;
};

// Unit-modulus projection; a zero entry maps to phase 0.
std::vector<double> project_phases(std::span<const cplx> theta_raw);
// Per-element Euclidean projection onto {rho_t + rho_r = 1, rho >= 0}.
std::pair<std::vector<double>, std::vector<double>> project_amplitudes(
    std::span<const double> rho_t_raw, std::span<const double> rho_r_raw);

// Projected gradient ascent on the closed-form weighted sum rate.
OptimizationResult pgam(const CfModel& model, const PowerConfig& pw, const StarRisState& init,
                        const PgamOptions& options = {});
OptimizationResult pgam(const SystemConfig& config, const PowerConfig& pw,
                        const StarRisState& init, const PgamOptions& options = {});

// Transmit side phased towards the edge UL user, reflection side towards the
// edge DL user, each through the BS-RIS link.
std::pair<std::vector<double>, std::vector<double>> suboptimal_phases(const GeometryAngles& angles,
                                                                      std::size_t n,
                                                                      double d_over_lambda);
StarRisState aligned_state(const SystemConfig& config, double rho_t = 0.5);

// Bidirectional variant: picks between the BS-relay alignment above and the
// user-pair alignment (u2u to u1d, u1u to u2d) by the larger combined SINR
// part. Ties go to the BS-relay alignment.
StarRisState aligned_state_bidirectional(const CfModel& model, const PowerConfig& pw,
                                         double rho_t = 0.5);

StarRisState random_state(std::size_t n, Rng& rng, double rho_t = 0.5);

// Solves the edge DL target, the strong user's decoding of the edge stream and
// the edge UL target with equality, spending all of P_t. Targets are in
// bits/s/Hz. Throws InfeasibleError when a power comes out negative and
// DegenerateError when the system has no unique solution.
PowerConfig power_allocation_closed_form(const CfRateInputs& in, const PowerConfig& base,
                                         double total, double target_dl, double target_ul);
PowerConfig power_allocation_closed_form(const CfModel& model, const StarRisState& ris,
                                         const PowerConfig& base, double total, double target_dl,
                                         double target_ul);

// P_b = tau P_t and P_u = (1 - tau) P_t. Edge users get what their targets
// need, capped at the budget of their direction; the center users get the rest.
PowerConfig power_allocation_split(const CfRateInputs& in, const PowerConfig& base, double total,
                                   double tau, double target_dl, double target_ul);

ConstraintReport validate_constraints(const CfModel& model, const StarRisState& ris,
                                      const PowerConfig& pw, const RateReport& report);
ConstraintReport validate_constraints(const SystemConfig& config, const StarRisState& ris,
                                      const PowerConfig& pw, const RateReport& report);

// PGAM over the surface with the closed-form powers re-solved at every
// evaluation, so the targets hold along the whole path. The start state must
// admit a feasible allocation.
OptimizationResult optimize_joint(const CfModel& model, const PowerConfig& base,
                                  const StarRisState& init, double total, double target_dl,
                                  double target_ul, const PgamOptions& options = {});

}  // namespace starfd
