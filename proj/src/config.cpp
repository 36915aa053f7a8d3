// SPDX-License-Identifier: Apache-2.0
#include "starfd/config.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "starfd/errors.hpp"

namespace starfd {

Direction Direction::degrees(double azimuth_deg, double elevation_deg) {
    constexpr double k = std::numbers::pi / 180.0;
    return {azimuth_deg * k, elevation_deg * k};
}

double PowerConfig::si_variance() const { return si_beta * std::pow(p_b(), si_lambda); }

void PowerConfig::set_split(double total_power, double dl_share, double alpha_1,
                            double ul_share_u1) {
    total = total_power;
    tau = dl_share;
    const double pb = dl_share * total_power;
    const double pu = total_power - pb;
    p_b1 = alpha_1 * pb;
    p_b2 = pb - p_b1;
    p_u1u = ul_share_u1 * pu;
    p_u2u = pu - p_u1u;
}

namespace {

void collect(std::vector<std::string>& problems, bool ok, const char* message) {
    if (!ok) problems.emplace_back(message);
}

std::vector<std::string> power_problems(const PowerConfig& p) {
    std::vector<std::string> out;
    collect(out, std::isfinite(p.total) && p.total >= 0.0, "total power must be non-negative");
    collect(out, p.tau > 0.0 && p.tau <= 1.0, "tau must lie in (0, 1]");
    collect(out, p.p_b1 >= 0.0 && p.p_b2 >= 0.0 && p.p_u1u >= 0.0 && p.p_u2u >= 0.0,
            "powers must be non-negative");
    collect(out, p.p_b() + p.p_u() <= p.total * (1.0 + 1e-9) + 1e-300,
            "allocated powers exceed the total budget");
    collect(out, p.sic_error >= 0.0 && p.sic_error <= 1.0, "sic_error must lie in [0, 1]");
    collect(out, p.si_beta >= 0.0, "si_beta must be non-negative");
    collect(out, p.si_lambda >= 0.0, "si_lambda must be non-negative");
    collect(out, p.noise.u1d > 0.0 && p.noise.u2d > 0.0 && p.noise.b > 0.0,
            "noise powers must be positive");
    collect(out, p.target_dl >= 0.0 && p.target_ul >= 0.0, "target rates must be non-negative");
    return out;
}

}  // namespace

void PowerConfig::validate() const {
    auto problems = power_problems(*this);
    if (!problems.empty()) throw ValidationError(std::move(problems));
}

void SystemConfig::validate() const {
    std::vector<std::string> problems;
    try {
        geometry.validate();
    } catch (const ValidationError& e) {
        problems = e.problems();
    }
    for (auto& p : power_problems(power)) problems.push_back(std::move(p));
    collect(problems,
            kappa.b_r >= 0.0 && kappa.r_u1d >= 0.0 && kappa.r_u2d >= 0.0 && kappa.r_u1u >= 0.0 &&
                kappa.r_u2u >= 0.0,
            "Rician factors must be non-negative");
    collect(problems, angles.d_over_lambda > 0.0, "d_over_lambda must be positive");
    for (const Direction& d : {angles.b_r, angles.r_u1d, angles.r_u2d, angles.r_u1u, angles.r_u2u})
        collect(problems, std::isfinite(d.azimuth) && std::isfinite(d.elevation),
                "angles must be finite");
    collect(problems, n_elements >= 1, "n_elements must be at least 1");
    collect(problems, quad_nodes >= 8, "quad_nodes must be at least 8");
    collect(problems,
            weights.u1d >= 0.0 && weights.u2d >= 0.0 && weights.u1u >= 0.0 && weights.u2u >= 0.0 &&
                weights.c >= 0.0 && weights.e >= 0.0,
            "weights must be non-negative");
    if (!problems.empty()) throw ValidationError(std::move(problems));
}

const char* to_string(Scenario s) {
    return s == Scenario::noma_pair ? "noma" : "bidirectional";
}

}  // namespace starfd
