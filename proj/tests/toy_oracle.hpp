#pragma once

#include <array>
#include <cmath>
#include <numbers>

#include "starfd/rates_cf.hpp"

namespace oracle {

// N = 4 toy whose objective is the edge DL rate alone, so only the reflection
// side matters.
inline starfd::SystemConfig pgam_toy() {
    starfd::SystemConfig cfg;
    cfg.n_elements = 4;
    cfg.weights = {0.0, 1.0, 0.0, 0.0, 0.0, 0.0};
    cfg.power.p_b1 = 20.0;
    cfg.power.p_b2 = 780.0;
    cfg.power.p_u1u = 50.0;
    cfg.power.p_u2u = 50.0;
    cfg.power.noise = {1e-7, 1e-7, 1e-7};
    return cfg;
}

// Exhaustive search over 16 phases and 11 amplitudes per reflecting element.
// A common phase rotation leaves every |cascade|^2 unchanged, so element 0 keeps
// phase 0.
inline double grid_search_edge_dl(const starfd::SystemConfig& cfg) {
    using starfd::cplx;
    constexpr int phases = 16, amps = 11, n = 4;
    const starfd::CfModel model(cfg);
    const auto& p = model.pathloss();
    const auto los = starfd::los_vectors(cfg);
    const auto& k = cfg.kappa;
    const auto& pw = cfg.power;
    auto mix = [](double kx, double ky) {
        const double ax = kx / (kx + 1), ay = ky / (ky + 1), bx = 1 / (kx + 1), by = 1 / (ky + 1);
        return std::array<double, 2>{ax * ay, ax * by + ay * bx + bx * by};
    };
    const auto m_br = mix(k.r_u2d, k.b_r), m_1u = mix(k.r_u2d, k.r_u1u), m_2u = mix(k.r_u2d, k.r_u2u);
    const double sx = p.bs_ris * p.ris_u2d, s1 = p.ris_u2d * p.ris_u1u, s2 = p.ris_u2d * p.ris_u2u;

    // contribution[element][amp][phase][link]
    static std::array<std::array<std::array<std::array<cplx, 3>, phases>, amps>, n> c;
    for (int e = 0; e < n; ++e)
        for (int a = 0; a < amps; ++a)
            for (int f = 0; f < phases; ++f) {
                const cplx coeff = std::polar(0.1 * a, 2 * std::numbers::pi * f / phases);
                c[e][a][f] = {los.r_u2d[e] * coeff * los.b_r[e], los.r_u2d[e] * coeff * los.r_u1u[e],
                              los.r_u2d[e] * coeff * los.r_u2u[e]};
            }
    double best = 0.0;
    for (int a0 = 0; a0 < amps; ++a0)
        for (int a1 = 0; a1 < amps; ++a1)
            for (int f1 = 0; f1 < phases; ++f1)
                for (int a2 = 0; a2 < amps; ++a2)
                    for (int f2 = 0; f2 < phases; ++f2) {
                        std::array<cplx, 3> partial;
                        for (int l = 0; l < 3; ++l)
                            partial[l] = c[0][a0][0][l] + c[1][a1][f1][l] + c[2][a2][f2][l];
                        const double sq = 0.01 * (a0 * a0 + a1 * a1 + a2 * a2);
                        for (int a3 = 0; a3 < amps; ++a3) {
                            const double s = sq + 0.01 * a3 * a3;
                            for (int f3 = 0; f3 < phases; ++f3) {
                                const auto& q = c[3][a3][f3];
                                const double x = sx * (m_br[0] * std::norm(partial[0] + q[0]) + m_br[1] * s);
                                const double y1 = s1 * (m_1u[0] * std::norm(partial[1] + q[1]) + m_1u[1] * s);
                                const double y2 = s2 * (m_2u[0] * std::norm(partial[2] + q[2]) + m_2u[1] * s);
                                const double sinr = pw.p_b2 * x /
                                    (pw.p_b1 * x + pw.p_u1u * y1 + pw.p_u2u * y2 + pw.noise.u2d);
                                best = std::max(best, sinr);
                            }
                        }
                    }
    return std::log2(1.0 + best);
}

}  // namespace oracle
