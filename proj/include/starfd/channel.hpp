// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "starfd/config.hpp"
#include "starfd/geometry.hpp"
#include "starfd/random.hpp"

namespace starfd {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

enum class Side { transmit, reflect };

// Energy-splitting STAR-RIS configuration.
struct StarRisState {
    std::vector<double> rho_t;
    std::vector<double> rho_r;
    std::vector<double> phi_t;
    std::vector<double> phi_r;

    // Zero phases, rho_t on every element and 1 - rho_t on the reflection side.
    static StarRisState uniform(std::size_t n, double rho_t = 0.5);

    std::size_t size() const { return rho_t.size(); }
    const std::vector<double>& rho(Side s) const { return s == Side::transmit ? rho_t : rho_r; }
    const std::vector<double>& phi(Side s) const { return s == Side::transmit ? phi_t : phi_r; }
    // rho_n e^{j phi_n} for one side.
    CVec coefficients(Side s) const;
    // max_n |rho_t + rho_r - 1|
    double split_violation() const;
    // Throws std::invalid_argument on size mismatch, negative or non-finite entries,
    // or a split violation above 1e-9.
    void validate() const;
};

// Grid coordinates of element i: planar for square N, linear (y = 0) otherwise.
struct ElementPosition {
    double x = 0.0;
    double y = 0.0;
};
ElementPosition element_position(std::size_t n, std::size_t i);

CVec steering_vector(std::size_t n, Direction dir, double d_over_lambda);

struct RicianSpec {
    double kappa = 0.0;
    CVec los;  // unit-modulus entries
};

CVec sample_rician(const RicianSpec& spec, std::size_t n, Rng& rng);

// sum_n g_out[n] rho_n e^{j phi_n} g_in[n]
cplx star_cascade(std::span<const cplx> g_out, const StarRisState& state, Side side,
                  std::span<const cplx> g_in);
cplx star_cascade(std::span<const cplx> g_out, std::span<const cplx> coeffs,
                  std::span<const cplx> g_in);

// Deterministic LoS parts: a(b_r) into the RIS, conj(a(r_u)) out of it.
struct LosVectors {
    CVec b_r;
    CVec r_u1d;
    CVec r_u2d;
    CVec r_u1u;
    CVec r_u2u;
};

LosVectors los_vectors(const SystemConfig& config);

struct UserPositions {
    UserPosition u1d{0.0, 0.0, Region::center};
    UserPosition u1u{0.0, 0.0, Region::center};
    UserPosition u2d{0.0, 0.0, Region::edge};
    UserPosition u2u{0.0, 0.0, Region::edge};
};

// (1 + d)^-m for every link of the model.
struct LinkPathloss {
    double b_u1d = 0.0;
    double b_u1u = 0.0;
    double u1d_u1u = 0.0;
    double b_r = 0.0;
    double r_u1d = 0.0;
    double r_u1u = 0.0;
    double r_u2d = 0.0;
    double r_u2u = 0.0;
};

LinkPathloss link_pathloss(const CellGeometry& geometry, const UserPositions& positions);

struct ChannelRealization {
    cplx h_b_u1d;
    cplx h_b_u1u;
    cplx h_u1d_u1u;
    CVec g_br;
    CVec g_r_u1d;
    CVec g_r_u2d;
    CVec g_r_u1u;
    CVec g_r_u2u;
    UserPositions positions;
    LinkPathloss pathloss;
};

ChannelRealization draw_realization(const SystemConfig& config, Rng& rng);
// Reuses precomputed LoS vectors; keeps user positions fixed when given.
ChannelRealization draw_realization(const SystemConfig& config, const LosVectors& los, Rng& rng,
                                    const UserPositions* fixed_positions = nullptr);

}  // namespace starfd
