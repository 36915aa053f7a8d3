// SPDX-License-Identifier: Apache-2.0
#include "starfd/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace starfd {

using std::numbers::pi;

StarRisState StarRisState::uniform(std::size_t n, double rho_t) {
    return {std::vector<double>(n, rho_t), std::vector<double>(n, 1.0 - rho_t),
            std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
}

CVec StarRisState::coefficients(Side s) const {
    const auto& r = rho(s);
    const auto& p = phi(s);
    CVec out(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) out[i] = std::polar(r[i], p[i]);
    return out;
}

double StarRisState::split_violation() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < rho_t.size(); ++i)
        worst = std::max(worst, std::abs(rho_t[i] + rho_r[i] - 1.0));
    return worst;
}

void StarRisState::validate() const {
    const std::size_t n = rho_t.size();
    if (rho_r.size() != n || phi_t.size() != n || phi_r.size() != n)
        throw std::invalid_argument("STAR-RIS state: per-element sequences differ in length");
    for (std::size_t i = 0; i < n; ++i) {
        if (!(rho_t[i] >= 0.0) || !(rho_r[i] >= 0.0))
            throw std::invalid_argument("STAR-RIS state: negative amplitude at element " +
                                        std::to_string(i));
        if (!std::isfinite(phi_t[i]) || !std::isfinite(phi_r[i]))
            throw std::invalid_argument("STAR-RIS state: non-finite phase at element " +
                                        std::to_string(i));
    }
    if (split_violation() >= 1e-9)
        throw std::invalid_argument("STAR-RIS state: rho_t + rho_r must equal 1");
}

ElementPosition element_position(std::size_t n, std::size_t i) {
    const auto side = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
    if (side * side != n) return {static_cast<double>(i), 0.0};
    return {static_cast<double>(i % side), static_cast<double>(i / side)};
}

CVec steering_vector(std::size_t n, Direction dir, double d_over_lambda) {
    const double s = std::sin(dir.azimuth) * std::sin(dir.elevation);
    const double c = std::cos(dir.elevation);
    CVec out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto [x, y] = element_position(n, i);
        out[i] = std::polar(1.0, 2.0 * pi * d_over_lambda * (x * s + y * c));
    }
    return out;
}

CVec sample_rician(const RicianSpec& spec, std::size_t n, Rng& rng) {
    if (spec.los.size() != n) throw std::invalid_argument("sample_rician: LoS length differs from N");
    const double a = std::sqrt(spec.kappa / (spec.kappa + 1.0));
    const double b = std::sqrt(1.0 / (spec.kappa + 1.0));
    CVec out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = a * spec.los[i] + b * complex_normal(rng);
    return out;
}

cplx star_cascade(std::span<const cplx> g_out, std::span<const cplx> coeffs,
                  std::span<const cplx> g_in) {
    if (g_out.size() != coeffs.size() || g_in.size() != coeffs.size())
        throw std::invalid_argument("star_cascade: vector lengths differ");
    cplx sum{};
    for (std::size_t i = 0; i < coeffs.size(); ++i) sum += g_out[i] * coeffs[i] * g_in[i];
    return sum;
}

cplx star_cascade(std::span<const cplx> g_out, const StarRisState& state, Side side,
                  std::span<const cplx> g_in) {
    const CVec c = state.coefficients(side);
    return star_cascade(g_out, c, g_in);
}

namespace {

CVec conjugated(CVec v) {
    for (auto& x : v) x = std::conj(x);
    return v;
}

double distance(double r_a, double ang_a, double x0, double r_b, double ang_b) {
    const double dx = r_a * std::cos(ang_a) - x0 - r_b * std::cos(ang_b);
    const double dy = r_a * std::sin(ang_a) - r_b * std::sin(ang_b);
    return std::hypot(dx, dy);
}

}  // namespace

LosVectors los_vectors(const SystemConfig& config) {
    const auto n = config.n_elements;
    const auto& a = config.angles;
    return {steering_vector(n, a.b_r, a.d_over_lambda),
            conjugated(steering_vector(n, a.r_u1d, a.d_over_lambda)),
            conjugated(steering_vector(n, a.r_u2d, a.d_over_lambda)),
            conjugated(steering_vector(n, a.r_u1u, a.d_over_lambda)),
            conjugated(steering_vector(n, a.r_u2u, a.d_over_lambda))};
}

LinkPathloss link_pathloss(const CellGeometry& g, const UserPositions& p) {
    const double m = g.m;
    // Center users around the BS at the origin, the RIS at (d_br, 0).
    return {pathloss(p.u1d.radius, m),
            pathloss(p.u1u.radius, m),
            pathloss(distance(p.u1d.radius, p.u1d.angle, 0.0, p.u1u.radius, p.u1u.angle), m),
            pathloss(g.d_br, m),
            pathloss(distance(p.u1d.radius, p.u1d.angle, g.d_br, 0.0, 0.0), m),
            pathloss(distance(p.u1u.radius, p.u1u.angle, g.d_br, 0.0, 0.0), m),
            pathloss(p.u2d.radius, m),
            pathloss(p.u2u.radius, m)};
}

ChannelRealization draw_realization(const SystemConfig& config, Rng& rng) {
    return draw_realization(config, los_vectors(config), rng);
}

ChannelRealization draw_realization(const SystemConfig& config, const LosVectors& los, Rng& rng,
                                    const UserPositions* fixed_positions) {
    const auto n = config.n_elements;
    const auto& g = config.geometry;
    ChannelRealization ch;
    if (fixed_positions != nullptr) {
        ch.positions = *fixed_positions;
    } else {
        ch.positions.u1d = sample_user_position(g, Region::center, rng);
        ch.positions.u1u = sample_user_position(g, Region::center, rng);
        ch.positions.u2d = sample_user_position(g, Region::edge, rng);
        ch.positions.u2u = sample_user_position(g, Region::edge, rng);
    }
    ch.pathloss = link_pathloss(g, ch.positions);
    ch.h_b_u1d = complex_normal(rng);
    ch.h_b_u1u = complex_normal(rng);
    ch.h_u1d_u1u = complex_normal(rng);
    const auto& k = config.kappa;
    ch.g_br = sample_rician({k.b_r, los.b_r}, n, rng);
    ch.g_r_u1d = sample_rician({k.r_u1d, los.r_u1d}, n, rng);
    ch.g_r_u2d = sample_rician({k.r_u2d, los.r_u2d}, n, rng);
    ch.g_r_u1u = sample_rician({k.r_u1u, los.r_u1u}, n, rng);
    ch.g_r_u2u = sample_rician({k.r_u2u, los.r_u2u}, n, rng);
    return ch;
}

}  // namespace starfd
