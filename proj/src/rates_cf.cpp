// SPDX-License-Identifier: Apache-2.0
#include "starfd/rates_cf.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "starfd/errors.hpp"
#include "starfd/geometry.hpp"

namespace starfd {

PathlossMoments PathlossMoments::disk_averaged(const SystemConfig& config) {
    const auto& g = config.geometry;
    const double center = exp_pathloss_center_disk(g.R, g.m);
    const double edge = exp_pathloss_edge_disk(g.R_r, g.m);
    const double upsilon = exp_pathloss_fixed_point_to_disk(g.r1(), g.R, g.m, config.quad_nodes);
    PathlossMoments p;
    p.direct_u1d = center;
    p.direct_u1u = center;
    p.user_user = exp_pathloss_two_random_points(g.R, g.m);
    p.ris_u1d = upsilon;
    p.ris_u1u = upsilon;
    p.ris_u2d = edge;
    p.ris_u2u = edge;
    p.bs_ris = pathloss(g.d_br, g.m);
    return p;
}

PathlossMoments PathlossMoments::fixed(const LinkPathloss& l) {
    return {l.b_u1d, l.b_u1u, l.u1d_u1u, l.r_u1d, l.r_u1u, l.r_u2d, l.r_u2u, l.b_r};
}

namespace {

PairMixing mixing(double kx, double ky, double sum_rho_sq) {
    const double ax = kx / (kx + 1.0);
    const double ay = ky / (ky + 1.0);
    const double bx = 1.0 / (kx + 1.0);
    const double by = 1.0 / (ky + 1.0);
    return {ax * ay, (ax * by + ay * bx + bx * by) * sum_rho_sq};
}

double los_gain(const CVec& out, std::span<const cplx> coeffs, const CVec& in) {
    return std::norm(star_cascade(out, coeffs, in));
}

double cascade_mean(const MomentSet& m, int k) {
    return m.mix[k].varpi * m.xi[k] + m.mix[k].varpi_hat;
}

double ratio(double num, double den) { return num > 0.0 ? num / den : 0.0; }

double log_rate(double num, double den) { return std::log2(1.0 + ratio(num, den)); }

}  // namespace

CfModel::CfModel(SystemConfig config)
    : config_(std::move(config)),
      pathloss_(PathlossMoments::disk_averaged(config_)),
      los_(los_vectors(config_)) {}

CfModel::CfModel(SystemConfig config, const PathlossMoments& pathloss)
    : config_(std::move(config)), pathloss_(pathloss), los_(los_vectors(config_)) {}

MomentSet CfModel::moments(const StarRisState& ris) const {
    if (ris.size() != config_.n_elements)
        throw std::invalid_argument("STAR-RIS size differs from n_elements");
    return moments(ris.coefficients(Side::transmit), ris.coefficients(Side::reflect));
}

MomentSet CfModel::moments(std::span<const cplx> ct, std::span<const cplx> cr) const {
    if (ct.size() != config_.n_elements || cr.size() != config_.n_elements)
        throw std::invalid_argument("STAR-RIS size differs from n_elements");
    const auto& k = config_.kappa;
    MomentSet m;
    m.pathloss = pathloss_;
    m.upsilon = pathloss_.ris_u1d;
    m.rho_2pt = pathloss_.user_user;
    for (std::size_t n = 0; n < ct.size(); ++n) {
        m.sum_rho_sq_t += std::norm(ct[n]);
        m.sum_rho_sq_r += std::norm(cr[n]);
        m.sum_coeff_t += ct[n];
    }
    m.xi[u1d_br] = los_gain(los_.r_u1d, ct, los_.b_r);
    m.xi[u1d_u1u] = los_gain(los_.r_u1d, ct, los_.r_u1u);
    m.xi[u1d_u2u] = los_gain(los_.r_u1d, ct, los_.r_u2u);
    m.xi[u2d_br] = los_gain(los_.r_u2d, cr, los_.b_r);
    m.xi[u2d_u1u] = los_gain(los_.r_u2d, cr, los_.r_u1u);
    m.xi[u2d_u2u] = los_gain(los_.r_u2d, cr, los_.r_u2u);
    m.xi[br_u1u] = los_gain(los_.b_r, ct, los_.r_u1u);
    m.xi[br_u2u] = los_gain(los_.b_r, ct, los_.r_u2u);
    CVec back(los_.b_r.size());
    for (std::size_t n = 0; n < back.size(); ++n) back[n] = std::conj(los_.b_r[n]);
    m.zeta = star_cascade(los_.b_r, ct, back);
    m.xi[br_loop] = std::norm(m.zeta);

    const double st = m.sum_rho_sq_t;
    const double sr = m.sum_rho_sq_r;
    m.mix[u1d_br] = mixing(k.r_u1d, k.b_r, st);
    m.mix[u1d_u1u] = mixing(k.r_u1d, k.r_u1u, st);
    m.mix[u1d_u2u] = mixing(k.r_u1d, k.r_u2u, st);
    m.mix[u2d_br] = mixing(k.r_u2d, k.b_r, sr);
    m.mix[u2d_u1u] = mixing(k.r_u2d, k.r_u1u, sr);
    m.mix[u2d_u2u] = mixing(k.r_u2d, k.r_u2u, sr);
    m.mix[br_u1u] = mixing(k.b_r, k.r_u1u, st);
    m.mix[br_u2u] = mixing(k.b_r, k.r_u2u, st);

    // sum_{n1 != n2} c_n1 conj(c_n2) = |sum c|^2 - sum |c|^2
    m.cross_phase_t = cplx(std::norm(m.sum_coeff_t) - st, 0.0);
    const double a2 = k.b_r / (k.b_r + 1.0);
    const double b2 = 1.0 / (k.b_r + 1.0);
    const cplx loop = a2 * a2 * m.xi[br_loop] + 2.0 * a2 * b2 * st +
                      b2 * b2 * (2.0 * st + m.cross_phase_t) +
                      2.0 * a2 * b2 * (m.zeta * std::conj(m.sum_coeff_t));
    if (std::abs(loop.imag()) > 1e-9 * std::max(std::abs(loop), 1e-300))
        throw NumericError("loop second moment has a non-negligible imaginary part");
    m.loop_second_moment = loop.real();
    return m;
}

CfRateInputs rate_inputs(const MomentSet& m, const Simplifications& simplify) {
    const auto& p = m.pathloss;
    const double ris_center = simplify.no_center_ris_paths ? 0.0 : 1.0;
    CfRateInputs in;
    in.u1d.x1 = p.direct_u1d + ris_center * p.bs_ris * p.ris_u1d * cascade_mean(m, u1d_br);
    in.u1d.y1 = p.user_user + ris_center * p.ris_u1u * p.ris_u1d * cascade_mean(m, u1d_u1u);
    in.u1d.y2 = p.ris_u2u * p.ris_u1d * cascade_mean(m, u1d_u2u);

    in.u2d.x1 = p.bs_ris * p.ris_u2d * cascade_mean(m, u2d_br);
    in.u2d.y1 = p.ris_u2d * p.ris_u1u * cascade_mean(m, u2d_u1u);
    in.u2d.y2 = p.ris_u2d * p.ris_u2u * cascade_mean(m, u2d_u2u);

    const double loop = simplify.no_bs_loop ? 0.0 : p.bs_ris * p.bs_ris * m.loop_second_moment;
    in.u1u.x1 = p.direct_u1u + ris_center * p.bs_ris * p.ris_u1u * cascade_mean(m, br_u1u);
    in.u1u.y1 = p.bs_ris * p.ris_u2u * cascade_mean(m, br_u2u);
    in.u1u.y2 = loop;

    // The edge UL user sees the same three links with the roles swapped.
    in.u2u.x1 = p.bs_ris * p.ris_u2u * cascade_mean(m, br_u2u);
    in.u2u.y1 = p.direct_u1u + ris_center * p.bs_ris * p.ris_u1u * cascade_mean(m, br_u1u);
    in.u2u.y2 = loop;
    return in;
}

SinrSet cf_sinrs(const CfRateInputs& in, const PowerConfig& p) {
    const double v = p.si_variance();
    const double pb = p.p_b();
    const auto& c = in.u1d;
    const auto& e = in.u2d;
    SinrSet g;
    g.u1d = ratio(p.p_b1 * c.x1,
                  p.sic_error * p.p_b2 * c.x1 + p.p_u1u * c.y1 + p.p_u2u * c.y2 + p.noise.u1d);
    g.u2d = ratio(p.p_b2 * e.x1, p.p_b1 * e.x1 + p.p_u1u * e.y1 + p.p_u2u * e.y2 + p.noise.u2d);
    g.u1u = ratio(p.p_u1u * in.u1u.x1, p.p_u2u * in.u1u.y1 + pb * in.u1u.y2 + v + p.noise.b);
    g.u2u = ratio(p.p_u2u * in.u2u.x1,
                  p.sic_error * p.p_u1u * in.u2u.y1 + pb * in.u2u.y2 + v + p.noise.b);
    g.u1d_to_u2d =
        ratio(p.p_b2 * c.x1, p.p_b1 * c.x1 + p.p_u1u * c.y1 + p.p_u2u * c.y2 + p.noise.u1d);
    return g;
}

BidirectionalParts cf_bidirectional_parts(const CfRateInputs& in, const PowerConfig& p) {
    const auto& c = in.u1d;
    const auto& e = in.u2d;
    return {ratio(p.p_u2u * c.y2, p.p_u1u * c.y1 + p.noise.u1d),
            ratio(p.p_b1 * c.x1, p.sic_error * p.p_b2 * c.x1 + p.p_u1u * c.y1 + p.noise.u1d),
            ratio(p.p_u1u * e.y1, p.p_u2u * e.y2 + p.noise.u2d),
            ratio(p.p_b2 * e.x1, p.p_b1 * e.x1 + p.p_u2u * e.y2 + p.noise.u2d)};
}

RateSet cf_rate_set(const CfRateInputs& in, const PowerConfig& p) {
    const SinrSet g = cf_sinrs(in, p);
    const BidirectionalParts b = cf_bidirectional_parts(in, p);
    RateSet r;
    r.u1d = std::log2(1.0 + g.u1d);
    r.u2d = std::log2(1.0 + g.u2d);
    r.u1u = std::log2(1.0 + g.u1u);
    r.u2u = std::log2(1.0 + g.u2u);
    r.u1d_to_u2d = std::log2(1.0 + g.u1d_to_u2d);
    r.uc = std::log2(1.0 + b.center_direct + b.center_relay);
    r.ue = std::log2(1.0 + b.edge_direct + b.edge_relay);
    r.c = std::min(r.u2u, r.uc);
    r.e = std::min(r.u1u, r.ue);
    return r;
}

CfRateInputs CfModel::inputs(const StarRisState& ris, const Simplifications& simplify) const {
    return rate_inputs(moments(ris), simplify);
}

CfRateInputs CfModel::inputs(std::span<const cplx> ct, std::span<const cplx> cr) const {
    return rate_inputs(moments(ct, cr));
}

RateReport CfModel::rates(const StarRisState& ris, const PowerConfig& pw,
                          const Simplifications& simplify) const {
    RateReport report;
    report.scenario = config_.scenario;
    report.estimator = Estimator::cf;
    report.rates = cf_rate_set(inputs(ris, simplify), pw);
    report.weighted_sum = weighted_sum(report.rates, config_.weights, config_.scenario);
    return report;
}

double CfModel::objective(const StarRisState& ris, const PowerConfig& pw) const {
    return rates(ris, pw).weighted_sum;
}

double CfModel::objective(std::span<const cplx> ct, std::span<const cplx> cr,
                          const PowerConfig& pw) const {
    return weighted_sum(cf_rate_set(rate_inputs(moments(ct, cr)), pw), config_.weights,
                        config_.scenario);
}

MomentSet compute_moments(const SystemConfig& config, const StarRisState& ris) {
    return CfModel(config).moments(ris);
}

RateReport cf_rates(const SystemConfig& config, const StarRisState& ris, const PowerConfig& pw) {
    return CfModel(config).rates(ris, pw);
}

double cf_rate_dl_center(const SystemConfig& config, const StarRisState& ris, const PowerConfig& pw) {
    return cf_rates(config, ris, pw).rates.u1d;
}

double cf_rate_dl_edge(const SystemConfig& config, const StarRisState& ris, const PowerConfig& pw) {
    return cf_rates(config, ris, pw).rates.u2d;
}

double cf_rate_ul_center(const SystemConfig& config, const StarRisState& ris, const PowerConfig& pw) {
    return cf_rates(config, ris, pw).rates.u1u;
}

double cf_rate_ul_edge(const SystemConfig& config, const StarRisState& ris, const PowerConfig& pw) {
    return cf_rates(config, ris, pw).rates.u2u;
}

double cf_rate_strong_decodes_weak(const SystemConfig& config, const StarRisState& ris,
                                   const PowerConfig& pw) {
    return cf_rates(config, ris, pw).rates.u1d_to_u2d;
}

std::pair<double, double> cf_rates_bidirectional(const SystemConfig& config,
                                                 const StarRisState& ris, const PowerConfig& pw) {
    const auto r = cf_rates(config, ris, pw).rates;
    return {r.c, r.e};
}

UserPositions representative_positions(const CellGeometry& g) {
    using std::numbers::pi;
    UserPositions p;
    p.u1d = {2.0 * g.R / 3.0, 0.5 * pi, Region::center};
    p.u1u = {2.0 * g.R / 3.0, 1.5 * pi, Region::center};
    p.u2d = {2.0 * g.R_r / 3.0, 0.5 * pi, Region::edge};
    p.u2u = {2.0 * g.R_r / 3.0, 1.5 * pi, Region::edge};
    return p;
}

RateReport cf_rates_simplified(const SystemConfig& config, const StarRisState& ris,
                               const PowerConfig& pw, const UserPositions& positions) {
    const auto l = link_pathloss(config.geometry, positions);
    const CfModel model(config, PathlossMoments::fixed(l));
    const MomentSet m = model.moments(ris);
    const auto& k = config.kappa;
    auto part = [&](int idx) { return cascade_mean(m, idx); };

    const double y_u1d = pw.p_u2u * l.r_u2u * l.r_u1d * part(u1d_u2u);
    const double x_u2d = l.b_r * l.r_u2d * part(u2d_br);
    const double y2_u2d = pw.p_u1u * l.r_u2d * l.r_u1u * part(u2d_u1u);
    const double y3_u2d = pw.p_u2u * l.r_u2d * l.r_u2u * part(u2d_u2u);
    const double y2_u1u = pw.p_u2u * l.b_r * l.r_u2u * part(br_u2u);
    const double x_u2u = pw.p_u2u * l.b_r * l.r_u2u * k.r_u2u * k.b_r * m.xi[br_u2u] +
                         pw.p_u2u * l.b_r * l.r_u2u * m.sum_rho_sq_t * (k.r_u2u + k.b_r + 1.0);

    RateReport report;
    report.scenario = config.scenario;
    report.estimator = Estimator::cf;
    auto& r = report.rates;
    r.u1d = log_rate(pw.p_b1 * l.b_u1d, pw.p_u1u * l.u1d_u1u + y_u1d + pw.noise.u1d);
    r.u2d = log_rate(pw.p_b2 * x_u2d, pw.p_b1 * x_u2d + y2_u2d + y3_u2d + pw.noise.u2d);
    r.u1u = log_rate(pw.p_u1u * l.b_u1u, y2_u1u + pw.noise.b);
    r.u2u = log_rate(x_u2u, pw.noise.b * (k.r_u2u + 1.0) * (k.b_r + 1.0));
    report.weighted_sum = weighted_sum(r, config.weights, Scenario::noma_pair);
    return report;
}

}  // namespace starfd
