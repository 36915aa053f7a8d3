// SPDX-License-Identifier: Apache-2.0
#include "starfd/rates_mc.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

namespace starfd {

LinkGains link_gains(const ChannelRealization& ch, std::span<const cplx> ct,
                     std::span<const cplx> cr, const Simplifications& simplify) {
    const auto& l = ch.pathloss;
    const double ris_center = simplify.no_center_ris_paths ? 0.0 : 1.0;
    LinkGains g;
    g.A_u1d = std::norm(std::sqrt(l.b_u1d) * ch.h_b_u1d +
                        ris_center * std::sqrt(l.b_r * l.r_u1d) * star_cascade(ch.g_r_u1d, ct, ch.g_br));
    g.C_u1d = std::norm(std::sqrt(l.u1d_u1u) * ch.h_u1d_u1u +
                        ris_center * std::sqrt(l.r_u1u * l.r_u1d) *
                            star_cascade(ch.g_r_u1d, ct, ch.g_r_u1u));
    g.D_u1d = l.r_u2u * l.r_u1d * std::norm(star_cascade(ch.g_r_u1d, ct, ch.g_r_u2u));
    g.A_u2d = l.b_r * l.r_u2d * std::norm(star_cascade(ch.g_r_u2d, cr, ch.g_br));
    g.C_u2d = l.r_u1u * l.r_u2d * std::norm(star_cascade(ch.g_r_u2d, cr, ch.g_r_u1u));
    g.D_u2d = l.r_u2u * l.r_u2d * std::norm(star_cascade(ch.g_r_u2d, cr, ch.g_r_u2u));
    g.A_u1u = std::norm(std::sqrt(l.b_u1u) * ch.h_b_u1u +
                        ris_center * std::sqrt(l.b_r * l.r_u1u) * star_cascade(ch.g_br, ct, ch.g_r_u1u));
    g.B_u1u = l.b_r * l.r_u2u * std::norm(star_cascade(ch.g_br, ct, ch.g_r_u2u));
    if (!simplify.no_bs_loop) {
        cplx loop{};
        for (std::size_t i = 0; i < ct.size(); ++i) loop += ch.g_br[i] * ct[i] * std::conj(ch.g_br[i]);
        g.C_u1u = l.b_r * l.b_r * std::norm(loop);
    }
    return g;
}

LinkGains link_gains(const ChannelRealization& ch, const StarRisState& ris,
                     const Simplifications& simplify) {
    const auto ct = ris.coefficients(Side::transmit);
    const auto cr = ris.coefficients(Side::reflect);
    return link_gains(ch, ct, cr, simplify);
}

namespace {

double ratio(double num, double den) { return num > 0.0 ? num / den : 0.0; }

}  // namespace

double sinr_dl_center(const LinkGains& g, const PowerConfig& p) {
    return ratio(p.p_b1 * g.A_u1d, p.sic_error * p.p_b2 * g.A_u1d + p.p_u1u * g.C_u1d +
                                       p.p_u2u * g.D_u1d + p.noise.u1d);
}

double sinr_dl_edge(const LinkGains& g, const PowerConfig& p) {
    return ratio(p.p_b2 * g.A_u2d,
                 p.p_b1 * g.A_u2d + p.p_u1u * g.C_u2d + p.p_u2u * g.D_u2d + p.noise.u2d);
}

double sinr_ul_center(const LinkGains& g, const PowerConfig& p, double si_draw) {
    return ratio(p.p_u1u * g.A_u1u,
                 p.p_u2u * g.B_u1u + p.p_b() * g.C_u1u + si_draw + p.noise.b);
}

double sinr_ul_edge(const LinkGains& g, const PowerConfig& p, double si_draw) {
    return ratio(p.p_u2u * g.A_u2u(), p.sic_error * p.p_u1u * g.B_u2u() + p.p_b() * g.C_u2u() +
                                          si_draw + p.noise.b);
}

double sinr_strong_decodes_weak(const LinkGains& g, const PowerConfig& p) {
    return ratio(p.p_b2 * g.A_u1d,
                 p.p_b1 * g.A_u1d + p.p_u1u * g.C_u1d + p.p_u2u * g.D_u1d + p.noise.u1d);
}

double sinr_dl_center(const ChannelRealization& ch, const StarRisState& ris, const PowerConfig& pw) {
    return sinr_dl_center(link_gains(ch, ris), pw);
}

double sinr_dl_edge(const ChannelRealization& ch, const StarRisState& ris, const PowerConfig& pw) {
    return sinr_dl_edge(link_gains(ch, ris), pw);
}

double sinr_ul_center(const ChannelRealization& ch, const StarRisState& ris, const PowerConfig& pw,
                      double si_draw) {
    return sinr_ul_center(link_gains(ch, ris), pw, si_draw);
}

double sinr_ul_edge(const ChannelRealization& ch, const StarRisState& ris, const PowerConfig& pw,
                    double si_draw) {
    return sinr_ul_edge(link_gains(ch, ris), pw, si_draw);
}

double rate_strong_decodes_weak(const ChannelRealization& ch, const StarRisState& ris,
                                const PowerConfig& pw) {
    return std::log2(1.0 + sinr_strong_decodes_weak(link_gains(ch, ris), pw));
}

BidirectionalRates rates_bidirectional(const LinkGains& g, const PowerConfig& p, double si_draw) {
    BidirectionalRates r;
    const double relay_c = ratio(p.p_u2u * g.D_u1d, p.p_u1u * g.C_u1d + p.noise.u1d);
    const double bs_c = ratio(p.p_b1 * g.A_u1d,
                              p.sic_error * p.p_b2 * g.A_u1d + p.p_u1u * g.C_u1d + p.noise.u1d);
    const double relay_e = ratio(p.p_u1u * g.C_u2d, p.p_u2u * g.D_u2d + p.noise.u2d);
    const double bs_e = ratio(p.p_b2 * g.A_u2d, p.p_b1 * g.A_u2d + p.p_u2u * g.D_u2d + p.noise.u2d);
    r.combined_center = std::log2(1.0 + relay_c + bs_c);
    r.combined_edge = std::log2(1.0 + relay_e + bs_e);
    r.center = std::min(std::log2(1.0 + sinr_ul_edge(g, p, si_draw)), r.combined_center);
    r.edge = std::min(std::log2(1.0 + sinr_ul_center(g, p, si_draw)), r.combined_edge);
    return r;
}

BidirectionalRates rates_bidirectional(const ChannelRealization& ch, const StarRisState& ris,
                                       const PowerConfig& pw, double si_draw) {
    return rates_bidirectional(link_gains(ch, ris), pw, si_draw);
}

bool noma_beneficial(double gamma_noma, double gamma_oma) {
    return gamma_noma > std::sqrt(1.0 + gamma_oma) - 1.0;
}

const char* to_string(Estimator e) { return e == Estimator::cf ? "cf" : "mc"; }

double weighted_sum(const RateSet& r, const Weights& w, Scenario scenario) {
    if (scenario == Scenario::bidirectional) return w.c * r.uc + w.e * r.ue;
    return w.u1d * r.u1d + w.u2d * r.u2d + w.u1u * r.u1u + w.u2u * r.u2u;
}

namespace {

// Per-trial samples: u1d, u2d, u1u, u2u, u1d->u2d, uc, ue, weighted sum.
constexpr std::size_t kFields = 8;

void run_trials(const SystemConfig& config, const LosVectors& los, std::span<const cplx> ct,
                std::span<const cplx> cr, const PowerConfig& pw, std::uint64_t seed,
                const McOptions& options, std::size_t begin, std::size_t end,
                std::vector<double>& out) {
    const double v = pw.si_variance();
    const UserPositions* fixed = options.fixed_positions ? &*options.fixed_positions : nullptr;
    for (std::size_t t = begin; t < end; ++t) {
        Rng rng = make_rng(seed, t);
        const ChannelRealization ch = draw_realization(config, los, rng, fixed);
        const double si = v > 0.0 ? std::norm(complex_normal(rng, v)) : 0.0;
        const LinkGains g = link_gains(ch, ct, cr, options.simplify);
        const auto bi = rates_bidirectional(g, pw, si);
        double* row = &out[t * kFields];
        row[0] = std::log2(1.0 + sinr_dl_center(g, pw));
        row[1] = std::log2(1.0 + sinr_dl_edge(g, pw));
        row[2] = std::log2(1.0 + sinr_ul_center(g, pw, si));
        row[3] = std::log2(1.0 + sinr_ul_edge(g, pw, si));
        row[4] = std::log2(1.0 + sinr_strong_decodes_weak(g, pw));
        row[5] = bi.combined_center;
        row[6] = bi.combined_edge;
        RateSet rs{row[0], row[1], row[2], row[3], row[4], row[5], row[6], 0.0, 0.0};
        row[7] = weighted_sum(rs, config.weights, config.scenario);
    }
}

struct Moments {
    double mean;
    double stderr_;
};

Moments column_moments(const std::vector<double>& data, std::size_t field, std::size_t n) {
    double sum = 0.0;
    double comp = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        const double x = data[t * kFields + field];
        const double s = sum + x;
        comp += std::abs(sum) >= std::abs(x) ? (sum - s) + x : (x - s) + sum;
        sum = s;
    }
    const double mean = (sum + comp) / static_cast<double>(n);
    if (n < 2) return {mean, 0.0};
    double ss = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        const double d = data[t * kFields + field] - mean;
        ss += d * d;
    }
    return {mean, std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n))};
}

}  // namespace

RateReport ergodic_rate_mc(const SystemConfig& config, const StarRisState& ris,
                           const PowerConfig& pw, std::size_t trials, std::uint64_t seed,
                           const McOptions& options) {
    if (trials == 0) throw std::invalid_argument("ergodic_rate_mc: trials must be at least 1");
    if (ris.size() != config.n_elements)
        throw std::invalid_argument("ergodic_rate_mc: STAR-RIS size differs from n_elements");
    const LosVectors los = los_vectors(config);
    const CVec ct = ris.coefficients(Side::transmit);
    const CVec cr = ris.coefficients(Side::reflect);
    std::vector<double> samples(trials * kFields);

    const unsigned workers = std::max(1u, std::min<unsigned>(options.threads, trials));
    if (workers == 1) {
        run_trials(config, los, ct, cr, pw, seed, options, 0, trials, samples);
    } else {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (trials + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min(trials, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back([&, begin, end] {
                run_trials(config, los, ct, cr, pw, seed, options, begin, end, samples);
            });
        }
    }

    RateReport report;
    report.scenario = config.scenario;
    report.estimator = Estimator::mc;
    report.trials = trials;
    std::array<Moments, kFields> m{};
    for (std::size_t f = 0; f < kFields; ++f) m[f] = column_moments(samples, f, trials);
    report.rates = {m[0].mean, m[1].mean, m[2].mean, m[3].mean, m[4].mean, m[5].mean, m[6].mean,
                    0.0, 0.0};
    report.stderr_ = {m[0].stderr_, m[1].stderr_, m[2].stderr_, m[3].stderr_, m[4].stderr_,
                      m[5].stderr_, m[6].stderr_, 0.0, 0.0};
    // End-to-end bidirectional rates: the smaller of the two ergodic hops.
    const bool c_ul = m[3].mean < m[5].mean;
    report.rates.c = c_ul ? m[3].mean : m[5].mean;
    report.stderr_.c = c_ul ? m[3].stderr_ : m[5].stderr_;
    const bool e_ul = m[2].mean < m[6].mean;
    report.rates.e = e_ul ? m[2].mean : m[6].mean;
    report.stderr_.e = e_ul ? m[2].stderr_ : m[6].stderr_;
    report.weighted_sum = m[7].mean;
    report.weighted_sum_stderr = m[7].stderr_;
    return report;
}

}  // namespace starfd
