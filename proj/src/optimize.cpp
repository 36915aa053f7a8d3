// SPDX-License-Identifier: Apache-2.0
#include "starfd/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "starfd/errors.hpp"

namespace starfd {

using std::numbers::pi;

bool ConstraintReport::feasible() const {
    return power_budget.ok && sic_order.ok && dl_target.ok && ul_target.ok && energy_split.ok &&
           unit_modulus.ok;
}

const char* to_string(Termination t) {
    return t == Termination::converged ? "converged" : "max-iters";
}

std::vector<double> project_phases(std::span<const cplx> theta_raw) {
    std::vector<double> out(theta_raw.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = theta_raw[i] == cplx{} ? 0.0 : std::arg(theta_raw[i]);
    return out;
}

std::pair<std::vector<double>, std::vector<double>> project_amplitudes(
    std::span<const double> rho_t_raw, std::span<const double> rho_r_raw) {
    if (rho_t_raw.size() != rho_r_raw.size())
        throw std::invalid_argument("project_amplitudes: length mismatch");
    std::vector<double> t(rho_t_raw.size()), r(rho_r_raw.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        t[i] = std::clamp(0.5 * (rho_t_raw[i] - rho_r_raw[i] + 1.0), 0.0, 1.0);
        r[i] = 1.0 - t[i];
    }
    return {std::move(t), std::move(r)};
}

namespace {

struct Iterate {
    CVec theta_t, theta_r;
    std::vector<double> rho_t, rho_r;

    static Iterate from(const StarRisState& s) {
        Iterate it{CVec(s.size()), CVec(s.size()), s.rho_t, s.rho_r};
        for (std::size_t i = 0; i < s.size(); ++i) {
            it.theta_t[i] = std::polar(1.0, s.phi_t[i]);
            it.theta_r[i] = std::polar(1.0, s.phi_r[i]);
        }
        return it;
    }

    StarRisState state() const {
        return {rho_t, rho_r, project_phases(theta_t), project_phases(theta_r)};
    }
};

using Objective = std::function<double(std::span<const cplx>, std::span<const cplx>)>;

double evaluate(const Objective& objective, const Iterate& it) {
    const std::size_t n = it.rho_t.size();
    CVec ct(n), cr(n);
    for (std::size_t i = 0; i < n; ++i) {
        ct[i] = it.rho_t[i] * it.theta_t[i];
        cr[i] = it.rho_r[i] * it.theta_r[i];
    }
    return objective(ct, cr);
}

struct Gradient {
    CVec theta_t, theta_r;
    std::vector<double> rho_t, rho_r;
};

// Central differences; a component whose stencil leaves the objective's
// domain is set to zero.
Gradient gradient(const Objective& objective, Iterate it, double h) {
    const std::size_t n = it.rho_t.size();
    Gradient g{CVec(n), CVec(n), std::vector<double>(n), std::vector<double>(n)};
    auto central = [&](auto& slot, auto delta) {
        const auto saved = slot;
        slot = saved + delta;
        const double up = evaluate(objective, it);
        slot = saved - delta;
        const double down = evaluate(objective, it);
        slot = saved;
        const double d = (up - down) / (2.0 * h);
        return std::isfinite(d) ? d : 0.0;
    };
    for (std::size_t i = 0; i < n; ++i) {
        g.theta_t[i] = {central(it.theta_t[i], cplx(h, 0.0)), central(it.theta_t[i], cplx(0.0, h))};
        g.theta_r[i] = {central(it.theta_r[i], cplx(h, 0.0)), central(it.theta_r[i], cplx(0.0, h))};
        g.rho_t[i] = central(it.rho_t[i], h);
        g.rho_r[i] = central(it.rho_r[i], h);
    }
    return g;
}

Iterate step(const Iterate& it, const Gradient& g, double mu, double alpha) {
    const std::size_t n = it.rho_t.size();
    CVec tt(n), tr(n);
    std::vector<double> rt(n), rr(n);
    for (std::size_t i = 0; i < n; ++i) {
        tt[i] = it.theta_t[i] + mu * g.theta_t[i];
        tr[i] = it.theta_r[i] + mu * g.theta_r[i];
        rt[i] = it.rho_t[i] + alpha * mu * g.rho_t[i];
        rr[i] = it.rho_r[i] + alpha * mu * g.rho_r[i];
    }
    Iterate next;
    const auto pt = project_phases(tt);
    const auto pr = project_phases(tr);
    next.theta_t.resize(n);
    next.theta_r.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        next.theta_t[i] = std::polar(1.0, pt[i]);
        next.theta_r[i] = std::polar(1.0, pr[i]);
    }
    std::tie(next.rho_t, next.rho_r) = project_amplitudes(rt, rr);
    return next;
}

struct Ascent {
    StarRisState state;
    std::vector<double> trace;
    Termination termination = Termination::max_iters;
};

Ascent ascend(const Objective& objective, const StarRisState& init, const PgamOptions& options) {
    if (!(options.mu > 0.0) || !(options.eps > 0.0) || options.max_iters < 1 ||
        !(options.fd_step > 0.0) || !(options.alpha > 0.0))
        throw std::invalid_argument("pgam: mu, alpha, eps and fd_step must be positive, max_iters >= 1");
    init.validate();
    Iterate it = Iterate::from(init);
    double f = evaluate(objective, it);
    if (!std::isfinite(f)) throw std::invalid_argument("pgam: objective is not finite at the start point");

    Ascent out;
    out.trace.push_back(f);
    for (int iter = 0; iter < options.max_iters; ++iter) {
        const Gradient g = gradient(objective, it, options.fd_step);
        double mu = options.mu;
        Iterate next = step(it, g, mu, options.alpha);
        double f_next = evaluate(objective, next);
        if (options.backtracking) {
            for (int halvings = 0; !(f_next >= f) && halvings < 60; ++halvings) {
                mu *= 0.5;
                next = step(it, g, mu, options.alpha);
                f_next = evaluate(objective, next);
            }
            if (!(f_next >= f)) {
                next = it;
                f_next = f;
            }
        }
        const double improvement = f_next - f;
        if (!(f_next >= f)) {
            // a fixed step that overshoots ends the ascent at the better iterate
            out.termination = Termination::converged;
            break;
        }
        it = std::move(next);
        f = f_next;
        out.trace.push_back(f);
        if (!(improvement >= options.eps)) {
            out.termination = Termination::converged;
            break;
        }
    }
    out.state = it.state();
    return out;
}

}  // namespace

OptimizationResult pgam(const CfModel& model, const PowerConfig& pw, const StarRisState& init,
                        const PgamOptions& options) {
    Ascent a = ascend([&](std::span<const cplx> ct,
                          std::span<const cplx> cr) { return model.objective(ct, cr, pw); },
                      init, options);
    OptimizationResult result;
    result.state = std::move(a.state);
    result.trace = std::move(a.trace);
    result.termination = a.termination;
    result.power = pw;
    result.constraints = validate_constraints(model, result.state, pw, model.rates(result.state, pw));
    return result;
}

OptimizationResult pgam(const SystemConfig& config, const PowerConfig& pw,
                        const StarRisState& init, const PgamOptions& options) {
    return pgam(CfModel(config), pw, init, options);
}

namespace {

// phi_n = -2 pi (d / lambda) (x_n t + y_n l)
std::vector<double> align(std::size_t n, double t, double l, double d_over_lambda) {
    std::vector<double> phi(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto [x, y] = element_position(n, i);
        phi[i] = std::remainder(-2.0 * pi * d_over_lambda * (x * t + y * l), 2.0 * pi);
    }
    return phi;
}

double sin_term(Direction d) { return std::sin(d.azimuth) * std::sin(d.elevation); }
double cos_term(Direction d) { return std::cos(d.elevation); }

std::vector<double> align_through_bs(std::size_t n, Direction user, Direction br, double dl) {
    return align(n, sin_term(br) - sin_term(user), cos_term(br) - cos_term(user), dl);
}

std::vector<double> align_user_pair(std::size_t n, Direction a, Direction b, double dl) {
    return align(n, -sin_term(a) - sin_term(b), -cos_term(a) - cos_term(b), dl);
}

StarRisState with_phases(std::size_t n, double rho_t, std::vector<double> phi_t,
                         std::vector<double> phi_r) {
    auto s = StarRisState::uniform(n, rho_t);
    s.phi_t = std::move(phi_t);
    s.phi_r = std::move(phi_r);
    return s;
}

}  // namespace

std::pair<std::vector<double>, std::vector<double>> suboptimal_phases(const GeometryAngles& a,
                                                                      std::size_t n,
                                                                      double d_over_lambda) {
    return {align_through_bs(n, a.r_u2u, a.b_r, d_over_lambda),
            align_through_bs(n, a.r_u2d, a.b_r, d_over_lambda)};
}

StarRisState aligned_state(const SystemConfig& config, double rho_t) {
    auto [t, r] = suboptimal_phases(config.angles, config.n_elements, config.angles.d_over_lambda);
    return with_phases(config.n_elements, rho_t, std::move(t), std::move(r));
}

StarRisState aligned_state_bidirectional(const CfModel& model, const PowerConfig& pw,
                                         double rho_t) {
    const auto& cfg = model.config();
    const auto& a = cfg.angles;
    const std::size_t n = cfg.n_elements;
    const double dl = a.d_over_lambda;
    StarRisState via_bs = aligned_state(cfg, rho_t);
    StarRisState via_pair = with_phases(n, rho_t, align_user_pair(n, a.r_u2u, a.r_u1d, dl),
                                        align_user_pair(n, a.r_u1u, a.r_u2d, dl));
    const auto bs = cf_bidirectional_parts(model.inputs(via_bs), pw);
    const auto pair = cf_bidirectional_parts(model.inputs(via_pair), pw);
    const double gamma1 = std::max(pair.center_direct, pair.edge_direct);
    const double gamma2 = std::max(bs.center_relay, bs.edge_relay);
    return gamma1 > gamma2 ? via_pair : via_bs;
}

StarRisState random_state(std::size_t n, Rng& rng, double rho_t) {
    auto s = StarRisState::uniform(n, rho_t);
    for (std::size_t i = 0; i < n; ++i) {
        s.phi_t[i] = 2.0 * pi * uniform01(rng);
        s.phi_r[i] = 2.0 * pi * uniform01(rng);
    }
    return s;
}

namespace {

double threshold(double bps) { return std::exp2(bps) - 1.0; }

// P_b2 = b1 P_b1 + b2 P_t + b3 from one DL equation with target gamma_d, after
// eliminating both UL powers.
struct Line {
    double slope, total, offset;
};

struct UplinkElimination {
    double r, s, k;  // (1 + s) p_u2u = (r - s) P_b + s P_t + k
};

Line dl_line(const UserTerms& t, double noise, double gamma_d, const UplinkElimination& u,
             const char* which) {
    if (!(t.x1 > 0.0))
        throw DegenerateError(std::string("no useful signal on the ") + which + " link");
    const double e = t.y1 / t.x1;
    const double f = t.y2 / t.x1;
    const double n = noise / t.x1;
    const double h = (f - e) / (1.0 + u.s);
    const double d = 1.0 + gamma_d * e - gamma_d * h * (u.r - u.s);
    if (std::abs(d) < 1e-14) throw DegenerateError(std::string("singular ") + which + " equation");
    return {gamma_d * (1.0 - e + h * (u.r - u.s)) / d, gamma_d * (e + h * u.s) / d,
            gamma_d * (h * u.k + n) / d};
}

PowerConfig solve_once(const CfRateInputs& in, const PowerConfig& base, double total,
                       double gamma_d, double gamma_u, double v) {
    const auto& ul = in.u2u;
    if (!(ul.x1 > 0.0)) throw DegenerateError("no useful signal on the edge UL link");
    const UplinkElimination u{gamma_u * ul.y2 / ul.x1, gamma_u * base.sic_error * ul.y1 / ul.x1,
                              gamma_u * (v + base.noise.b) / ul.x1};
    const Line b = dl_line(in.u2d, base.noise.u2d, gamma_d, u, "edge DL");
    const Line c = dl_line(in.u1d, base.noise.u1d, gamma_d, u, "center DL");
    const double den = b.slope - c.slope;
    if (std::abs(den) <= 1e-14 * std::max({std::abs(b.slope), std::abs(c.slope), 1e-300}))
        throw DegenerateError("edge DL and strong-user decoding equations do not fix P_b1");
    PowerConfig pw = base;
    pw.total = total;
    pw.p_b1 = (total * (c.total - b.total) + (c.offset - b.offset)) / den;
    pw.p_b2 = b.slope * pw.p_b1 + b.total * total + b.offset;
    pw.p_u2u = ((u.r - u.s) * pw.p_b() + u.s * total + u.k) / (1.0 + u.s);
    pw.p_u1u = total - pw.p_b() - pw.p_u2u;
    return pw;
}

void require_non_negative(const PowerConfig& pw) {
    if (pw.p_b2 < 0.0) throw InfeasibleError("edge DL power is negative", "target_dl");
    if (pw.p_b1 < 0.0)
        throw InfeasibleError("center DL power is negative", "target_dl (strong-user decoding)");
    if (pw.p_u2u < 0.0) throw InfeasibleError("edge UL power is negative", "target_ul");
    if (pw.p_u1u < 0.0)
        throw InfeasibleError("targets need more than the total power", "target_dl + target_ul");
}

}  // namespace

PowerConfig power_allocation_closed_form(const CfRateInputs& in, const PowerConfig& base,
                                         double total, double target_dl, double target_ul) {
    if (!(total > 0.0)) throw std::invalid_argument("total power must be positive");
    if (target_dl < 0.0 || target_ul < 0.0)
        throw std::invalid_argument("target rates must be non-negative");
    const double gamma_d = threshold(target_dl);
    const double gamma_u = threshold(target_ul);
    // V depends on P_b, which the solution fixes: iterate to the fixed point.
    double v = base.si_variance();
    PowerConfig pw;
    for (int iter = 0; iter < 200; ++iter) {
        pw = solve_once(in, base, total, gamma_d, gamma_u, v);
        require_non_negative(pw);
        const double next = pw.si_variance();
        if (std::abs(next - v) <= 1e-15 * std::max(next, 1e-300)) break;
        v = next;
    }
    pw.tau = pw.p_b() / total;
    pw.target_dl = target_dl;
    pw.target_ul = target_ul;
    return pw;
}

PowerConfig power_allocation_closed_form(const CfModel& model, const StarRisState& ris,
                                         const PowerConfig& base, double total, double target_dl,
                                         double target_ul) {
    return power_allocation_closed_form(model.inputs(ris), base, total, target_dl, target_ul);
}

PowerConfig power_allocation_split(const CfRateInputs& in, const PowerConfig& base, double total,
                                   double tau, double target_dl, double target_ul) {
    if (!(tau > 0.0 && tau <= 1.0)) throw std::invalid_argument("tau must lie in (0, 1]");
    PowerConfig pw = base;
    pw.total = total;
    pw.tau = tau;
    pw.target_dl = target_dl;
    pw.target_ul = target_ul;
    const double pb = tau * total;
    const double pu = total - pb;
    pw.p_b1 = pb;
    pw.p_b2 = 0.0;
    const double gamma_d = threshold(target_dl);
    const double gamma_u = threshold(target_ul);

    const auto& ul = in.u2u;
    const double xi_y1 = gamma_u * base.sic_error * ul.y1;
    double p2 = pu;
    if (ul.x1 > 0.0)
        p2 = gamma_u * (base.sic_error * pu * ul.y1 + pb * ul.y2 + pw.si_variance() + base.noise.b) /
             (ul.x1 + xi_y1);
    pw.p_u2u = std::min(p2, pu);
    pw.p_u1u = pu - pw.p_u2u;

    const auto& dl = in.u2d;
    double p_b2 = pb;
    if (dl.x1 > 0.0)
        p_b2 = gamma_d * (pb * dl.x1 + pw.p_u1u * dl.y1 + pw.p_u2u * dl.y2 + base.noise.u2d) /
               (dl.x1 * (1.0 + gamma_d));
    pw.p_b2 = std::min(p_b2, pb);
    pw.p_b1 = pb - pw.p_b2;
    return pw;
}

ConstraintReport validate_constraints(const CfModel& model, const StarRisState& ris,
                                      const PowerConfig& pw, const RateReport& report) {
    ConstraintReport c;
    const auto& r = report.rates;
    const double used = pw.p_b() + pw.p_u();
    const double budget_slack = pw.total - used;
    const bool powers_ok = pw.p_b1 >= 0.0 && pw.p_b2 >= 0.0 && pw.p_u1u >= 0.0 && pw.p_u2u >= 0.0;
    c.power_budget = {powers_ok && budget_slack >= -1e-9 * std::max(pw.total, 1.0), budget_slack};
    const double sic = r.u1d_to_u2d - r.u2d;
    c.sic_order = {sic >= -1e-9, sic};
    const double dl = r.u2d - pw.target_dl;
    const double ul = r.u2u - pw.target_ul;
    c.dl_target = {dl >= -1e-9 * std::max(1.0, pw.target_dl), dl};
    c.ul_target = {ul >= -1e-9 * std::max(1.0, pw.target_ul), ul};

    double split = ris.split_violation();
    for (std::size_t i = 0; i < ris.size(); ++i)
        split = std::max({split, -ris.rho_t[i], -ris.rho_r[i]});
    c.energy_split = {split < 1e-9, split};
    double modulus = 0.0;
    for (const auto* phi : {&ris.phi_t, &ris.phi_r})
        for (double p : *phi)
            modulus = std::max(modulus, std::isfinite(p) ? std::abs(std::abs(std::polar(1.0, p)) - 1.0)
                                                         : std::numeric_limits<double>::infinity());
    c.unit_modulus = {modulus < 1e-9, modulus};

    // OMA reference: the same link with the whole direction's power and no
    // interference from its NOMA partner.
    const auto in = model.inputs(ris);
    const SinrSet noma = cf_sinrs(in, pw);
    const double v = pw.si_variance();
    const double pb = pw.p_b(), pu = pw.p_u();
    const std::array<double, 4> oma{
        pb * in.u1d.x1 / (pw.p_u1u * in.u1d.y1 + pw.p_u2u * in.u1d.y2 + pw.noise.u1d),
        pb * in.u2d.x1 / (pw.p_u1u * in.u2d.y1 + pw.p_u2u * in.u2d.y2 + pw.noise.u2d),
        pu * in.u1u.x1 / (pb * in.u1u.y2 + v + pw.noise.b),
        pu * in.u2u.x1 / (pb * in.u2u.y2 + v + pw.noise.b)};
    const std::array<double, 4> gamma{noma.u1d, noma.u2d, noma.u1u, noma.u2u};
    for (std::size_t i = 0; i < 4; ++i)
        c.noma_benefit[i] = {noma_beneficial(gamma[i], oma[i]),
                             gamma[i] - (std::sqrt(1.0 + oma[i]) - 1.0)};
    return c;
}

ConstraintReport validate_constraints(const SystemConfig& config, const StarRisState& ris,
                                      const PowerConfig& pw, const RateReport& report) {
    return validate_constraints(CfModel(config), ris, pw, report);
}

OptimizationResult optimize_joint(const CfModel& model, const PowerConfig& base,
                                  const StarRisState& init, double total, double target_dl,
                                  double target_ul, const PgamOptions& options) {
    const auto& cfg = model.config();
    // Powers follow the surface: every evaluation re-solves the allocation, and
    // surfaces without a feasible allocation score -inf.
    auto objective = [&](std::span<const cplx> ct, std::span<const cplx> cr) {
        const CfRateInputs in = model.inputs(ct, cr);
        try {
            const PowerConfig pw = power_allocation_closed_form(in, base, total, target_dl, target_ul);
            return weighted_sum(cf_rate_set(in, pw), cfg.weights, cfg.scenario);
        } catch (const NumericError&) {
            return -std::numeric_limits<double>::infinity();
        }
    };
    Ascent a = ascend(objective, init, options);
    OptimizationResult result;
    result.state = std::move(a.state);
    result.trace = std::move(a.trace);
    result.termination = a.termination;
    result.power =
        power_allocation_closed_form(model, result.state, base, total, target_dl, target_ul);
    result.constraints = validate_constraints(model, result.state, result.power,
                                              model.rates(result.state, result.power));
    return result;
}

}  // namespace starfd
