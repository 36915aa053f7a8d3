#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "starfd/errors.hpp"
#include "starfd/optimize.hpp"
#include "power_oracle.hpp"
#include "toy_oracle.hpp"

using namespace starfd;
using std::numbers::pi;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

SystemConfig random_config(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    SystemConfig cfg;
    cfg.kappa = {0.5 + 5 * u(rng), 0.5 + 5 * u(rng), 0.5 + 5 * u(rng), 0.5 + 5 * u(rng),
                 0.5 + 5 * u(rng)};
    for (Direction* d : {&cfg.angles.b_r, &cfg.angles.r_u1d, &cfg.angles.r_u2d, &cfg.angles.r_u1u,
                         &cfg.angles.r_u2u})
        *d = {2 * pi * u(rng), pi * u(rng)};
    cfg.n_elements = 4 + static_cast<std::size_t>(30 * u(rng));
    cfg.power.sic_error = 1e-4 * u(rng);
    cfg.power.si_beta = 1e-6 * u(rng);
    cfg.power.noise = {1e-9, 1e-9, 1e-9};
    return cfg;
}

}  // namespace

TEST_CASE("phase projection") {
    const CVec in{cplx(1, 0), std::polar(1.0, 0.7), std::polar(2.0, pi / 3), cplx{}};
    const auto out = project_phases(in);
    CHECK(out[0] == 0.0);
    CHECK(out[1] == doctest::Approx(0.7));
    CHECK(out[2] == doctest::Approx(pi / 3));
    CHECK(out[3] == 0.0);
}

TEST_CASE("amplitude projection") {
    const std::vector<double> t{0.5, 2.0, 0.9}, r{0.5, 2.0, -0.3};
    const auto [pt, pr] = project_amplitudes(t, r);
    CHECK(pt[0] == doctest::Approx(0.5));
    CHECK(pt[1] == doctest::Approx(0.5));
    CHECK(pr[1] == doctest::Approx(0.5));
    // dense sampling of the feasible segment
    double best = 1e300, arg = 0.0;
    for (int i = 0; i <= 1000000; ++i) {
        const double s = i * 1e-6;
        const double d = (s - 0.9) * (s - 0.9) + (1 - s + 0.3) * (1 - s + 0.3);
        if (d < best) best = d, arg = s;
    }
    CHECK(pt[2] == doctest::Approx(arg).epsilon(1e-6));
    CHECK(pt[2] + pr[2] == doctest::Approx(1.0));
    CHECK_THROWS_AS(project_amplitudes(t, std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("projections are idempotent") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> g(0.0, 2.0);
    for (int k = 0; k < 200; ++k) {
        std::vector<double> t(8), r(8);
        CVec th(8);
        for (int i = 0; i < 8; ++i) t[i] = g(rng), r[i] = g(rng), th[i] = {g(rng), g(rng)};
        const auto [pt, pr] = project_amplitudes(t, r);
        const auto [qt, qr] = project_amplitudes(pt, pr);
        const auto ph = project_phases(th);
        CVec unit(8);
        for (int i = 0; i < 8; ++i) unit[i] = std::polar(1.0, ph[i]);
        const auto ph2 = project_phases(unit);
        for (int i = 0; i < 8; ++i) {
            CHECK(std::abs(qt[i] - pt[i]) < 1e-12);
            CHECK(std::abs(qr[i] - pr[i]) < 1e-12);
            CHECK(std::abs(ph2[i] - ph[i]) < 1e-12);
            CHECK(pt[i] >= 0.0);
            CHECK(pr[i] >= 0.0);
        }
    }
}

TEST_CASE("aligned phases") {
    GeometryAngles same;
    same.r_u2u = same.b_r;
    same.r_u2d = same.b_r;
    const auto [t, r] = suboptimal_phases(same, 16, 0.5);
    for (std::size_t i = 0; i < 16; ++i) {
        CHECK(t[i] == doctest::Approx(0.0));
        CHECK(r[i] == doctest::Approx(0.0));
    }
    const auto [t1, r1] = suboptimal_phases(GeometryAngles{}, 1, 0.5);
    CHECK(t1[0] == 0.0);
    CHECK(r1[0] == 0.0);

    SystemConfig cfg;
    cfg.n_elements = 16;
    const CfModel model(cfg);
    const double aligned = model.moments(aligned_state(cfg)).xi[u2d_br];
    CHECK(aligned == doctest::Approx(16.0 * 16.0 * 0.25));
    Rng rng(17);
    for (int k = 0; k < 100; ++k)
        CHECK(model.moments(random_state(16, rng)).xi[u2d_br] <= aligned + 1e-9);
    CHECK(model.moments(aligned_state(cfg)).xi[br_u2u] == doctest::Approx(64.0));
}

TEST_CASE("bidirectional alignment returns one of the two designs") {
    SystemConfig cfg;
    cfg.scenario = Scenario::bidirectional;
    const CfModel model(cfg);
    const auto s = aligned_state_bidirectional(model, cfg.power);
    const auto bs = aligned_state(cfg);
    const auto m = model.moments(s);
    const bool is_bs = s.phi_t == bs.phi_t && s.phi_r == bs.phi_r;
    const bool is_pair = m.xi[u1d_u2u] == doctest::Approx(100.0) && m.xi[u2d_u1u] == doctest::Approx(25.0);
    CHECK((is_bs || is_pair));
}

TEST_CASE("PGAM stops at once from its own fixed point") {
    SystemConfig cfg;
    cfg.n_elements = 1;
    auto init = StarRisState::uniform(1);
    init.phi_t[0] = 1.0;
    init.phi_r[0] = 2.0;
    PgamOptions opt;
    opt.max_iters = 500;
    opt.eps = 1e-10;
    const auto first = pgam(cfg, cfg.power, init, opt);
    opt.eps = 1e-6;
    const auto again = pgam(cfg, cfg.power, first.state, opt);
    CHECK(again.termination == Termination::converged);
    CHECK(again.trace.size() == 2);
    CHECK(again.trace[1] - again.trace[0] < 1e-6);
}

TEST_CASE("PGAM trace is monotone and the result feasible") {
    std::mt19937_64 rng(21);
    for (int k = 0; k < 5; ++k) {
        SystemConfig cfg = random_config(rng);
        cfg.n_elements = 8;
        Rng r(k);
        PgamOptions opt;
        opt.max_iters = 60;
        const auto res = pgam(cfg, cfg.power, random_state(8, r), opt);
        for (std::size_t i = 1; i < res.trace.size(); ++i) CHECK(res.trace[i] >= res.trace[i - 1] - 1e-12);
        CHECK(res.constraints.energy_split.ok);
        CHECK(res.constraints.unit_modulus.ok);
        CHECK(res.state.split_violation() < 1e-12);
    }
}

TEST_CASE("PGAM reaches the grid-search optimum of the toy") {
    const auto cfg = oracle::pgam_toy();
    const double grid = oracle::grid_search_edge_dl(cfg);
    const auto res = pgam(cfg, cfg.power, aligned_state(cfg), {});
    Rng r(3);
    const auto from_random = pgam(cfg, cfg.power, random_state(4, r), {.max_iters = 200});
    CHECK(res.trace.back() >= 0.98 * grid);
    CHECK(from_random.trace.back() >= from_random.trace.front());
}

TEST_CASE("PGAM rejects bad options and a non-finite start") {
    SystemConfig cfg;
    cfg.n_elements = 2;
    CHECK_THROWS_AS(pgam(cfg, cfg.power, StarRisState::uniform(2), {.mu = 0.0}), std::invalid_argument);
    auto pw = cfg.power;
    pw.noise.u2d = 0.0;
    pw.p_b1 = 0.0;
    pw.p_u1u = 0.0;
    pw.p_u2u = 0.0;
    CHECK_THROWS_AS(pgam(cfg, pw, StarRisState::uniform(2), {}), std::invalid_argument);
}

TEST_CASE("closed-form powers reproduce the targets and match a root finder") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int feasible = 0, tries = 0;
    while (feasible < 50 && tries < 20000) {
        ++tries;
        const SystemConfig cfg = random_config(rng);
        const CfModel model(cfg);
        Rng r(tries);
        const auto s = u(rng) < 0.5 ? aligned_state(cfg, 0.2 + 0.6 * u(rng)) : random_state(cfg.n_elements, r);
        const double total = std::pow(10.0, 1.0 + 3.0 * u(rng));
        const double rd = 0.05 + u(rng), ru = 0.05 + 2.0 * u(rng);
        const auto in = model.inputs(s);
        PowerConfig pw;
        try {
            pw = power_allocation_closed_form(in, cfg.power, total, rd, ru);
        } catch (const InfeasibleError&) {
            continue;
        }
        ++feasible;
        const auto rates = cf_rate_set(in, pw);
        CHECK(rel(rates.u2d, rd) < 1e-9);
        CHECK(rel(rates.u1d_to_u2d, rd) < 1e-9);
        CHECK(rel(rates.u2u, ru) < 1e-9);
        CHECK(rel(pw.p_b() + pw.p_u(), total) < 1e-9);
        const auto root = oracle::root_powers(in, cfg.power, total, rd, ru);
        REQUIRE(root.has_value());
        CHECK(rel((*root)[0], pw.p_b1) < 1e-8);
        CHECK(rel((*root)[1], pw.p_b2) < 1e-8);
        CHECK(rel((*root)[2], pw.p_u2u) < 1e-8);
        const auto report = validate_constraints(model, s, pw, model.rates(s, pw));
        CHECK(report.sic_order.margin >= -1e-9);
        CHECK(report.dl_target.margin >= -1e-9);
        CHECK(report.ul_target.margin >= -1e-9);
        CHECK(report.power_budget.ok);
    }
    CHECK(feasible == 50);
}

TEST_CASE("closed-form power errors") {
    SystemConfig cfg;
    const CfModel model(cfg);
    const auto s = aligned_state(cfg);
    CHECK_THROWS_AS(power_allocation_closed_form(model, s, cfg.power, 1000.0, 0.0, 0.0), DegenerateError);
    try {
        power_allocation_closed_form(model, s, cfg.power, 1000.0, 30.0, 1.0);
        FAIL("expected infeasible");
    } catch (const InfeasibleError& e) {
        CHECK(!e.binding_target().empty());
    }
    auto dark = StarRisState::uniform(cfg.n_elements, 1.0);
    CHECK_THROWS_AS(power_allocation_closed_form(model, dark, cfg.power, 1000.0, 1.0, 1.0), DegenerateError);
}

TEST_CASE("split allocation meets reachable targets inside each budget") {
    SystemConfig cfg;
    cfg.power.noise = {1e-9, 1e-9, 1e-9};
    cfg.power.si_beta = 0.0;
    const CfModel model(cfg);
    const auto in = model.inputs(aligned_state(cfg));
    const auto pw = power_allocation_split(in, cfg.power, 1000.0, 0.6, 0.5, 0.5);
    CHECK(pw.p_b() == doctest::Approx(600.0));
    CHECK(pw.p_u() == doctest::Approx(400.0));
    const auto r = cf_rate_set(in, pw);
    CHECK(r.u2d == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(r.u2u == doctest::Approx(0.5).epsilon(1e-9));
    const auto capped = power_allocation_split(in, cfg.power, 1000.0, 0.6, 40.0, 40.0);
    CHECK(capped.p_b1 == 0.0);
    CHECK(capped.p_u1u == 0.0);
    CHECK_THROWS_AS(power_allocation_split(in, cfg.power, 1000.0, 0.0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("constraint report") {
    SystemConfig cfg;
    const CfModel model(cfg);
    auto s = StarRisState::uniform(cfg.n_elements);
    PowerConfig zero = cfg.power;
    zero.p_b1 = zero.p_b2 = zero.p_u1u = zero.p_u2u = 0.0;
    const auto rep = validate_constraints(model, s, zero, model.rates(s, zero));
    CHECK(rep.power_budget.ok);
    CHECK_FALSE(rep.dl_target.ok);
    CHECK_FALSE(rep.ul_target.ok);
    CHECK_FALSE(rep.feasible());
    s.rho_t[3] = 0.6;
    const auto bad = validate_constraints(model, s, cfg.power, model.rates(s, cfg.power));
    CHECK_FALSE(bad.energy_split.ok);
    CHECK(bad.energy_split.margin == doctest::Approx(0.1));
    CHECK(bad.unit_modulus.ok);
}

TEST_CASE("joint design keeps the targets along the ascent") {
    std::mt19937_64 rng(41);
    int runs = 0;
    for (int tries = 0; tries < 500 && runs < 3; ++tries) {
        SystemConfig cfg = random_config(rng);
        cfg.n_elements = 9;
        const CfModel model(cfg);
        const auto init = aligned_state(cfg);
        try {
            power_allocation_closed_form(model, init, cfg.power, 1000.0, 0.5, 0.5);
        } catch (const InfeasibleError&) {
            continue;
        }
        ++runs;
        PgamOptions opt;
        opt.max_iters = 30;
        const auto res = optimize_joint(model, cfg.power, init, 1000.0, 0.5, 0.5, opt);
        const auto r = model.rates(res.state, res.power).rates;
        CHECK(r.u2d == doctest::Approx(0.5).epsilon(1e-9));
        CHECK(r.u2u == doctest::Approx(0.5).epsilon(1e-9));
        CHECK(res.constraints.feasible());
        for (std::size_t i = 1; i < res.trace.size(); ++i) CHECK(res.trace[i] >= res.trace[i - 1]);
    }
    CHECK(runs == 3);
}
