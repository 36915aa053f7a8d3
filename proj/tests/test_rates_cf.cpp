#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "starfd/rates_cf.hpp"

using namespace starfd;
using std::numbers::pi;

namespace {

StarRisState random_state(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto s = StarRisState::uniform(n);
    for (std::size_t i = 0; i < n; ++i) {
        s.rho_t[i] = u(rng);
        s.rho_r[i] = 1.0 - s.rho_t[i];
        s.phi_t[i] = 2 * pi * u(rng);
        s.phi_r[i] = 2 * pi * u(rng);
    }
    return s;
}

// |sum_n a_n c_n b_n|^2 expanded as a double sum.
double double_sum_gain(const CVec& a, const std::vector<double>& rho, const std::vector<double>& phi,
                       const CVec& b) {
    cplx acc{};
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j)
            acc += a[i] * b[i] * rho[i] * std::polar(1.0, phi[i]) *
                   std::conj(a[j] * b[j] * rho[j] * std::polar(1.0, phi[j]));
    return acc.real();
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("LoS cascade gains match the explicit double sum") {
    SystemConfig cfg;
    cfg.n_elements = 16;
    std::mt19937_64 rng(3);
    const auto los = los_vectors(cfg);
    for (int k = 0; k < 10; ++k) {
        const auto s = random_state(cfg.n_elements, rng);
        const auto m = compute_moments(cfg, s);
        CHECK(rel(m.xi[u1d_br], double_sum_gain(los.r_u1d, s.rho_t, s.phi_t, los.b_r)) < 1e-12);
        CHECK(rel(m.xi[u1d_u2u], double_sum_gain(los.r_u1d, s.rho_t, s.phi_t, los.r_u2u)) < 1e-12);
        CHECK(rel(m.xi[u2d_br], double_sum_gain(los.r_u2d, s.rho_r, s.phi_r, los.b_r)) < 1e-12);
        CHECK(rel(m.xi[u2d_u1u], double_sum_gain(los.r_u2d, s.rho_r, s.phi_r, los.r_u1u)) < 1e-12);
        CHECK(rel(m.xi[br_u2u], double_sum_gain(los.b_r, s.rho_t, s.phi_t, los.r_u2u)) < 1e-12);
    }
}

TEST_CASE("single element gains reduce to the squared amplitude") {
    SystemConfig cfg;
    cfg.n_elements = 1;
    auto s = StarRisState::uniform(1, 0.3);
    s.phi_t[0] = 1.1;
    s.phi_r[0] = -2.0;
    const auto m = compute_moments(cfg, s);
    for (int k : {1, 2, 3, 7, 8, 9}) CHECK(m.xi[k] == doctest::Approx(0.09).epsilon(1e-12));
    for (int k : {4, 5, 6}) CHECK(m.xi[k] == doctest::Approx(0.49).epsilon(1e-12));
}

TEST_CASE("dark surface leaves only direct links") {
    SystemConfig cfg;
    auto s = StarRisState::uniform(cfg.n_elements, 0.0);
    std::fill(s.rho_r.begin(), s.rho_r.end(), 0.0);
    const CfModel model(cfg);
    const auto in = model.inputs(s);
    const auto& p = model.pathloss();
    CHECK(in.u1d.x1 == doctest::Approx(p.direct_u1d));
    CHECK(in.u1d.y1 == doctest::Approx(p.user_user));
    CHECK(in.u1d.y2 == 0.0);
    CHECK(in.u2d.x1 == 0.0);
    CHECK(in.u1u.y2 == 0.0);
    const auto r = model.rates(s, cfg.power).rates;
    CHECK(r.u2d == 0.0);
    CHECK(r.u2u == 0.0);
    CHECK(r.u1d > 0.0);
}

TEST_CASE("cascade second moments match sampled channels") {
    SystemConfig cfg;
    cfg.n_elements = 9;
    cfg.kappa.b_r = 2.0;
    cfg.kappa.r_u2d = 5.0;
    cfg.kappa.r_u2u = 0.5;
    std::mt19937_64 srng(8);
    const auto s = random_state(cfg.n_elements, srng);
    const auto m = compute_moments(cfg, s);
    const auto los = los_vectors(cfg);
    const auto ct = s.coefficients(Side::transmit);
    const auto cr = s.coefficients(Side::reflect);
    Rng rng(11);
    const int trials = 400000;
    double br_edge = 0, edge_dl = 0, loop = 0;
    for (int t = 0; t < trials; ++t) {
        const auto g_br = sample_rician({cfg.kappa.b_r, los.b_r}, cfg.n_elements, rng);
        const auto g_2d = sample_rician({cfg.kappa.r_u2d, los.r_u2d}, cfg.n_elements, rng);
        const auto g_2u = sample_rician({cfg.kappa.r_u2u, los.r_u2u}, cfg.n_elements, rng);
        br_edge += std::norm(star_cascade(g_br, ct, g_2u));
        edge_dl += std::norm(star_cascade(g_2d, cr, g_br));
        CVec back(g_br.size());
        for (std::size_t i = 0; i < back.size(); ++i) back[i] = std::conj(g_br[i]);
        loop += std::norm(star_cascade(g_br, ct, back));
    }
    auto mean = [&](int k) { return m.mix[k].varpi * m.xi[k] + m.mix[k].varpi_hat; };
    CHECK(rel(br_edge / trials, mean(br_u2u)) < 0.01);
    CHECK(rel(edge_dl / trials, mean(u2d_br)) < 0.01);
    CHECK(rel(loop / trials, m.loop_second_moment) < 0.01);
}

TEST_CASE("loop moment is real and matches its reduced form") {
    SystemConfig cfg;
    std::mt19937_64 rng(5);
    for (int k = 0; k < 20; ++k) {
        const auto s = random_state(cfg.n_elements, rng);
        const auto m = compute_moments(cfg, s);
        const double a2 = cfg.kappa.b_r / (cfg.kappa.b_r + 1), b2 = 1 / (cfg.kappa.b_r + 1);
        const double reduced = std::norm(m.sum_coeff_t) + (2 * a2 * b2 + b2 * b2) * m.sum_rho_sq_t;
        CHECK(rel(m.loop_second_moment, reduced) < 1e-12);
        CHECK(rel(m.xi[br_loop], std::norm(m.sum_coeff_t)) < 1e-12);
    }
}

TEST_CASE("UL terms of the two users share links") {
    SystemConfig cfg;
    std::mt19937_64 rng(6);
    const CfModel model(cfg);
    const auto in = model.inputs(random_state(cfg.n_elements, rng));
    CHECK(in.u2u.x1 == doctest::Approx(in.u1u.y1).epsilon(1e-14));
    CHECK(in.u2u.y1 == doctest::Approx(in.u1u.x1).epsilon(1e-14));
    CHECK(in.u2u.y2 == doctest::Approx(in.u1u.y2).epsilon(1e-14));
}

TEST_CASE("reduced expressions equal the switched full forms") {
    SystemConfig cfg;
    cfg.power.sic_error = 0.0;
    cfg.power.si_beta = 0.0;
    cfg.kappa = {2.0, 4.0, 1.5, 3.0, 6.0};
    const auto pos = representative_positions(cfg.geometry);
    const CfModel model(cfg, PathlossMoments::fixed(link_pathloss(cfg.geometry, pos)));
    std::mt19937_64 rng(9);
    for (int k = 0; k < 10; ++k) {
        const auto s = random_state(cfg.n_elements, rng);
        const auto full = model.rates(s, cfg.power, {true, true}).rates;
        const auto reduced = cf_rates_simplified(cfg, s, cfg.power, pos).rates;
        CHECK(rel(reduced.u1d, full.u1d) < 1e-12);
        CHECK(rel(reduced.u2d, full.u2d) < 1e-12);
        CHECK(rel(reduced.u1u, full.u1u) < 1e-12);
        CHECK(rel(reduced.u2u, full.u2u) < 1e-12);
    }
}

TEST_CASE("representative positions lie inside their disks") {
    CellGeometry g;
    const auto p = representative_positions(g);
    CHECK(p.u1d.radius < g.R);
    CHECK(p.u2u.radius < g.R_r);
    CHECK(p.u1d.region == Region::center);
    CHECK(p.u2d.region == Region::edge);
}

TEST_CASE("SIC error and self-interference degrade the right users") {
    SystemConfig cfg;
    std::mt19937_64 rng(12);
    const auto s = random_state(cfg.n_elements, rng);
    const CfModel model(cfg);
    auto pw = cfg.power;
    pw.si_beta = 0.0;
    pw.sic_error = 0.0;
    const auto base = model.rates(s, pw).rates;
    pw.sic_error = 0.3;
    const auto sic = model.rates(s, pw).rates;
    CHECK(sic.u1d < base.u1d);
    CHECK(sic.u2u < base.u2u);
    CHECK(sic.u2d == doctest::Approx(base.u2d));
    CHECK(sic.u1u == doctest::Approx(base.u1u));
    pw.sic_error = 0.0;
    pw.si_beta = 10.0;
    const auto si = model.rates(s, pw).rates;
    CHECK(si.u1u < base.u1u);
    CHECK(si.u2u < base.u2u);
    CHECK(si.u1d == doctest::Approx(base.u1d));
}

TEST_CASE("rates grow with the intended user's power") {
    SystemConfig cfg;
    cfg.power.si_beta = 0.0;
    std::mt19937_64 rng(13);
    const auto s = random_state(cfg.n_elements, rng);
    const CfModel model(cfg);
    double prev_dl = -1, prev_ul = -1;
    for (double p : {1.0, 10.0, 100.0, 1000.0}) {
        auto pw = cfg.power;
        pw.p_b1 = p;
        pw.p_u2u = p;
        const auto r = model.rates(s, pw).rates;
        CHECK(r.u1d > prev_dl);
        CHECK(r.u2u > prev_ul);
        prev_dl = r.u1d;
        prev_ul = r.u2u;
    }
}

TEST_CASE("bidirectional rates combine both relays") {
    SystemConfig cfg;
    cfg.scenario = Scenario::bidirectional;
    std::mt19937_64 rng(14);
    const auto s = random_state(cfg.n_elements, rng);
    const auto r = cf_rates(cfg, s, cfg.power).rates;
    CHECK(r.c == doctest::Approx(std::min(r.u2u, r.uc)));
    CHECK(r.e == doctest::Approx(std::min(r.u1u, r.ue)));
    CHECK(r.uc > 0.0);
    CHECK(r.ue > 0.0);
    const auto [c, e] = cf_rates_bidirectional(cfg, s, cfg.power);
    CHECK(c == r.c);
    CHECK(e == r.e);
}

TEST_CASE("edge-user closed forms track the sampled rates") {
    SystemConfig cfg;
    cfg.n_elements = 16;
    cfg.power.si_beta = 0.0;
    const auto s = StarRisState::uniform(cfg.n_elements);
    const auto cf = cf_rates(cfg, s, cfg.power).rates;
    McOptions opt;
    const auto mc = ergodic_rate_mc(cfg, s, cfg.power, 20000, 21, opt).rates;
    CHECK(rel(cf.u2d, mc.u2d) < 0.15);
    CHECK(rel(cf.u2u, mc.u2u) < 0.15);
}

TEST_CASE("size mismatch is rejected") {
    SystemConfig cfg;
    CHECK_THROWS_AS(compute_moments(cfg, StarRisState::uniform(3)), std::invalid_argument);
}
