// SPDX-License-Identifier: Apache-2.0
#include "starfd/experiment.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <thread>

#include "starfd/errors.hpp"

namespace starfd {

const char* to_string(SweepVariable v) {
    switch (v) {
        case SweepVariable::snr_db: return "snr_db";
        case SweepVariable::n_elements: return "n_elements";
        case SweepVariable::tau: return "tau";
        case SweepVariable::xi: return "xi";
        case SweepVariable::beta: return "beta";
        case SweepVariable::target_rate: return "target_rate";
    }
    return "?";
}

const char* to_string(Design d) {
    switch (d) {
        case Design::pgam: return "pgam";
        case Design::aligned: return "aligned";
        case Design::random: return "random";
    }
    return "?";
}

const char* to_string(PowerScheme p) {
    switch (p) {
        case PowerScheme::fixed: return "fixed";
        case PowerScheme::closed_form: return "closed_form";
        case PowerScheme::split_targets: return "split_targets";
    }
    return "?";
}

namespace {

constexpr std::string_view kDefaults = R"(name = custom
scenario = noma
cell_radius_m = 50
edge_radius_m = 30
bs_ris_distance_m = 70
pathloss_exponent = 2.7
kappa_br = 3
kappa_u1d = 3
kappa_u2d = 3
kappa_u1u = 3
kappa_u2u = 3
n_elements = 20
d_over_lambda = 0.5
angle_br_deg = 40, 70
angle_u1d_deg = 200, 60
angle_u2d_deg = -30, 50
angle_u1u_deg = 160, 75
angle_u2u_deg = 20, 40
quad_nodes = 64
noise_dbw = 0
snr_db = 30
tx_power_dbw =
tau = 0.8
alpha1 = 0.2
ul_share_u1 = 0.5
sic_error = 0
si_beta = 0.001
si_lambda = 0.1
target_dl_bps = 1
target_ul_bps = 1
target_dl_cases =
weight_u1d = 0.8
weight_u2d = 0.8
weight_u1u = 0.8
weight_u2u = 0.8
weight_c = 0.8
weight_e = 0.8
sweep = snr_db
grid = 30
designs = aligned
rho_t = 0.5
power_scheme = fixed
estimators = cf
trials = 100000
seed = 1
pgam_mu = 0.5
pgam_alpha = 1
pgam_eps = 1e-6
pgam_max_iters = 200
pgam_step_rule = backtracking
output = results.csv
)";

double from_db(double db) { return std::pow(10.0, db / 10.0); }

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    while (true) {
        const auto pos = s.find(sep);
        auto part = s.substr(0, pos);
        const auto b = part.find_first_not_of(" \t");
        const auto e = part.find_last_not_of(" \t");
        out.push_back(b == std::string_view::npos ? std::string_view{} : part.substr(b, e - b + 1));
        if (pos == std::string_view::npos) break;
        s = s.substr(pos + 1);
    }
    return out;
}

// Typed access to resolved entries, collecting every problem.
class Reader {
public:
    explicit Reader(const KeyValues& kv) : kv_(kv) {}

    std::vector<std::string>& problems() { return problems_; }

    std::string text(const std::string& key) { return kv_.get(key).value_or(""); }

    std::optional<double> parse_number(std::string_view s) const {
        const std::string str(s);
        if (str.empty()) return std::nullopt;
        char* end = nullptr;
        errno = 0;
        const double v = std::strtod(str.c_str(), &end);
        if (end != str.c_str() + str.size() || errno == ERANGE || !std::isfinite(v)) return std::nullopt;
        return v;
    }

    double number(const std::string& key) {
        const auto v = parse_number(text(key));
        if (!v) {
            problems_.push_back(key + ": expected a number, got '" + text(key) + "'");
            return 0.0;
        }
        return *v;
    }

    std::optional<double> optional_number(const std::string& key) {
        if (text(key).empty()) return std::nullopt;
        return number(key);
    }

    std::uint64_t integer(const std::string& key, std::uint64_t min) {
        const std::string s = text(key);
        char* end = nullptr;
        errno = 0;
        const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
        if (s.empty() || s[0] == '-' || end != s.c_str() + s.size() || errno == ERANGE || v < min) {
            problems_.push_back(key + ": expected an integer >= " + std::to_string(min) + ", got '" +
                                s + "'");
            return min;
        }
        return v;
    }

    // "a, b, c" or "start:step:stop" (inclusive).
    std::vector<double> list(const std::string& key) {
        const std::string s = text(key);
        std::vector<double> out;
        if (s.empty()) return out;
        if (s.find(':') != std::string::npos) {
            const auto parts = split(s, ':');
            std::array<double, 3> abc{};
            bool ok = parts.size() == 3;
            for (std::size_t i = 0; ok && i < 3; ++i) {
                const auto v = parse_number(parts[i]);
                ok = v.has_value();
                if (ok) abc[i] = *v;
            }
            const auto [a, step, b] = abc;
            if (!ok || !(step > 0.0) || b < a) {
                problems_.push_back(key + ": expected start:step:stop with step > 0, got '" + s + "'");
                return out;
            }
            const auto count = static_cast<long>(std::floor((b - a) / step + 1e-9));
            if (count > 100000) {
                problems_.push_back(key + ": range has too many points");
                return out;
            }
            for (long i = 0; i <= count; ++i) out.push_back(a + static_cast<double>(i) * step);
            return out;
        }
        for (auto part : split(s, ',')) {
            const auto v = parse_number(part);
            if (!v) {
                problems_.push_back(key + ": bad list entry '" + std::string(part) + "'");
                return {};
            }
            out.push_back(*v);
        }
        return out;
    }

    Direction direction(const std::string& key) {
        const std::string s = text(key);
        const auto parts = split(s, ',');
        const auto az = parts.size() == 2 ? parse_number(parts[0]) : std::nullopt;
        const auto el = parts.size() == 2 ? parse_number(parts[1]) : std::nullopt;
        if (!az || !el) {
            problems_.push_back(key + ": expected 'azimuth, elevation' in degrees");
            return {};
        }
        return Direction::degrees(*az, *el);
    }

    template <class E>
    E choice(const std::string& key, std::initializer_list<std::pair<std::string_view, E>> options) {
        const std::string s = text(key);
        for (const auto& [name, value] : options)
            if (s == name) return value;
        std::string allowed;
        for (const auto& [name, value] : options) allowed += (allowed.empty() ? "" : "|") + std::string(name);
        problems_.push_back(key + ": expected one of " + allowed + ", got '" + s + "'");
        return options.begin()->second;
    }

private:
    const KeyValues& kv_;
    std::vector<std::string> problems_;
};

KeyValues defaults() { return KeyValues::parse(kDefaults, "<defaults>"); }

}  // namespace

ExperimentSpec resolve_experiment(const KeyValues& given) {
    KeyValues kv = defaults();
    std::vector<std::string> problems;
    if (const auto preset = given.get("preset")) {
        if (const auto text = preset_text(*preset))
            kv.merge(KeyValues::parse(*text, "preset " + *preset));
        else
            problems.push_back("preset: unknown preset '" + *preset + "'");
    }
    kv.merge(given);
    kv.erase("preset");

    ExperimentSpec spec;
    if (const auto t = kv.get("threads")) {
        char* end = nullptr;
        const auto n = std::strtoul(t->c_str(), &end, 10);
        if (t->empty() || end != t->c_str() + t->size() || n > 1024)
            problems.push_back("threads: expected an integer in [0, 1024], got '" + *t + "'");
        spec.threads = static_cast<unsigned>(n);
        kv.erase("threads");
    }
    const KeyValues known = defaults();
    for (const auto& [k, v] : kv.entries())
        if (!known.contains(k)) problems.push_back("unknown key '" + k + "'");

    Reader r(kv);
    SystemConfig& c = spec.base;
    spec.name = r.text("name");
    c.scenario = r.choice<Scenario>("scenario", {{"noma", Scenario::noma_pair},
                                                 {"bidirectional", Scenario::bidirectional}});
    c.geometry.R = r.number("cell_radius_m");
    c.geometry.R_r = r.number("edge_radius_m");
    c.geometry.d_br = r.number("bs_ris_distance_m");
    c.geometry.m = r.number("pathloss_exponent");
    c.kappa = {r.number("kappa_br"), r.number("kappa_u1d"), r.number("kappa_u2d"),
               r.number("kappa_u1u"), r.number("kappa_u2u")};
    c.n_elements = r.integer("n_elements", 1);
    c.angles.d_over_lambda = r.number("d_over_lambda");
    c.angles.b_r = r.direction("angle_br_deg");
    c.angles.r_u1d = r.direction("angle_u1d_deg");
    c.angles.r_u2d = r.direction("angle_u2d_deg");
    c.angles.r_u1u = r.direction("angle_u1u_deg");
    c.angles.r_u2u = r.direction("angle_u2u_deg");
    c.quad_nodes = r.integer("quad_nodes", 8);
    spec.noise_dbw = r.number("noise_dbw");
    spec.snr_db = r.number("snr_db");
    spec.tx_power_dbw = r.optional_number("tx_power_dbw");
    c.power.tau = r.number("tau");
    spec.alpha1 = r.number("alpha1");
    spec.ul_share_u1 = r.number("ul_share_u1");
    c.power.sic_error = r.number("sic_error");
    c.power.si_beta = r.number("si_beta");
    c.power.si_lambda = r.number("si_lambda");
    c.power.target_dl = r.number("target_dl_bps");
    c.power.target_ul = r.number("target_ul_bps");
    spec.target_dl_cases = r.list("target_dl_cases");
    c.weights = {r.number("weight_u1d"), r.number("weight_u2d"), r.number("weight_u1u"),
                 r.number("weight_u2u"), r.number("weight_c"),   r.number("weight_e")};
    spec.sweep = r.choice<SweepVariable>(
        "sweep", {{"snr_db", SweepVariable::snr_db}, {"n_elements", SweepVariable::n_elements},
                  {"tau", SweepVariable::tau}, {"xi", SweepVariable::xi},
                  {"beta", SweepVariable::beta}, {"target_rate", SweepVariable::target_rate}});
    spec.grid = r.list("grid");
    const std::string designs = r.text("designs");
    for (auto part : split(designs, ',')) {
        const std::string s(part);
        if (s == "pgam") spec.designs.push_back(Design::pgam);
        else if (s == "aligned") spec.designs.push_back(Design::aligned);
        else if (s == "random") spec.designs.push_back(Design::random);
        else r.problems().push_back("designs: unknown design '" + s + "' (pgam|aligned|random)");
    }
    spec.rho_t = r.number("rho_t");
    spec.power_scheme = r.choice<PowerScheme>("power_scheme",
                                              {{"fixed", PowerScheme::fixed},
                                               {"closed_form", PowerScheme::closed_form},
                                               {"split_targets", PowerScheme::split_targets}});
    const int est = r.choice<int>("estimators", {{"cf", 1}, {"mc", 2}, {"both", 3}});
    spec.cf = (est & 1) != 0;
    spec.mc = (est & 2) != 0;
    spec.trials = r.integer("trials", 1);
    spec.seed = r.integer("seed", 0);
    spec.pgam.mu = r.number("pgam_mu");
    spec.pgam.alpha = r.number("pgam_alpha");
    spec.pgam.eps = r.number("pgam_eps");
    spec.pgam.max_iters = static_cast<int>(r.integer("pgam_max_iters", 1));
    spec.pgam.backtracking =
        r.choice<bool>("pgam_step_rule", {{"backtracking", true}, {"fixed", false}});
    spec.output = r.text("output");

    auto& p = r.problems();
    if (spec.grid.empty()) p.push_back("grid must not be empty");
    if (!std::is_sorted(spec.grid.begin(), spec.grid.end()) ||
        std::adjacent_find(spec.grid.begin(), spec.grid.end()) != spec.grid.end())
        p.push_back("grid must be sorted ascending without repeats");
    if (spec.designs.empty()) p.push_back("designs must name at least one design");
    if (!(spec.alpha1 >= 0.0 && spec.alpha1 < 0.5))
        p.push_back("alpha1 must lie in [0, 0.5) so that alpha1 < alpha2 (NOMA ordering)");
    if (!(spec.ul_share_u1 >= 0.0 && spec.ul_share_u1 <= 1.0))
        p.push_back("ul_share_u1 must lie in [0, 1]");
    if (!(spec.rho_t >= 0.0 && spec.rho_t <= 1.0)) p.push_back("rho_t must lie in [0, 1]");
    if (spec.sweep == SweepVariable::snr_db && spec.tx_power_dbw)
        p.push_back("sweep snr_db conflicts with tx_power_dbw");
    if (spec.sweep == SweepVariable::n_elements)
        for (double v : spec.grid)
            if (!(v >= 1.0 && v == std::floor(v))) p.push_back("n_elements grid values must be positive integers");
    for (double t : spec.target_dl_cases)
        if (!(t >= 0.0)) p.push_back("target_dl_cases must be non-negative");
    if (spec.power_scheme != PowerScheme::fixed && c.scenario == Scenario::bidirectional)
        p.push_back("power_scheme " + std::string(to_string(spec.power_scheme)) +
                    " applies to the noma scenario only");
    if (spec.output.empty()) {
        p.push_back("output must name a file");
    } else {
        const auto dir = spec.output.parent_path();
        if (!dir.empty() && !std::filesystem::is_directory(dir))
            p.push_back("output directory does not exist: " + dir.string());
    }
    problems.insert(problems.end(), p.begin(), p.end());

    // Every grid point must give a valid system; an empty grid checks the base point.
    std::vector<double> values = spec.grid;
    if (values.empty()) values.push_back(spec.sweep == SweepVariable::tau ? c.power.tau : spec.snr_db);
    std::vector<std::optional<double>> cases{std::nullopt};
    for (double t : spec.target_dl_cases) cases.emplace_back(t);
    for (const auto& target : cases)
        for (double v : values) {
            try {
                grid_point(spec, v, target).config.validate();
            } catch (const ValidationError& e) {
                for (const auto& msg : e.problems())
                    if (std::find(problems.begin(), problems.end(), msg) == problems.end())
                        problems.push_back(msg);
            }
        }
    if (!problems.empty()) throw ValidationError(std::move(problems));
    spec.resolved = std::move(kv);
    return spec;
}

ExperimentSpec load_experiment(const std::filesystem::path& path) {
    return resolve_experiment(KeyValues::load(path));
}

SystemConfig validate_config(const std::filesystem::path& path) {
    const auto spec = load_experiment(path);
    return grid_point(spec, spec.grid.front(), std::nullopt).config;
}

GridPoint grid_point(const ExperimentSpec& spec, double value, std::optional<double> target_dl) {
    GridPoint out{spec.base, 0.0};
    SystemConfig& c = out.config;
    double snr = spec.snr_db;
    switch (spec.sweep) {
        case SweepVariable::snr_db: snr = value; break;
        case SweepVariable::n_elements: c.n_elements = static_cast<std::size_t>(std::llround(value)); break;
        case SweepVariable::tau: c.power.tau = value; break;
        case SweepVariable::xi: c.power.sic_error = value; break;
        case SweepVariable::beta: c.power.si_beta = value; break;
        case SweepVariable::target_rate: c.power.target_dl = value; break;
    }
    if (target_dl) c.power.target_dl = *target_dl;
    const double noise = from_db(spec.noise_dbw);
    c.power.noise = {noise, noise, noise};
    out.total_power = spec.tx_power_dbw ? from_db(*spec.tx_power_dbw) : noise * from_db(snr);
    c.power.set_split(out.total_power, c.power.tau, spec.alpha1, spec.ul_share_u1);
    return out;
}

namespace {

struct Designed {
    StarRisState state;
    PowerConfig power;
};

Designed design_point(const ExperimentSpec& spec, const GridPoint& point, const CfModel& model,
                      Design design, std::uint64_t point_seed) {
    const SystemConfig& cfg = point.config;
    const PowerConfig& base = cfg.power;
    const double total = point.total_power;
    const StarRisState start = cfg.scenario == Scenario::bidirectional
                                   ? aligned_state_bidirectional(model, base, spec.rho_t)
                                   : aligned_state(cfg, spec.rho_t);
    if (design == Design::pgam && spec.power_scheme == PowerScheme::closed_form) {
        auto res = optimize_joint(model, base, start, total, base.target_dl, base.target_ul, spec.pgam);
        return {std::move(res.state), res.power};
    }
    StarRisState state;
    switch (design) {
        case Design::aligned: state = start; break;
        case Design::random: {
            Rng rng = make_rng(point_seed, 0);
            state = random_state(cfg.n_elements, rng, spec.rho_t);
            break;
        }
        case Design::pgam: state = pgam(model, base, start, spec.pgam).state; break;
    }
    switch (spec.power_scheme) {
        case PowerScheme::fixed: return {std::move(state), base};
        case PowerScheme::closed_form: {
            auto pw = power_allocation_closed_form(model, state, base, total, base.target_dl, base.target_ul);
            return {std::move(state), pw};
        }
        case PowerScheme::split_targets: {
            auto pw = power_allocation_split(model.inputs(state), base, total, base.tau,
                                             base.target_dl, base.target_ul);
            return {std::move(state), pw};
        }
    }
    return {std::move(state), base};
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string csv_text(const ExperimentSpec& spec, const std::vector<ResultRow>& rows) {
    const bool bidir = spec.base.scenario == Scenario::bidirectional;
    const bool cases = !spec.target_dl_cases.empty();
    const char* names[4] = {"u1d", "u2d", "u1u", "u2u"};
    const char* bnames[4] = {"c", "e", "uc", "ue"};
    const char* const* cols = bidir ? bnames : names;
    std::string out = to_string(spec.sweep);
    if (cases) out += ",target_dl_bps";
    out += ",design,estimator";
    for (int i = 0; i < 4; ++i) out += std::string(",R_") + cols[i];
    out += ",sum";
    for (int i = 0; i < 4; ++i) out += std::string(",stderr_") + cols[i];
    out += ",stderr_sum,P_b1,P_b2,p_u1u,p_u2u\n";
    for (const auto& row : rows) {
        const auto& r = row.report.rates;
        const auto& s = row.report.stderr_;
        const std::array<double, 4> v = bidir ? std::array{r.c, r.e, r.uc, r.ue}
                                              : std::array{r.u1d, r.u2d, r.u1u, r.u2u};
        const std::array<double, 4> e = bidir ? std::array{s.c, s.e, s.uc, s.ue}
                                              : std::array{s.u1d, s.u2d, s.u1u, s.u2u};
        const bool mc = row.report.estimator == Estimator::mc;
        out += fmt(row.value);
        if (cases) out += "," + fmt(*row.target_dl);
        out += std::string(",") + to_string(row.design) + "," + to_string(row.report.estimator);
        for (double x : v) out += "," + fmt(x);
        out += "," + fmt(row.report.weighted_sum);
        for (double x : e) out += "," + (mc ? fmt(x) : std::string());
        out += "," + (mc ? fmt(row.report.weighted_sum_stderr) : std::string());
        out += "," + fmt(row.power.p_b1) + "," + fmt(row.power.p_b2) + "," + fmt(row.power.p_u1u) +
               "," + fmt(row.power.p_u2u) + "\n";
    }
    return out;
}

std::vector<TauSummary> tau_summary(const ExperimentSpec& spec, const std::vector<ResultRow>& rows) {
    std::vector<TauSummary> out;
    for (const auto& row : rows) {
        const double target = row.target_dl.value_or(spec.base.power.target_dl);
        auto it = std::find_if(out.begin(), out.end(), [&](const TauSummary& s) {
            return s.target_dl == target && s.design == row.design && s.estimator == row.report.estimator;
        });
        if (it == out.end()) {
            out.push_back({target, row.design, row.report.estimator, row.value, row.report.weighted_sum});
        } else if (row.report.weighted_sum > it->max_sum) {
            it->argmax_tau = row.value;
            it->max_sum = row.report.weighted_sum;
        }
    }
    return out;
}

std::string summary_text(const std::vector<TauSummary>& summary) {
    std::string out = "target_dl_bps,design,estimator,argmax_tau,max_sum\n";
    for (const auto& s : summary)
        out += fmt(s.target_dl) + "," + to_string(s.design) + "," + to_string(s.estimator) + "," +
               fmt(s.argmax_tau) + "," + fmt(s.max_sum) + "\n";
    return out;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace

ExperimentResult execute(const ExperimentSpec& spec) {
    const std::vector<std::optional<double>> cases =
        spec.target_dl_cases.empty()
            ? std::vector<std::optional<double>>{std::nullopt}
            : std::vector<std::optional<double>>(spec.target_dl_cases.begin(), spec.target_dl_cases.end());
    const std::size_t tasks = cases.size() * spec.grid.size();
    std::vector<std::vector<ResultRow>> buckets(tasks);
    std::vector<std::exception_ptr> errors(tasks);

    auto run_task = [&](std::size_t t) {
        const auto& target = cases[t / spec.grid.size()];
        const double value = spec.grid[t % spec.grid.size()];
        const GridPoint point = grid_point(spec, value, target);
        const CfModel model(point.config);
        const std::uint64_t point_seed = derive_seed(spec.seed, t);
        for (std::size_t d = 0; d < spec.designs.size(); ++d) {
            const Designed des = design_point(spec, point, model, spec.designs[d], point_seed);
            if (spec.cf)
                buckets[t].push_back({target, value, spec.designs[d], model.rates(des.state, des.power), des.power});
            if (spec.mc)
                buckets[t].push_back({target, value, spec.designs[d],
                                      ergodic_rate_mc(point.config, des.state, des.power, spec.trials,
                                                      derive_seed(point_seed, 1 + d)),
                                      des.power});
        }
    };

    unsigned threads = spec.threads != 0 ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, tasks));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t t = next++; t < tasks; t = next++) {
            try {
                run_task(t);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
        worker();
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    ExperimentResult result;
    for (auto& b : buckets) result.rows.insert(result.rows.end(), b.begin(), b.end());
    result.csv = csv_text(spec, result.rows);
    if (spec.sweep == SweepVariable::tau) {
        result.summary = tau_summary(spec, result.rows);
        result.summary_csv = summary_text(result.summary);
    }
    result.manifest = "# resolved configuration; rerun with: starfd run <this file>\n" +
                      spec.resolved.serialize();
    return result;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    ExperimentResult result = execute(spec);
    write_file(spec.output, result.csv);
    write_file(spec.output.string() + ".manifest", result.manifest);
    if (spec.sweep == SweepVariable::tau) write_file(spec.output.string() + ".summary.csv", result.summary_csv);
    return result;
}

}  // namespace starfd
