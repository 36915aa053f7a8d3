#pragma once

#include <array>
#include <cmath>
#include <optional>

#include <Eigen/Core>
#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include "starfd/rates_cf.hpp"

namespace oracle {

using starfd::CfRateInputs;
using starfd::PowerConfig;
using starfd::cf_rate_set;

// Powell hybrid root finder on the three defining equations, written as
// SINR / threshold - 1 over the power fractions (P_b1, P_b2, p_u2u) / P_t;
// p_u1u takes the rest of the budget.
struct RateEquations {
    using Scalar = double;
    using InputType = Eigen::VectorXd;
    using ValueType = Eigen::VectorXd;
    using JacobianType = Eigen::MatrixXd;
    enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

    const CfRateInputs* in;
    PowerConfig pw;
    double total, gd, gu;

    RateEquations(const CfRateInputs& i, const PowerConfig& p, double t, double rd, double ru)
        : in(&i), pw(p), total(t), gd(std::exp2(rd) - 1.0), gu(std::exp2(ru) - 1.0) {}

    int inputs() const { return 3; }
    int values() const { return 3; }

    PowerConfig powers(const Eigen::VectorXd& x) const {
        PowerConfig q = pw;
        q.p_b1 = x[0] * total;
        q.p_b2 = x[1] * total;
        q.p_u2u = x[2] * total;
        q.p_u1u = total - q.p_b1 - q.p_b2 - q.p_u2u;
        return q;
    }

    int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& f) const {
        const auto g = starfd::cf_sinrs(*in, powers(x));
        f << g.u2d / gd - 1.0, g.u1d_to_u2d / gd - 1.0, g.u2u / gu - 1.0;
        return 0;
    }
};

inline std::optional<std::array<double, 3>> root_powers(const CfRateInputs& in,
                                                        const PowerConfig& pw, double total,
                                                        double rd, double ru) {
    RateEquations eq(in, pw, total, rd, ru);
    Eigen::NumericalDiff<RateEquations, Eigen::Central> diff(eq);
    for (double b1 : {0.05, 0.2, 0.5, 0.9, 0.01})
        for (double b2 : {0.3, 0.1, 0.03, 0.6})
            for (double u2 : {1e-2, 1e-4, 1e-3, 1e-6, 0.1}) {
                if (b1 + b2 + u2 >= 1.0) continue;
                Eigen::VectorXd x(3);
                x << b1, b2, u2;
                Eigen::HybridNonLinearSolver<decltype(diff)> solver(diff);
                solver.solve(x);
                Eigen::VectorXd f(3);
                eq(x, f);
                const auto q = eq.powers(x);
                if (f.lpNorm<Eigen::Infinity>() < 1e-12 && q.p_b1 > 0 && q.p_b2 > 0 && q.p_u2u > 0 &&
                    q.p_u1u > 0)
                    return std::array<double, 3>{q.p_b1, q.p_b2, q.p_u2u};
            }
    return std::nullopt;
}

}  // namespace oracle
