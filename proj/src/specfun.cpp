// SPDX-License-Identifier: Apache-2.0
#include "starfd/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "starfd/errors.hpp"

namespace starfd {

double hyper_pFq(std::span<const double> a, std::span<const double> b, double z) {
    for (double bk : b) {
        if (bk <= 0.0 && bk == std::floor(bk))
            throw std::invalid_argument("hyper_pFq: lower parameter " + std::to_string(bk) +
                                        " is a non-positive integer");
    }
    constexpr int max_terms = 10000;
    constexpr double rel = 1e-15;
    double term = 1.0;
    double sum = 1.0;
    double comp = 0.0;
    int small_run = 0;
    for (int k = 0; k < max_terms; ++k) {
        double ratio = z / (k + 1.0);
        for (double ai : a) ratio *= ai + k;
        for (double bk : b) ratio /= bk + k;
        term *= ratio;
        if (term == 0.0) return sum + comp;
        // Neumaier summation keeps alternating series honest.
        const double t = sum + term;
        comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
        sum = t;
        if (!std::isfinite(sum))
            throw NumericError("hyper_pFq: partial sum overflowed at term " + std::to_string(k + 1));
        small_run = std::abs(term) < rel * std::abs(sum + comp) ? small_run + 1 : 0;
        if (small_run == 3) return sum + comp;
    }
    throw NumericError("hyper_pFq: no convergence after 10000 terms, last |term| = " +
                       std::to_string(std::abs(term)));
}

QuadratureRule gauss_legendre(std::size_t n) {
    if (n == 0) throw std::invalid_argument("gauss_legendre: n must be at least 1");
    QuadratureRule rule{std::vector<double>(n), std::vector<double>(n)};
    const std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i < half; ++i) {
        // Root i (descending) starting from the Chebyshev-like guess.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double p0 = 1.0;
        double p1 = x;
        for (std::size_t k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        if (2 * i + 1 == n) x = 0.0;
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

double integrate(const QuadratureRule& rule, const std::function<double(double)>& f, double a,
                 double b) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (b + a);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return half * sum;
}

namespace {

// Kronrod 15-point extension of the 7-point Gauss rule (QUADPACK qk15).
constexpr std::array<double, 8> xgk{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> wgk{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> wg{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Piece {
    double value;
    double error;
};

Piece kronrod15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double k = fc * wgk[7];
    double g = fc * wg[3];
    for (int j = 0; j < 7; ++j) {
        const double fsum = f(c - h * xgk[j]) + f(c + h * xgk[j]);
        k += wgk[j] * fsum;
        if (j % 2 == 1) g += wg[j / 2] * fsum;
    }
    return {k * h, std::abs((k - g) * h)};
}

class Adaptive {
public:
    Adaptive(const std::function<double(double)>& f, double a, double b, double tol)
        : f_(f), length_(b - a), tol_(tol) {}

    double run(double a, double b) {
        const Piece whole = kronrod15(f_, a, b);
        if (!std::isfinite(whole.value))
            throw NumericError("integrate_adaptive: integrand not finite");
        scale_ = std::max(1.0, std::abs(whole.value));
        return refine(a, b, whole, 0);
    }

private:
    double refine(double a, double b, const Piece& piece, int depth) {
        const double budget = tol_ * scale_ * (b - a) / length_;
        if (piece.error <= budget) return piece.value;
        if (depth >= 60)
            throw NumericError("integrate_adaptive: subdivision depth 60 exceeded near x = " +
                               std::to_string(0.5 * (a + b)));
        const double m = 0.5 * (a + b);
        const Piece left = kronrod15(f_, a, m);
        const Piece right = kronrod15(f_, m, b);
        if (!std::isfinite(left.value) || !std::isfinite(right.value))
            throw NumericError("integrate_adaptive: integrand not finite");
        return refine(a, m, left, depth + 1) + refine(m, b, right, depth + 1);
    }

    const std::function<double(double)>& f_;
    double length_;
    double tol_;
    double scale_ = 1.0;
};

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol) {
    if (!(a < b)) throw std::invalid_argument("integrate_adaptive: need a < b");
    if (!(tol > 0.0)) throw std::invalid_argument("integrate_adaptive: tol must be positive");
    return Adaptive(f, a, b, tol).run(a, b);
}

}  // namespace starfd
