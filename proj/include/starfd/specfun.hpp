// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace starfd {

struct QuadratureRule {
    std::vector<double> nodes;    // ascending, in [-1, 1]
    std::vector<double> weights;  // positive, sum to 2
};

// Generalized hypergeometric series pFq(a; b; z) by partial sums.
// Throws NumericError when 10^4 terms do not reach relative 1e-15.
double hyper_pFq(std::span<const double> a, std::span<const double> b, double z);

QuadratureRule gauss_legendre(std::size_t n);

// Integral of f on [a, b] using the rule mapped affinely onto the interval.
double integrate(const QuadratureRule& rule, const std::function<double(double)>& f,
                 double a, double b);

// Adaptive Gauss-Kronrod (7/15) bisection. Each accepted piece satisfies
// |K15 - G7| <= tol * max(1, |total|) * width / (b - a).
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol);

}  // namespace starfd
