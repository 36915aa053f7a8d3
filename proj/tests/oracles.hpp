// Independent numerical references shared by the test binaries.
#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

namespace oracle {

using boost::math::quadrature::gauss_kronrod;

inline double disk(double R, double m) {
    auto f = [&](double r) { return std::pow(1.0 + r, -m) * 2.0 * r / (R * R); };
    return gauss_kronrod<double, 61>::integrate(f, 0.0, R, 12, 1e-14);
}

// Area average over the disk of radius R centered at distance D = r1 + R.
inline double point_to_disk(double r1, double R, double m) {
    const double D = r1 + R;
    auto inner = [&](double s) {
        auto g = [&](double psi) {
            const double d = std::sqrt(D * D + s * s - 2.0 * D * s * std::cos(psi));
            return std::pow(1.0 + d, -m);
        };
        return s * gauss_kronrod<double, 61>::integrate(g, 0.0, std::numbers::pi, 12, 1e-14);
    };
    return 2.0 * gauss_kronrod<double, 61>::integrate(inner, 0.0, R, 12, 1e-14) /
           (std::numbers::pi * R * R);
}

inline double two_points(double R, double m) {
    auto f = [&](double r) {
        const double q = r / (2.0 * R);
        return std::pow(1.0 + r, -m) * 4.0 * r / (std::numbers::pi * R * R) *
               (std::acos(q) - q * std::sqrt(std::max(0.0, 1.0 - q * q)));
    };
    return gauss_kronrod<double, 61>::integrate(f, 0.0, 2.0 * R, 20, 1e-13);
}

}  // namespace oracle
