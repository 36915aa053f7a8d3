// SPDX-License-Identifier: Apache-2.0
#include "starfd/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "starfd/errors.hpp"
#include "starfd/specfun.hpp"

namespace starfd {

using std::numbers::pi;

void CellGeometry::validate() const {
    std::vector<std::string> problems;
    if (!(R > 0.0)) problems.emplace_back("cell_radius_m must be positive");
    if (!(R_r > 0.0)) problems.emplace_back("edge_radius_m must be positive");
    if (!(d_br > R)) problems.emplace_back("bs_ris_distance_m must exceed cell_radius_m");
    if (!(m > 2.0)) problems.emplace_back("path-loss exponent must exceed 2");
    if (!problems.empty()) throw ValidationError(std::move(problems));
}

UserPosition sample_user_position(const CellGeometry& geometry, Region region, Rng& rng) {
    const double radius = region == Region::center ? geometry.R : geometry.R_r;
    const double u = uniform01(rng);
    const double v = uniform01(rng);
    return {radius * std::sqrt(u), 2.0 * pi * v, region};
}

double pathloss(double distance, double m) {
    if (distance < 0.0) throw std::domain_error("pathloss: negative distance");
    return std::pow(1.0 + distance, -m);
}

double exp_pathloss_center_disk(double R, double m) {
    if (!(m > 2.0)) throw std::domain_error("disk expectation needs m > 2");
    if (!(R > 0.0)) throw std::domain_error("disk expectation needs R > 0");
    const double c = (m - 2.0) * (m - 1.0);
    if (R < 0.05) {
        // Binomial expansion of the bracket; the direct form cancels for small R.
        double coeff = m * (m - 1.0) / 2.0;
        double sum = c / 2.0;
        double power = 1.0;
        for (int k = 3; k < 80; ++k) {
            coeff *= (m - (k - 1.0)) / k;
            power *= R;
            const double term = coeff * power;
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum)) break;
        }
        return 2.0 * std::pow(1.0 + R, -m) * sum / c;
    }
    const double bracket = -1.0 + R * R - m * R * (1.0 + R) + std::pow(1.0 + R, m);
    return 2.0 * std::pow(1.0 + R, -m) * bracket / (c * R * R);
}

double exp_pathloss_edge_disk(double R_r, double m) { return exp_pathloss_center_disk(R_r, m); }

double exp_pathloss_fixed_point_to_disk(double r1, double R, double m, std::size_t n_nodes) {
    if (!(r1 > 0.0)) throw std::domain_error("fixed point must lie outside the disk (r1 > 0)");
    if (!(R > 0.0)) throw std::domain_error("disk radius must be positive");
    if (m < 0.0) throw std::domain_error("path-loss exponent must be non-negative");
    if (n_nodes < 8) throw std::domain_error("need at least 8 quadrature nodes");
    const QuadratureRule rule = gauss_legendre(n_nodes);
    const double D = r1 + R;
    // r = r1 + R(1 - cos t) removes the square-root behaviour at both ends.
    auto integrand = [&](double t) {
        const double r = r1 + R * (1.0 - std::cos(t));
        const double arg = std::clamp((r * r + r1 * r1 + 2.0 * R * r1) / (2.0 * r * D), -1.0, 1.0);
        const double density = 2.0 * r / (pi * R * R) * std::acos(arg);
        return std::pow(1.0 + r, -m) * density * R * std::sin(t);
    };
    return integrate(rule, integrand, 0.0, pi);
}

namespace {

double two_point_series(double R, double m) {
    const double z = 4.0 * R * R;
    const double c = 2.0 - 3.0 * m + m * m;
    const std::array<double, 3> a1{0.5, -1.0 + m / 2.0, -0.5 + m / 2.0};
    const std::array<double, 2> b1{-0.5, 1.0};
    const std::array<double, 3> a2{1.5, 0.5 + m / 2.0, m / 2.0};
    const std::array<double, 2> b2{0.5, 3.0};
    const std::array<double, 3> a3{2.0, 0.5 + m / 2.0, 1.0 + m / 2.0};
    const std::array<double, 2> b3{1.5, 3.5};
    const std::array<double, 2> b4{2.5, 2.5};
    const std::array<double, 5> terms{
        2.0 / (c * R * R),
        -2.0 * hyper_pFq(a1, b1, z) / (c * R * R),
        -hyper_pFq(a2, b2, z),
        64.0 * m * R * hyper_pFq(a3, b3, z) / (15.0 * pi),
        -64.0 * m * R * hyper_pFq(a3, b4, z) / (9.0 * pi),
    };
    double sum = 0.0;
    double largest = 0.0;
    for (double t : terms) {
        sum += t;
        largest = std::max(largest, std::abs(t));
    }
    if (!(sum > 0.0 && sum <= 1.0) || largest > 1e8 * sum)
        throw NumericError("two-point series lost precision");
    return sum;
}

double two_point_quadrature(double R, double m) {
    // r = R(1 - cos t) on [0, 2R].
    auto integrand = [&](double t) {
        const double r = R * (1.0 - std::cos(t));
        const double q = std::clamp(r / (2.0 * R), 0.0, 1.0);
        const double density = 4.0 * r / (pi * R * R) * (std::acos(q) - q * std::sqrt(1.0 - q * q));
        return std::pow(1.0 + r, -m) * density * R * std::sin(t);
    };
    return integrate_adaptive(integrand, 0.0, pi, 1e-14);
}

}  // namespace

double exp_pathloss_two_random_points(double R, double m) {
    if (!(m > 2.0)) throw std::domain_error("two-point expectation needs m > 2");
    if (!(R > 0.0)) throw std::domain_error("disk radius must be positive");
    try {
        return two_point_series(R, m);
    } catch (const NumericError&) {
        return two_point_quadrature(R, m);
    }
}

}  // namespace starfd
