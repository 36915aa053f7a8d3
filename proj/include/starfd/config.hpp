// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>

#include "starfd/geometry.hpp"

namespace starfd {

// Angles in radians.
// Radians.
struct Direction {
    double azimuth = 0.0;
    double elevation = 0.0;

    static Direction degrees(double azimuth_deg, double elevation_deg);
};

struct GeometryAngles {
    Direction b_r = Direction::degrees(40.0, 70.0);     // arrival at the RIS from the BS
    Direction r_u1d = Direction::degrees(200.0, 60.0);  // departure towards each user
    Direction r_u2d = Direction::degrees(-30.0, 50.0);
    Direction r_u1u = Direction::degrees(160.0, 75.0);
    Direction r_u2u = Direction::degrees(20.0, 40.0);
    double d_over_lambda = 0.5;
};

// Linear K-factors of the five RIS links.
struct RicianFactors {
    double b_r = 3.0;
    double r_u1d = 3.0;
    double r_u2d = 3.0;
    double r_u1u = 3.0;
    double r_u2u = 3.0;
};

struct NoisePowers {
    double u1d = 1.0;  // W
    double u2d = 1.0;
    double b = 1.0;
};

// Transmit powers (W) plus the impairments and targets that shape every SINR.
struct PowerConfig {
    double total = 1000.0;  // P_t
    double tau = 0.8;       // DL share of P_t
    double p_b1 = 160.0;    // BS power on the center user's stream
    double p_b2 = 640.0;    // BS power on the edge user's stream
    double p_u1u = 100.0;
    double p_u2u = 100.0;
    double sic_error = 0.0;  // Xi
    double si_beta = 1e-3;
    double si_lambda = 0.1;
    NoisePowers noise;
    double target_dl = 1.0;  // edge DL target, bits/s/Hz
    double target_ul = 1.0;  // edge UL target, bits/s/Hz

    double p_b() const { return p_b1 + p_b2; }
    double p_u() const { return p_u1u + p_u2u; }
    double alpha1() const { return p_b() > 0.0 ? p_b1 / p_b() : 0.0; }
    double alpha2() const { return p_b() > 0.0 ? p_b2 / p_b() : 0.0; }
    // Residual self-interference variance V = beta * P_b^lambda.
    double si_variance() const;

    // P_b = tau P_t and P_u = (1 - tau) P_t, split by alpha1 and the UL share of u1u.
    void set_split(double total_power, double dl_share, double alpha_1, double ul_share_u1);
    void validate() const;  // throws ValidationError
};

struct Weights {
    double u1d = 0.8;
    double u2d = 0.8;
    double u1u = 0.8;
    double u2u = 0.8;
    double c = 0.8;  // bidirectional center pair
    double e = 0.8;  // bidirectional edge pair
};

enum class Scenario { noma_pair, bidirectional };

struct SystemConfig {
    CellGeometry geometry;
    RicianFactors kappa;
    GeometryAngles angles;
    std::size_t n_elements = 20;
    PowerConfig power;
    Weights weights;
    Scenario scenario = Scenario::noma_pair;
    std::size_t quad_nodes = 64;

    void validate() const;  // throws ValidationError listing every problem
};

const char* to_string(Scenario s);

}  // namespace starfd
