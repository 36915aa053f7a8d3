// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>

#include "starfd/random.hpp"

namespace starfd {

// BS at the origin of the center disk; the STAR-RIS sits at the middle of the edge disk.
struct CellGeometry {
    double R = 50.0;      // center disk radius, m
    double R_r = 30.0;    // edge disk radius, m
    double d_br = 70.0;   // BS to RIS, m
    double m = 2.7;       // path-loss exponent

    double r1() const { return d_br - R; }
    void validate() const;  // throws ValidationError
};

enum class Region { center, edge };

struct UserPosition {
    double radius = 0.0;
    double angle = 0.0;
    Region region = Region::center;
};

UserPosition sample_user_position(const CellGeometry& geometry, Region region, Rng& rng);

// Bounded path loss (1 + d)^-m.
double pathloss(double distance, double m);

// E{(1 + r)^-m} for r with density 2r/R^2 on [0, R].
double exp_pathloss_center_disk(double R, double m);
double exp_pathloss_edge_disk(double R_r, double m);

// E{(1 + r)^-m} where r is the distance from a point at r1 outside a disk of
// radius R to a uniform point inside it.
double exp_pathloss_fixed_point_to_disk(double r1, double R, double m,
                                        std::size_t n_nodes = 64);

// E{(1 + r)^-m} where r is the distance between two uniform points in a disk.
double exp_pathloss_two_random_points(double R, double m);

}  // namespace starfd
