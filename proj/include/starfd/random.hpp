// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace starfd {

using Rng = std::mt19937_64;

// splitmix64 mix of (master, index); trial streams never depend on scheduling.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

inline Rng make_rng(std::uint64_t master, std::uint64_t index) {
    return Rng(derive_seed(master, index));
}

double uniform01(Rng& rng);

// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
std::complex<double> complex_normal(Rng& rng, double variance = 1.0);

}  // namespace starfd
