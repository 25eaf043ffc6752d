#pragma once

#include <random>
#include <vector>

#include "c3b/central_config.hpp"

namespace c3b::testing {

struct Sample {
    BodySetup setup;
    CentralConfiguration config;
};

// Random masses in [0.1, 1] and charges up to 0.6 m_i in magnitude, kept only
// when a triangle configuration exists.
inline std::vector<Sample> random_admissible(std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> mass(0.1, 1.0), ratio(-0.6, 0.6);
    std::vector<Sample> out;
    while (out.size() < count) {
        std::array<double, 3> m{mass(rng), mass(rng), mass(rng)};
        std::array<double, 3> q{};
        for (int i = 0; i < 3; ++i) q[i] = ratio(rng) * m[i];
        const BodySetup setup(m, q);
        try {
            out.push_back({setup, build_configuration(setup)});
        } catch (const InadmissibleSetup&) {
        }
    }
    return out;
}

inline BodySetup charged_reference() { return BodySetup({0.5, 0.3, 0.2}, {0.1, -0.2, 0.05}); }

inline BodySetup equal_newtonian() { return BodySetup({1.0, 1.0, 1.0}, {0.0, 0.0, 0.0}); }

}  // namespace c3b::testing
