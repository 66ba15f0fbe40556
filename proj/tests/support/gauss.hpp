#pragma once

#include <cmath>

#include "concentric/random.hpp"
#include "concentric/units.hpp"

namespace test_support {

// Box-Muller; only the cosine branch is used so draws stay one-per-call.
inline double gaussian(concentric::Rng& rng) {
    const double u1 = rng.uniform_open();
    const double u2 = rng.uniform_open();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(concentric::units::kTwoPi * u2);
}

}  // namespace test_support
