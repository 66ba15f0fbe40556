#include <doctest.h>

#include <cmath>

#include "concentric/cavity_geometry.hpp"
#include "concentric/errors.hpp"
#include "concentric/random.hpp"
#include "concentric/units.hpp"

using namespace concentric;
using units::angular_to_mhz;
using units::nm;
using units::um;

namespace {

constexpr double kR = 5.5e-3;
constexpr double kLambda = 780.241e-9;

CavityGeometry at(double d, double lambda = kLambda) {
    return CavityGeometry::near_concentric(kR, d, lambda);
}

}  // namespace

TEST_SUITE("geometry") {

// Frozen values from tests/oracles/derived_values.py (50-digit arithmetic).
TEST_CASE("oracle values") {
    CHECK(transverse_mode_spacing(at(um(1.7))) * 1e-6 == doctest::Approx(107.86600).epsilon(1e-7));
    CHECK(transverse_mode_spacing(at(um(1.65))) * 1e-6 == doctest::Approx(106.26733).epsilon(1e-7));
    CHECK(stability_parameter(at(um(1.65))) == doctest::Approx(-0.9997).epsilon(1e-12));
    CHECK(waist(at(um(1.65))) * 1e6 == doctest::Approx(4.090038).epsilon(1e-6));
    CHECK(waist(at(um(1.65), 780e-9)) * 1e6 == doctest::Approx(4.089406).epsilon(1e-6));
    CHECK(waist(at(nm(100))) * 1e6 == doctest::Approx(2.029419).epsilon(1e-6));
    CHECK(mode_volume(at(um(1.65))) == doctest::Approx(1.445014e-13).epsilon(1e-6));
    CHECK(free_spectral_range({11e-3, 11e-3, kLambda}) * 1e-9 == doctest::Approx(13.6269299).epsilon(1e-8));

    const auto rb = AtomModel::rubidium_d2();
    CHECK(angular_to_mhz(ideal_coupling(at(um(1.65)), rb)) == doctest::Approx(12.068358).epsilon(1e-6));
    CHECK(angular_to_mhz(ideal_coupling(at(nm(100)), rb)) == doctest::Approx(24.320544).epsilon(1e-6));
}

TEST_CASE("length from mode spacing") {
    CHECK((2 * kR - length_from_mode_spacing(109e6, kR)) * 1e6 == doctest::Approx(1.735919).epsilon(1e-6));
    CHECK((2 * kR - length_from_mode_spacing(200e6, kR)) * 1e6 == doctest::Approx(5.839267).epsilon(1e-6));

    Rng rng(7);
    for (int i = 0; i < 200; ++i) {
        const double d = kR * std::pow(10.0, -6.0 + 5.0 * rng.uniform_open());
        const auto g = at(d);
        const double l = length_from_mode_spacing(transverse_mode_spacing(g), kR);
        CHECK(l == doctest::Approx(g.cavity_length).epsilon(1e-9));
    }
    for (int i = 0; i < 50; ++i) {
        const double l = kR * (0.05 + 0.9 * rng.uniform_open());
        const CavityGeometry g{kR, l, kLambda};
        const double back = length_from_mode_spacing(transverse_mode_spacing(g), kR, LengthBranch::near_planar);
        CHECK(back == doctest::Approx(l).epsilon(1e-9));
    }
}

TEST_CASE("spacing decreases toward concentric") {
    double prev = 0.0;
    for (double d = 1e-9; d < 1e-4; d *= 1.5) {
        const double s = transverse_mode_spacing(at(d));
        CHECK(s > prev);
        prev = s;
    }
}

TEST_CASE("dual resonance") {
    const double l = 2 * kR - um(1.65);
    const double fsr = units::kSpeedOfLight / (2 * l);
    CHECK(fsr * 1043 * 1e-12 == doctest::Approx(14.2150201).epsilon(1e-8));
    const double nu_b = 370e12;
    CHECK(length_from_dual_resonance(nu_b + 1043 * fsr, nu_b, 1043) == doctest::Approx(l).epsilon(1e-12));
    CHECK_THROWS_AS(length_from_dual_resonance(nu_b, nu_b, 1043), DegenerateInput);
    CHECK_THROWS_AS(length_from_dual_resonance(nu_b + 1.0, nu_b, 0), std::invalid_argument);
}

TEST_CASE("fourth-root waist law and g0^2 V invariance") {
    const auto rb = AtomModel::rubidium_d2();
    for (double d = 1e-9; d < 1e-6; d *= 2.0) {
        // w0 ~ d^(1/4) close to concentric
        const double ratio = waist(at(2 * d)) / waist(at(d));
        CHECK(ratio == doctest::Approx(std::pow(2.0, 0.25)).epsilon(1e-5));
        const double g0 = ideal_coupling(at(d), rb);
        const double invariant = g0 * g0 * mode_volume(at(d));
        const double expected =
            3.0 * rb.transition_wavelength * rb.transition_wavelength * units::kSpeedOfLight * rb.dipole_decay_rate /
            (4.0 * units::kPi);
        CHECK(invariant == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("boundaries and errors") {
    CHECK_THROWS_AS(transverse_mode_spacing({kR, 2 * kR + 1e-6, kLambda}), UnstableGeometry);
    CHECK_THROWS_AS(waist({kR, 2 * kR + 1e-6, kLambda}), UnstableGeometry);
    CHECK_THROWS_AS(waist({kR, 2 * kR, kLambda}), SingularGeometry);
    CHECK_THROWS_AS(waist({kR, 0.0, kLambda}), std::invalid_argument);
    CHECK_THROWS_AS(length_from_mode_spacing(1e12, kR), NoRoot);
    CHECK(at(um(1.0)).is_stable());
    CHECK_FALSE(CavityGeometry{kR, 2 * kR + 1e-9, kLambda}.is_stable());
}

TEST_CASE("coupling sweep") {
    const auto rb = AtomModel::rubidium_d2();
    const double ideal8 = distance_for_coupling_ratio(kR, kLambda, rb, nm(10), um(2), 8.0, CouplingCalibration::ideal());
    CHECK(ideal8 * 1e9 == doctest::Approx(100.6696).epsilon(1e-5));
    const double meas4 =
        distance_for_coupling_ratio(kR, kLambda, rb, nm(10), um(2), 4.0, CouplingCalibration::measured());
    CHECK(meas4 * 1e9 == doctest::Approx(189.9106).epsilon(1e-5));
    CHECK_THROWS_AS(distance_for_coupling_ratio(kR, kLambda, rb, nm(10), um(2), 100.0, CouplingCalibration::ideal()),
                    NoRoot);

    const auto rows = concentric_sweep(kR, kLambda, rb, nm(10), um(2), 41, CouplingCalibration::measured());
    REQUIRE(rows.size() == 41);
    CHECK(rows.front().distance == doctest::Approx(nm(10)));
    CHECK(rows.back().distance == um(2));
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i].distance > rows[i - 1].distance);
        CHECK(rows[i].coupling < rows[i - 1].coupling);
    }
    CHECK(concentric_sweep(kR, kLambda, rb, nm(50), nm(50), 1, CouplingCalibration::ideal()).size() == 1);
    CHECK_THROWS_AS(concentric_sweep(kR, kLambda, rb, nm(50), nm(60), 1, CouplingCalibration::ideal()),
                    std::invalid_argument);
}

}
