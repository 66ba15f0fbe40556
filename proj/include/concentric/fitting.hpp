#pragma once

#include <optional>
#include <string>
#include <vector>

#include "concentric/least_squares.hpp"
#include "concentric/spectra.hpp"

namespace concentric {

// Built-in fit models. They work in "fit units" (MHz for frequencies, seconds
// for times) so that the engine sees parameters of order one; the fit_*
// functions below convert results back to rad/s.
struct BuiltinModel {
    ModelFunction function;
    std::vector<std::string> names;
};

// A (G/2)^2 / ((x - x0)^2 + (G/2)^2) + B, params {A, x0, G, B}.
BuiltinModel lorentzian_model();

// Independently characterized empty-cavity quantities, rad/s.
struct CavityCalibration {
    double kappa = 0.0;
    double kappa_t = 0.0;
    double gamma = 0.0;
    // Peak empty-cavity transmission pinning the fit amplitude.
    // Defaults to (2 kappa_T / kappa)^2 when unset.
    std::optional<double> resonant_transmission;

    double amplitude() const;
};

// Spectra are taken against the probe detuning from the empty-cavity
// resonance, so omega_c = 0 and omega_a = -omega_off.
// params {g0, omega_off}.
BuiltinModel coupled_transmission_model(const CavityCalibration& fixed);
// params {g0, omega_off, far_reflection}.
BuiltinModel coupled_reflection_model(const CavityCalibration& fixed);
// p0 exp(-tau / t0), params {t0, p0}, tau in seconds.
BuiltinModel exponential_decay_model();

// Throws DegenerateData for fewer than four points or constant values.
// Result parameters: amplitude, center [rad/s], fwhm [rad/s], offset.
FitResult fit_lorentzian(const Spectrum& data, const LevenbergMarquardtSettings& settings = {});

// Result parameters: g0 [rad/s], offset [rad/s] (omega_c - omega_a).
FitResult fit_coupled_transmission(const Spectrum& data, const CavityCalibration& fixed,
                                   const LevenbergMarquardtSettings& settings = {});

// Result parameters: g0 [rad/s], offset [rad/s], far_reflection.
FitResult fit_coupled_reflection(const Spectrum& data, const CavityCalibration& fixed,
                                 const LevenbergMarquardtSettings& settings = {});

struct SurvivalPoint {
    double tau = 0.0;       // s
    double survived = 0.0;  // fraction p in [0, 1]
    int trials = 0;
};

// Binomial weights sigma = sqrt(p (1 - p) / n), floored at 1 / (2n).
// Throws UnidentifiableLifetime when every p is equal (all survive, all die).
// Result parameters: t0 [s], p0.
FitResult fit_exponential_decay(const std::vector<SurvivalPoint>& survival,
                                const LevenbergMarquardtSettings& settings = {});

// Spectrum -> engine observations with frequencies in MHz.
Observations to_fit_units(const Spectrum& data);

}  // namespace concentric
