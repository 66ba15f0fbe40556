#pragma once

#include <vector>

namespace concentric {

// Symmetric two-mirror resonator. All lengths in meters.
struct CavityGeometry {
    double radius_of_curvature = 0.0;
    double cavity_length = 0.0;
    double wavelength = 0.0;

    // Geometry at distance d below the concentric length 2R.
    static CavityGeometry near_concentric(double radius_of_curvature, double distance,
                                          double wavelength);

    double distance_to_concentric() const { return 2.0 * radius_of_curvature - cavity_length; }
    bool is_stable() const;

    // Throws std::invalid_argument if any field is non-positive or non-finite.
    void validate() const;
};

// Two-level atom. dipole_decay_rate is gamma, half the natural linewidth (rad/s).
struct AtomModel {
    double dipole_decay_rate = 0.0;
    double transition_wavelength = 0.0;

    double transition_frequency() const;  // rad/s

    // 87Rb D2 line: 2*gamma = 2*pi x 6.07 MHz, lambda = 780.241 nm.
    static AtomModel rubidium_d2();
};

struct ModeProperties {
    double stability_g = 0.0;
    double waist = 0.0;                    // m
    double mode_volume = 0.0;              // m^3
    double free_spectral_range = 0.0;      // Hz
    double transverse_mode_spacing = 0.0;  // Hz
    double distance_to_concentric = 0.0;   // m
};

double stability_parameter(const CavityGeometry& geom);

// c / (2 l), ordinary frequency in Hz.
double free_spectral_range(const CavityGeometry& geom);

// Spacing between the fundamental and the first transverse mode (Hz).
// Throws UnstableGeometry when g^2 > 1.
double transverse_mode_spacing(const CavityGeometry& geom);

enum class LengthBranch {
    near_concentric,  // l in (R, 2R)
    near_planar,      // l in (0, R]
};

// Inverts transverse_mode_spacing for l on the selected branch by bisection.
// Throws NoRoot when the spacing is not attainable on that branch.
double length_from_mode_spacing(double spacing_hz, double radius_of_curvature,
                                LengthBranch branch = LengthBranch::near_concentric);

// l = c * delta_n / (2 (nu_a - nu_b)) for two simultaneously resonant fields (Hz).
double length_from_dual_resonance(double nu_a, double nu_b, int delta_n);

// Fundamental-mode waist at the cavity center. Requires g^2 < 1.
double waist(const CavityGeometry& geom);

// Standing-wave Gaussian mode volume (pi/4) w0^2 l.
double mode_volume(const CavityGeometry& geom);

// Single-atom coupling sqrt(3 lambda^2 c gamma / (4 pi V)) in rad/s, with lambda
// the atom's transition wavelength.
double ideal_coupling(const CavityGeometry& geom, const AtomModel& atom);

ModeProperties mode_properties(const CavityGeometry& geom);

// How g0 scales with the distance to concentricity in a sweep.
struct CouplingCalibration {
    enum class Kind { ideal, measured };
    Kind kind = Kind::measured;
    // Used by Kind::measured: g0(d) = anchor_coupling * (d / anchor_distance)^(-1/4).
    double anchor_coupling = 0.0;  // rad/s
    double anchor_distance = 0.0;  // m

    static CouplingCalibration ideal();
    // 2*pi x 5.0 MHz measured at d = 1.65 um, times sqrt(2) for a circularly
    // polarized probe on the stretched transition.
    static CouplingCalibration measured();
};

struct SweepRow {
    double distance = 0.0;  // m
    double coupling = 0.0;  // rad/s
    double coupling_over_gamma = 0.0;
    double waist = 0.0;  // m
};

double calibrated_coupling(double radius_of_curvature, double wavelength, const AtomModel& atom,
                           double distance, const CouplingCalibration& calib);

// Log-uniform samples of d in [d_min, d_max]; n_points == 1 yields the d_min row.
std::vector<SweepRow> concentric_sweep(double radius_of_curvature, double wavelength,
                                       const AtomModel& atom, double d_min, double d_max,
                                       int n_points, const CouplingCalibration& calib);

// Distance d in [d_min, d_max] at which g0/gamma equals target (relative 1e-6).
// Throws NoRoot when the target is not crossed inside the range.
double distance_for_coupling_ratio(double radius_of_curvature, double wavelength,
                                   const AtomModel& atom, double d_min, double d_max,
                                   double target_ratio, const CouplingCalibration& calib);

}  // namespace concentric
