#include "concentric/cavity_geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "concentric/errors.hpp"
#include "concentric/root_finding.hpp"
#include "concentric/units.hpp"

namespace concentric {

using units::kPi;
using units::kSpeedOfLight;

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument(std::string(name) + " must be positive and finite");
    }
}

void require_mode(const CavityGeometry& geom) {
    geom.validate();
    const double g = stability_parameter(geom);
    if (g * g > 1.0) {
        throw UnstableGeometry("unstable resonator: g = " + std::to_string(g));
    }
    if (g * g == 1.0) {
        throw SingularGeometry("resonator at a stability boundary (g^2 = 1): waist undefined");
    }
}

}  // namespace

CavityGeometry CavityGeometry::near_concentric(double radius_of_curvature, double distance,
                                               double wavelength) {
    return {radius_of_curvature, 2.0 * radius_of_curvature - distance, wavelength};
}

bool CavityGeometry::is_stable() const {
    const double g = stability_parameter(*this);
    return g * g <= 1.0;
}

void CavityGeometry::validate() const {
    require_positive(radius_of_curvature, "radius_of_curvature");
    require_positive(cavity_length, "cavity_length");
    require_positive(wavelength, "wavelength");
}

double AtomModel::transition_frequency() const {
    return units::kTwoPi * kSpeedOfLight / transition_wavelength;
}

AtomModel AtomModel::rubidium_d2() {
    return {units::mhz_to_angular(6.07) / 2.0, units::nm(780.241)};
}

double stability_parameter(const CavityGeometry& geom) {
    return 1.0 - geom.cavity_length / geom.radius_of_curvature;
}

double free_spectral_range(const CavityGeometry& geom) {
    return kSpeedOfLight / (2.0 * geom.cavity_length);
}

double transverse_mode_spacing(const CavityGeometry& geom) {
    geom.validate();
    const double g = stability_parameter(geom);
    if (g * g > 1.0) {
        throw UnstableGeometry("transverse mode spacing undefined for g = " + std::to_string(g));
    }
    return free_spectral_range(geom) * (1.0 - std::acos(g) / kPi);
}

double length_from_mode_spacing(double spacing_hz, double radius_of_curvature,
                                LengthBranch branch) {
    require_positive(spacing_hz, "spacing");
    require_positive(radius_of_curvature, "radius_of_curvature");
    constexpr double kRelTol = 1e-12;
    // The wavelength does not enter the spacing; any positive value works.
    const auto spacing_at = [&](double length) {
        return transverse_mode_spacing({radius_of_curvature, length, 1.0});
    };

    if (branch == LengthBranch::near_concentric) {
        // Bisect on d = 2R - l so the tolerance is relative to d itself.
        const auto f = [&](double d) {
            if (d <= 0.0) return -spacing_hz;
            return spacing_at(2.0 * radius_of_curvature - d) - spacing_hz;
        };
        const double upper = spacing_at(radius_of_curvature);
        if (spacing_hz >= upper) {
            throw NoRoot("spacing " + std::to_string(spacing_hz) +
                         " Hz is not attainable on the near-concentric branch (max " +
                         std::to_string(upper) + " Hz)");
        }
        const auto d = bisect(f, 0.0, radius_of_curvature, kRelTol);
        if (!d) throw NoRoot("no near-concentric length for the given spacing");
        return 2.0 * radius_of_curvature - *d;
    }

    const double lower = spacing_at(radius_of_curvature);
    if (spacing_hz < lower) {
        throw NoRoot("spacing " + std::to_string(spacing_hz) +
                     " Hz is not attainable on the near-planar branch (min " +
                     std::to_string(lower) + " Hz)");
    }
    const auto f = [&](double length) { return spacing_at(length) - spacing_hz; };
    // spacing diverges as l -> 0; start from a tiny positive length.
    const auto l = bisect(f, radius_of_curvature * 1e-15, radius_of_curvature, kRelTol);
    if (!l) throw NoRoot("no near-planar length for the given spacing");
    return *l;
}

double length_from_dual_resonance(double nu_a, double nu_b, int delta_n) {
    if (delta_n < 1) throw std::invalid_argument("delta_n must be >= 1");
    if (nu_a == nu_b) throw DegenerateInput("resonance frequencies coincide");
    if (nu_a < nu_b) throw std::invalid_argument("nu_a must exceed nu_b");
    return kSpeedOfLight * static_cast<double>(delta_n) / (2.0 * (nu_a - nu_b));
}

double waist(const CavityGeometry& geom) {
    require_mode(geom);
    const double g = stability_parameter(geom);
    return std::sqrt(geom.wavelength * geom.cavity_length / units::kTwoPi) *
           std::pow((1.0 + g) / (1.0 - g), 0.25);
}

double mode_volume(const CavityGeometry& geom) {
    const double w0 = waist(geom);
    return kPi / 4.0 * w0 * w0 * geom.cavity_length;
}

double ideal_coupling(const CavityGeometry& geom, const AtomModel& atom) {
    require_positive(atom.dipole_decay_rate, "dipole_decay_rate");
    require_positive(atom.transition_wavelength, "transition_wavelength");
    const double lambda = atom.transition_wavelength;
    return std::sqrt(3.0 * lambda * lambda * kSpeedOfLight * atom.dipole_decay_rate /
                     (4.0 * kPi * mode_volume(geom)));
}

ModeProperties mode_properties(const CavityGeometry& geom) {
    ModeProperties p;
    p.stability_g = stability_parameter(geom);
    p.waist = waist(geom);
    p.mode_volume = mode_volume(geom);
    p.free_spectral_range = free_spectral_range(geom);
    p.transverse_mode_spacing = transverse_mode_spacing(geom);
    p.distance_to_concentric = geom.distance_to_concentric();
    return p;
}

CouplingCalibration CouplingCalibration::ideal() {
    return {Kind::ideal, 0.0, 0.0};
}

CouplingCalibration CouplingCalibration::measured() {
    return {Kind::measured, units::mhz_to_angular(5.0) * std::sqrt(2.0), units::um(1.65)};
}

double calibrated_coupling(double radius_of_curvature, double wavelength, const AtomModel& atom,
                           double distance, const CouplingCalibration& calib) {
    require_positive(distance, "distance");
    if (calib.kind == CouplingCalibration::Kind::ideal) {
        return ideal_coupling(CavityGeometry::near_concentric(radius_of_curvature, distance, wavelength),
                              atom);
    }
    require_positive(calib.anchor_coupling, "anchor_coupling");
    require_positive(calib.anchor_distance, "anchor_distance");
    return calib.anchor_coupling * std::pow(distance / calib.anchor_distance, -0.25);
}

namespace {

void check_range(double radius_of_curvature, double d_min, double d_max) {
    require_positive(radius_of_curvature, "radius_of_curvature");
    require_positive(d_min, "d_min");
    if (d_max < d_min) throw std::invalid_argument("d_max must be >= d_min");
    if (d_max >= radius_of_curvature) {
        throw std::invalid_argument("sweep range must lie inside (0, R_C)");
    }
}

}  // namespace

std::vector<SweepRow> concentric_sweep(double radius_of_curvature, double wavelength,
                                       const AtomModel& atom, double d_min, double d_max,
                                       int n_points, const CouplingCalibration& calib) {
    check_range(radius_of_curvature, d_min, d_max);
    if (n_points < 1) throw std::invalid_argument("n_points must be >= 1");
    if (n_points == 1 && d_max != d_min) {
        throw std::invalid_argument("a single-point sweep needs d_min == d_max");
    }

    std::vector<SweepRow> rows;
    rows.reserve(static_cast<std::size_t>(n_points));
    const double log_ratio = std::log(d_max / d_min);
    for (int i = 0; i < n_points; ++i) {
        double d = d_min;
        if (n_points > 1) {
            d = (i == n_points - 1) ? d_max
                                    : d_min * std::exp(log_ratio * i / static_cast<double>(n_points - 1));
        }
        const double g0 = calibrated_coupling(radius_of_curvature, wavelength, atom, d, calib);
        const auto geom = CavityGeometry::near_concentric(radius_of_curvature, d, wavelength);
        rows.push_back({d, g0, g0 / atom.dipole_decay_rate, waist(geom)});
    }
    return rows;
}

double distance_for_coupling_ratio(double radius_of_curvature, double wavelength,
                                   const AtomModel& atom, double d_min, double d_max,
                                   double target_ratio, const CouplingCalibration& calib) {
    check_range(radius_of_curvature, d_min, d_max);
    require_positive(target_ratio, "target_ratio");
    // Bisect in log(d); the ratio is monotone decreasing in d.
    const auto f = [&](double log_d) {
        const double d = std::exp(log_d);
        return calibrated_coupling(radius_of_curvature, wavelength, atom, d, calib) /
                   atom.dipole_decay_rate -
               target_ratio;
    };
    const double at_min = f(std::log(d_min));
    const double at_max = f(std::log(d_max));
    if (at_min == 0.0) return d_min;
    if (at_max == 0.0) return d_max;
    if (std::signbit(at_min) == std::signbit(at_max)) {
        throw NoRoot("g0/gamma = " + std::to_string(target_ratio) +
                     " is not reached inside the sweep range");
    }
    // Bracket width in log(d) equals the relative width in d to first order.
    double lo = std::log(d_min);
    double hi = std::log(d_max);
    double f_lo = at_min;
    while (hi - lo > 1e-6) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = f(mid);
        if (f_mid == 0.0) return std::exp(mid);
        if (std::signbit(f_mid) == std::signbit(f_lo)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return std::exp(0.5 * (lo + hi));
}

}  // namespace concentric
