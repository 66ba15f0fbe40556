#include "concentric/spectra.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace concentric {

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument(std::string(name) + " must be positive and finite");
    }
}

}  // namespace

void CoupledSystem::validate() const {
    if (!(coupling_g0 >= 0.0) || !std::isfinite(coupling_g0)) {
        throw std::invalid_argument("coupling g0 must be non-negative and finite");
    }
    require_positive(cavity_decay_kappa, "kappa");
    require_positive(mirror_decay_kappa_t, "kappa_T");
    require_positive(atom_decay_gamma, "gamma");
    if (2.0 * mirror_decay_kappa_t > cavity_decay_kappa) {
        throw std::invalid_argument("2 kappa_T exceeds the total cavity decay kappa");
    }
    if (!std::isfinite(cavity_resonance) || !std::isfinite(atom_resonance)) {
        throw std::invalid_argument("resonance frequencies must be finite");
    }
}

void Spectrum::validate() const {
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& p = points[i];
        if (!std::isfinite(p.frequency) || !std::isfinite(p.value)) {
            throw std::invalid_argument("non-finite spectrum sample at index " + std::to_string(i));
        }
        if (i > 0 && !(p.frequency > points[i - 1].frequency)) {
            throw std::invalid_argument("spectrum frequencies must be strictly increasing (index " +
                                        std::to_string(i) + ")");
        }
        if (p.value < 0.0) {
            throw std::invalid_argument("negative spectrum value at index " + std::to_string(i));
        }
        if (p.sigma && !(*p.sigma > 0.0)) {
            throw std::invalid_argument("non-positive sigma at index " + std::to_string(i));
        }
    }
}

std::complex<double> cavity_response(const CoupledSystem& sys, double omega) {
    using namespace std::complex_literals;
    const double delta_c = omega - sys.cavity_resonance;
    const double delta_a = omega - sys.atom_resonance;
    const std::complex<double> atom = 1i * delta_a + sys.atom_decay_gamma;
    const std::complex<double> cavity = 1i * delta_c + sys.cavity_decay_kappa;
    return atom / (cavity * atom + sys.coupling_g0 * sys.coupling_g0);
}

double transmission(const CoupledSystem& sys, double omega) {
    return std::norm(2.0 * sys.mirror_decay_kappa_t * cavity_response(sys, omega));
}

double reflection(const CoupledSystem& sys, double omega) {
    return std::norm(1.0 - 2.0 * sys.mirror_decay_kappa_t * cavity_response(sys, omega));
}

double evaluate(const CoupledSystem& sys, double omega, SpectrumKind kind) {
    return kind == SpectrumKind::transmission ? transmission(sys, omega) : reflection(sys, omega);
}

Spectrum sample_spectrum(const CoupledSystem& sys, std::span<const double> omega_grid,
                         SpectrumKind kind) {
    sys.validate();
    Spectrum out;
    out.points.reserve(omega_grid.size());
    for (std::size_t i = 0; i < omega_grid.size(); ++i) {
        if (i > 0 && !(omega_grid[i] > omega_grid[i - 1])) {
            throw std::invalid_argument("frequency grid must be strictly increasing");
        }
        out.points.push_back({omega_grid[i], evaluate(sys, omega_grid[i], kind), std::nullopt});
    }
    return out;
}

NormalModes normal_mode_frequencies(const CoupledSystem& sys) {
    sys.validate();
    // Roots of (w - w_c - i kappa)(w - w_a - i gamma) = g0^2.
    using namespace std::complex_literals;
    const std::complex<double> cav = sys.cavity_resonance + 1i * sys.cavity_decay_kappa;
    const std::complex<double> atom = sys.atom_resonance + 1i * sys.atom_decay_gamma;
    const std::complex<double> mean = 0.5 * (cav + atom);
    const std::complex<double> half_diff = 0.5 * (cav - atom);
    const std::complex<double> root =
        std::sqrt(half_diff * half_diff + sys.coupling_g0 * sys.coupling_g0);

    NormalModes modes;
    modes.lower = mean - root;
    modes.upper = mean + root;
    const auto before = [](std::complex<double> a, std::complex<double> b) {
        return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
    };
    if (before(modes.upper, modes.lower)) std::swap(modes.lower, modes.upper);
    modes.splitting = modes.upper.real() - modes.lower.real();
    modes.resolved = modes.splitting > 0.0;
    return modes;
}

}  // namespace concentric
