#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

namespace concentric {

// Weakly driven atom-cavity system. All rates and resonances in rad/s.
struct CoupledSystem {
    double coupling_g0 = 0.0;          // 0 encodes the empty cavity
    double cavity_decay_kappa = 0.0;   // total field decay
    double mirror_decay_kappa_t = 0.0; // field decay through one mirror
    double atom_decay_gamma = 0.0;
    double cavity_resonance = 0.0;     // omega_c
    double atom_resonance = 0.0;       // omega_a

    double frequency_offset() const { return cavity_resonance - atom_resonance; }

    // Throws std::invalid_argument on non-positive rates, negative g0, or
    // 2 kappa_T > kappa.
    void validate() const;
};

enum class SpectrumKind { transmission, reflection };

struct SpectrumPoint {
    double frequency = 0.0;  // rad/s
    double value = 0.0;
    std::optional<double> sigma;
};

// Ordered samples. Frequencies strictly increasing, values >= 0, sigma > 0
// where present.
struct Spectrum {
    std::vector<SpectrumPoint> points;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
    void validate() const;
};

// (i Delta_a + gamma) / ((i Delta_c + kappa)(i Delta_a + gamma) + g0^2)
std::complex<double> cavity_response(const CoupledSystem& sys, double omega);

// |2 kappa_T * response|^2
double transmission(const CoupledSystem& sys, double omega);

// |1 - 2 kappa_T * response|^2
double reflection(const CoupledSystem& sys, double omega);

double evaluate(const CoupledSystem& sys, double omega, SpectrumKind kind);

Spectrum sample_spectrum(const CoupledSystem& sys, std::span<const double> omega_grid,
                         SpectrumKind kind);

struct NormalModes {
    // Complex eigenfrequencies: real part = position, imaginary part = half-width.
    std::complex<double> lower;
    std::complex<double> upper;
    // upper.real() - lower.real() when resolved, else 0.
    double splitting = 0.0;
    bool resolved = false;
};

NormalModes normal_mode_frequencies(const CoupledSystem& sys);

}  // namespace concentric
