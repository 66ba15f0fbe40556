#include "concentric/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

#include "concentric/errors.hpp"
#include "concentric/units.hpp"

namespace concentric {

using units::angular_to_mhz;
using units::mhz_to_angular;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

CoupledSystem system_in_mhz(const CavityCalibration& fixed, double g0_mhz, double offset_mhz) {
    CoupledSystem sys;
    sys.coupling_g0 = g0_mhz;
    sys.cavity_decay_kappa = angular_to_mhz(fixed.kappa);
    sys.mirror_decay_kappa_t = angular_to_mhz(fixed.kappa_t);
    sys.atom_decay_gamma = angular_to_mhz(fixed.gamma);
    sys.cavity_resonance = 0.0;
    sys.atom_resonance = -offset_mhz;
    return sys;
}

void validate_calibration(const CavityCalibration& fixed) {
    if (!(fixed.kappa > 0.0) || !(fixed.kappa_t > 0.0) || !(fixed.gamma > 0.0)) {
        throw std::invalid_argument("cavity calibration rates must be positive");
    }
    if (2.0 * fixed.kappa_t > fixed.kappa) {
        throw std::invalid_argument("2 kappa_T exceeds kappa in the cavity calibration");
    }
}

void check_spectrum(const Spectrum& data, std::size_t min_points) {
    data.validate();
    if (data.size() < min_points) {
        throw DegenerateData("need at least " + std::to_string(min_points) + " spectrum points");
    }
    const auto [lo, hi] = std::minmax_element(
        data.points.begin(), data.points.end(),
        [](const SpectrumPoint& a, const SpectrumPoint& b) { return a.value < b.value; });
    if (lo->value == hi->value) throw DegenerateData("spectrum values are constant");
}

// Mean of the outer `fraction` of points on each side.
double edge_mean(const std::vector<double>& y, double fraction) {
    const std::size_t n = y.size();
    const std::size_t k = std::max<std::size_t>(1, static_cast<std::size_t>(fraction * n));
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) sum += y[i] + y[n - 1 - i];
    return sum / (2.0 * k);
}

std::vector<double> smooth3(const std::vector<double>& v) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::size_t a = i == 0 ? 0 : i - 1;
        const std::size_t b = std::min(v.size() - 1, i + 1);
        out[i] = (v[a] + v[i] + v[b]) / static_cast<double>(b - a + 1);
    }
    return out;
}

void convert_frequency(FitResult& r, std::size_t index) {
    r.parameters[index] = mhz_to_angular(r.parameters[index]);
    if (!r.uncertainties.empty()) r.uncertainties[index] = mhz_to_angular(r.uncertainties[index]);
}

}  // namespace

double CavityCalibration::amplitude() const {
    if (resonant_transmission) return *resonant_transmission;
    const double r = 2.0 * kappa_t / kappa;
    return r * r;
}

Observations to_fit_units(const Spectrum& data) {
    Observations obs;
    const bool weighted = std::all_of(data.points.begin(), data.points.end(),
                                      [](const SpectrumPoint& p) { return p.sigma.has_value(); });
    for (const auto& p : data.points) {
        obs.x.push_back(angular_to_mhz(p.frequency));
        obs.y.push_back(p.value);
        if (weighted) obs.sigma.push_back(*p.sigma);
    }
    return obs;
}

BuiltinModel lorentzian_model() {
    return {[](double x, std::span<const double> p) {
                const double half = 0.5 * p[2];
                const double dx = x - p[1];
                return p[0] * half * half / (dx * dx + half * half) + p[3];
            },
            {"amplitude", "center", "fwhm", "offset"}};
}

BuiltinModel coupled_transmission_model(const CavityCalibration& fixed) {
    validate_calibration(fixed);
    const double amplitude = fixed.amplitude();
    return {[fixed, amplitude](double x, std::span<const double> p) {
                const auto sys = system_in_mhz(fixed, p[0], p[1]);
                return amplitude * std::norm(sys.cavity_decay_kappa * cavity_response(sys, x));
            },
            {"g0", "offset"}};
}

BuiltinModel coupled_reflection_model(const CavityCalibration& fixed) {
    validate_calibration(fixed);
    return {[fixed](double x, std::span<const double> p) {
                // Far off resonance the bare reflection tends to 1, so p[2]
                // is the reflected level there.
                return p[2] * reflection(system_in_mhz(fixed, p[0], p[1]), x);
            },
            {"g0", "offset", "far_reflection"}};
}

BuiltinModel exponential_decay_model() {
    return {[](double tau, std::span<const double> p) { return p[1] * std::exp(-tau / p[0]); },
            {"t0", "p0"}};
}

FitResult fit_lorentzian(const Spectrum& data, const LevenbergMarquardtSettings& settings) {
    check_spectrum(data, 4);
    const Observations obs = to_fit_units(data);
    const auto& x = obs.x;
    const auto& y = obs.y;

    // Peak or dip relative to the edge baseline, whichever deviates more.
    const double baseline = edge_mean(y, 0.1);
    const auto [lo_it, hi_it] = std::minmax_element(y.begin(), y.end());
    const bool dip = (baseline - *lo_it) > (*hi_it - baseline);
    const std::size_t peak = static_cast<std::size_t>((dip ? lo_it : hi_it) - y.begin());
    const double amplitude = y[peak] - baseline;
    const double half = baseline + 0.5 * amplitude;
    const auto beyond_half = [&](std::size_t i) {
        return dip ? y[i] > half : y[i] < half;
    };
    const auto crossing = [&](std::size_t inner, std::size_t outer) {
        const double t = (half - y[inner]) / (y[outer] - y[inner]);
        return x[inner] + t * (x[outer] - x[inner]);
    };
    double left = x.front();
    for (std::size_t i = peak; i > 0; --i) {
        if (beyond_half(i - 1)) {
            left = crossing(i, i - 1);
            break;
        }
    }
    double right = x.back();
    for (std::size_t i = peak; i + 1 < x.size(); ++i) {
        if (beyond_half(i + 1)) {
            right = crossing(i, i + 1);
            break;
        }
    }
    double width = right - left;
    if (!(width > 0.0)) width = 0.5 * (x.back() - x.front());

    const auto model = lorentzian_model();
    auto bounds = ParameterBounds::unbounded(4);
    bounds.lower[2] = 1e-9 * (x.back() - x.front());
    FitResult r = least_squares(model.function, obs, {amplitude, x[peak], width, baseline},
                                model.names, bounds, settings);
    convert_frequency(r, 1);
    convert_frequency(r, 2);
    return r;
}

FitResult fit_coupled_transmission(const Spectrum& data, const CavityCalibration& fixed,
                                   const LevenbergMarquardtSettings& settings) {
    check_spectrum(data, 2);
    const auto model = coupled_transmission_model(fixed);
    const Observations obs = to_fit_units(data);
    const double kappa = angular_to_mhz(fixed.kappa);
    const double gamma = angular_to_mhz(fixed.gamma);
    const double amplitude = fixed.amplitude();

    // Normalize by the empty-cavity Lorentzian inside +-sqrt(3) kappa and
    // locate the atom-induced dip.
    std::vector<double> ratio;
    std::vector<double> freq;
    for (std::size_t i = 0; i < obs.size(); ++i) {
        const double lorentz = kappa * kappa / (obs.x[i] * obs.x[i] + kappa * kappa);
        if (lorentz < 0.25) continue;
        ratio.push_back(obs.y[i] / (amplitude * lorentz));
        freq.push_back(obs.x[i]);
    }
    double g0_init = 0.1 * gamma;
    double offset_init = 0.0;
    if (!ratio.empty()) {
        const auto smooth = smooth3(ratio);
        const auto min_it = std::min_element(smooth.begin(), smooth.end());
        offset_init = -freq[static_cast<std::size_t>(min_it - smooth.begin())];
        const double depth = *min_it;
        // depth ~ 1 / (1 + 2 C0)^2 at the atomic resonance.
        if (depth > 0.0 && depth < 1.0) {
            const double c0 = 0.5 * (1.0 / std::sqrt(depth) - 1.0);
            g0_init = std::max(g0_init, std::sqrt(2.0 * kappa * gamma * c0));
        }
    }

    ParameterBounds bounds{{0.0, -kInf}, {kInf, kInf}};
    FitResult r = least_squares(model.function, obs, {g0_init, offset_init}, model.names, bounds,
                                settings);
    convert_frequency(r, 0);
    convert_frequency(r, 1);
    return r;
}

FitResult fit_coupled_reflection(const Spectrum& data, const CavityCalibration& fixed,
                                 const LevenbergMarquardtSettings& settings) {
    check_spectrum(data, 3);
    const auto model = coupled_reflection_model(fixed);
    const Observations obs = to_fit_units(data);
    const double gamma = angular_to_mhz(fixed.gamma);
    const auto empty = system_in_mhz(fixed, 0.0, 0.0);

    // Far level from the edges relative to the bare-cavity shape.
    const std::size_t n = obs.size();
    const std::size_t k = std::max<std::size_t>(1, n / 10);
    double far = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        far += obs.y[i] / reflection(empty, obs.x[i]);
        far += obs.y[n - 1 - i] / reflection(empty, obs.x[n - 1 - i]);
    }
    far /= 2.0 * static_cast<double>(k);

    // Atom position: largest smoothed deviation from the bare reflection.
    std::vector<double> deviation(n);
    for (std::size_t i = 0; i < n; ++i) {
        deviation[i] = std::fabs(obs.y[i] / far - reflection(empty, obs.x[i]));
    }
    const auto smooth = smooth3(deviation);
    const std::size_t at = static_cast<std::size_t>(
        std::max_element(smooth.begin(), smooth.end()) - smooth.begin());
    const double offset_init = -obs.x[at];

    // Coarse scan of g0 at the located offset.
    double g0_init = 0.1 * gamma;
    double best = kInf;
    for (int step = 1; step <= 60; ++step) {
        const double g0 = 0.1 * gamma * step;
        const std::vector<double> p{g0, offset_init, far};
        double chi2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double w = obs.sigma.empty() ? 1.0 : 1.0 / obs.sigma[i];
            const double res = (model.function(obs.x[i], p) - obs.y[i]) * w;
            chi2 += res * res;
        }
        if (chi2 < best) {
            best = chi2;
            g0_init = g0;
        }
    }

    ParameterBounds bounds{{0.0, -kInf, 0.0}, {kInf, kInf, kInf}};
    FitResult r = least_squares(model.function, obs, {g0_init, offset_init, far}, model.names,
                                bounds, settings);
    convert_frequency(r, 0);
    convert_frequency(r, 1);
    return r;
}

FitResult fit_exponential_decay(const std::vector<SurvivalPoint>& survival,
                                const LevenbergMarquardtSettings& settings) {
    std::set<double> taus;
    for (const auto& s : survival) {
        if (!(s.survived >= 0.0 && s.survived <= 1.0)) {
            throw std::invalid_argument("survival fraction must lie in [0, 1]");
        }
        if (s.trials < 1) throw std::invalid_argument("trials must be >= 1");
        if (!(s.tau >= 0.0)) throw std::invalid_argument("tau must be non-negative");
        taus.insert(s.tau);
    }
    if (taus.size() < 3) throw DegenerateData("need at least three distinct waiting times");
    const bool constant = std::all_of(survival.begin(), survival.end(), [&](const SurvivalPoint& s) {
        return s.survived == survival.front().survived;
    });
    if (constant) {
        throw UnidentifiableLifetime("survival probability does not change with tau");
    }

    Observations obs;
    for (const auto& s : survival) {
        const double n = static_cast<double>(s.trials);
        obs.x.push_back(s.tau);
        obs.y.push_back(s.survived);
        obs.sigma.push_back(std::max(std::sqrt(s.survived * (1.0 - s.survived) / n), 0.5 / n));
    }

    // Log-linear regression over the interior points for the start.
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int m = 0;
    for (const auto& s : survival) {
        if (s.survived <= 0.0) continue;
        const double ly = std::log(s.survived);
        sx += s.tau;
        sy += ly;
        sxx += s.tau * s.tau;
        sxy += s.tau * ly;
        ++m;
    }
    const double span = *taus.rbegin() - *taus.begin();
    double t0_init = span;
    double p0_init = 1.0;
    if (m >= 2) {
        const double denom = m * sxx - sx * sx;
        if (denom > 0.0) {
            const double slope = (m * sxy - sx * sy) / denom;
            const double intercept = (sy - slope * sx) / m;
            if (slope < 0.0) t0_init = -1.0 / slope;
            p0_init = std::exp(intercept);
        }
    }

    const auto model = exponential_decay_model();
    ParameterBounds bounds{{1e-9 * span, 0.0}, {kInf, kInf}};
    t0_init = std::max(t0_init, bounds.lower[0]);
    return least_squares(model.function, obs, {t0_init, p0_init}, model.names, bounds, settings);
}

}  // namespace concentric
