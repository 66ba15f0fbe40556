#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "concentric/spectra.hpp"

namespace concentric {

// Rates in counts/s, times in s.
struct TraceConfig {
    double background_rate = 2.0e3;
    double atom_rate = 4.0e4;  // total detected rate while an atom is trapped
    double bin_width = 1e-3;
    double duration = 10.0;
    double loading_rate = 0.5;  // arrivals/s while the trap is empty
    double lifetime_t0 = 0.230;
    std::uint64_t seed = 1;

    std::size_t bin_count() const;
    void validate() const;
};

struct Interval {
    double start = 0.0;
    double end = 0.0;

    friend bool operator==(const Interval&, const Interval&) = default;
};

struct PhotonTrace {
    std::vector<std::uint64_t> counts;
    double bin_width = 0.0;
    // Atom-presence intervals; set only for synthetic traces.
    std::optional<std::vector<Interval>> truth;

    double duration() const { return static_cast<double>(counts.size()) * bin_width; }
};

// Random streams used under TraceConfig::seed.
namespace streams {
inline constexpr std::uint64_t occupancy = 0;
inline constexpr std::uint64_t counts = 1;
inline constexpr std::uint64_t survival_base = 16;  // + index of tau
}  // namespace streams

// Single-occupancy loading/loss process on [0, duration): arrivals at
// loading_rate while empty, exponential dwell with mean lifetime_t0.
std::vector<Interval> simulate_occupancy(const TraceConfig& cfg);

// Fraction of each bin covered by the intervals.
std::vector<double> occupancy_per_bin(std::span<const Interval> intervals, double bin_width,
                                      std::size_t bins);

PhotonTrace simulate_trace(const TraceConfig& cfg);

struct DetectorSettings {
    double threshold_sigma = 5.0;
    int min_bins = 2;
};

// Background mean per bin: mean of the lowest quartile as a seed, then a
// sigma-clipped mean at mu + threshold_sigma sqrt(mu) iterated to a fixed
// point. Throws DegenerateData if every bin holds the same count.
double estimate_background(std::span<const std::uint64_t> counts, double threshold_sigma);

// Hysteresis detector. Enters "atom present" at the first of min_bins
// consecutive bins above mu + k sqrt(mu), leaves at the first of min_bins
// consecutive bins at or below mu + (k/2) sqrt(mu). Intervals are in seconds
// on bin edges.
std::vector<Interval> detect_events(const PhotonTrace& trace, const DetectorSettings& settings = {});

// For each truth interval, the index of the detected interval overlapping it
// most, if any.
std::vector<std::optional<std::size_t>> match_events(std::span<const Interval> truth,
                                                     std::span<const Interval> detected);

struct DetectionScore {
    double precision = 0.0;
    double recall = 0.0;
    std::size_t matched = 0;
};

DetectionScore score_detection(std::span<const Interval> truth, std::span<const Interval> detected);

struct SurvivalCount {
    double tau = 0.0;
    int survived = 0;
    int trials = 0;
};

// Survival iff an exponential dwell (mean lifetime_t0) exceeds tau. Stream
// survival_base + i serves tau_list[i].
std::vector<SurvivalCount> survival_experiment(const TraceConfig& cfg,
                                               std::span<const double> tau_list, int trials_per_tau);

struct AlternatingTraces {
    PhotonTrace probe;    // one bin per probe window
    PhotonTrace cooling;  // one bin per cooling window
};

// Interleaved probe/cool windows over cfg.duration. Probe windows detect
// background_rate + probe_flux * transmission, using the coupled system while
// the atom is present and the same system with g0 = 0 otherwise. Cooling
// windows carry the fluorescence presence signal.
AlternatingTraces alternating_sequence(const TraceConfig& cfg, double probe_duration,
                                       double cool_duration, const CoupledSystem& sys,
                                       double probe_omega, double probe_flux);

}  // namespace concentric
