#include "concentric/trace.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "concentric/errors.hpp"
#include "concentric/random.hpp"

namespace concentric {

std::size_t TraceConfig::bin_count() const {
    return static_cast<std::size_t>(std::llround(duration / bin_width));
}

void TraceConfig::validate() const {
    if (!(background_rate >= 0.0)) throw std::invalid_argument("background_rate must be >= 0");
    if (!(atom_rate > background_rate)) {
        throw std::invalid_argument("atom_rate must exceed background_rate");
    }
    if (!(bin_width > 0.0)) throw std::invalid_argument("bin_width must be positive");
    if (!(duration > 0.0)) throw std::invalid_argument("duration must be positive");
    if (!(loading_rate >= 0.0)) throw std::invalid_argument("loading_rate must be >= 0");
    if (!(lifetime_t0 > 0.0)) throw std::invalid_argument("lifetime_t0 must be positive");
}

std::vector<Interval> simulate_occupancy(const TraceConfig& cfg) {
    cfg.validate();
    std::vector<Interval> intervals;
    if (cfg.loading_rate == 0.0) return intervals;
    Rng rng(cfg.seed, streams::occupancy);
    double t = 0.0;
    for (;;) {
        t += rng.exponential(1.0 / cfg.loading_rate);
        if (t >= cfg.duration) break;
        const double leave = t + rng.exponential(cfg.lifetime_t0);
        intervals.push_back({t, std::min(leave, cfg.duration)});
        t = leave;
        if (t >= cfg.duration) break;
    }
    return intervals;
}

std::vector<double> occupancy_per_bin(std::span<const Interval> intervals, double bin_width,
                                      std::size_t bins) {
    std::vector<double> frac(bins, 0.0);
    for (const auto& iv : intervals) {
        const auto first = static_cast<std::size_t>(std::max(0.0, std::floor(iv.start / bin_width)));
        for (std::size_t b = first; b < bins; ++b) {
            const double lo = static_cast<double>(b) * bin_width;
            const double hi = lo + bin_width;
            if (lo >= iv.end) break;
            const double overlap = std::min(iv.end, hi) - std::max(iv.start, lo);
            if (overlap > 0.0) frac[b] += overlap / bin_width;
        }
    }
    for (auto& f : frac) f = std::min(f, 1.0);
    return frac;
}

PhotonTrace simulate_trace(const TraceConfig& cfg) {
    cfg.validate();
    const std::size_t bins = cfg.bin_count();
    auto intervals = simulate_occupancy(cfg);
    const auto frac = occupancy_per_bin(intervals, cfg.bin_width, bins);

    Rng rng(cfg.seed, streams::counts);
    PhotonTrace trace;
    trace.bin_width = cfg.bin_width;
    trace.counts.resize(bins);
    for (std::size_t b = 0; b < bins; ++b) {
        const double rate = cfg.background_rate * (1.0 - frac[b]) + cfg.atom_rate * frac[b];
        trace.counts[b] = rng.poisson(rate * cfg.bin_width);
    }
    trace.truth = std::move(intervals);
    return trace;
}

double estimate_background(std::span<const std::uint64_t> counts, double threshold_sigma) {
    if (counts.empty()) throw DegenerateData("empty trace");
    std::vector<std::uint64_t> sorted(counts.begin(), counts.end());
    std::sort(sorted.begin(), sorted.end());
    if (sorted.front() == sorted.back()) {
        throw DegenerateData("all bins hold the same count; no background estimable");
    }

    const std::size_t quartile = std::max<std::size_t>(1, (sorted.size() + 3) / 4);
    double mu = 0.0;
    for (std::size_t i = 0; i < quartile; ++i) mu += static_cast<double>(sorted[i]);
    mu /= static_cast<double>(quartile);

    for (int iter = 0; iter < 100; ++iter) {
        const double cut = mu + threshold_sigma * std::sqrt(mu);
        // sorted is ascending, so the clipped set is a prefix.
        const auto end = std::upper_bound(sorted.begin(), sorted.end(), cut,
                                          [](double c, std::uint64_t v) { return c < static_cast<double>(v); });
        if (end == sorted.begin()) break;
        double sum = 0.0;
        for (auto it = sorted.begin(); it != end; ++it) sum += static_cast<double>(*it);
        const double next = sum / static_cast<double>(end - sorted.begin());
        if (next == mu) break;
        mu = next;
    }
    return mu;
}

std::vector<Interval> detect_events(const PhotonTrace& trace, const DetectorSettings& settings) {
    if (trace.counts.empty()) throw DegenerateData("empty trace");
    if (settings.min_bins < 1) throw std::invalid_argument("min_bins must be >= 1");
    const double mu = estimate_background(trace.counts, settings.threshold_sigma);
    const double enter = mu + settings.threshold_sigma * std::sqrt(mu);
    const double leave = mu + 0.5 * settings.threshold_sigma * std::sqrt(mu);
    const auto need = static_cast<std::size_t>(settings.min_bins);

    std::vector<Interval> events;
    bool present = false;
    std::size_t run = 0;
    std::size_t start = 0;
    for (std::size_t b = 0; b < trace.counts.size(); ++b) {
        const auto c = static_cast<double>(trace.counts[b]);
        const bool flips = present ? (c <= leave) : (c > enter);
        run = flips ? run + 1 : 0;
        if (run < need) continue;
        const std::size_t edge = b + 1 - need;
        if (!present) {
            start = edge;
        } else {
            events.push_back({static_cast<double>(start) * trace.bin_width,
                              static_cast<double>(edge) * trace.bin_width});
        }
        present = !present;
        run = 0;
    }
    if (present) events.push_back({static_cast<double>(start) * trace.bin_width, trace.duration()});
    return events;
}

std::vector<std::optional<std::size_t>> match_events(std::span<const Interval> truth,
                                                     std::span<const Interval> detected) {
    std::vector<std::optional<std::size_t>> out(truth.size());
    for (std::size_t t = 0; t < truth.size(); ++t) {
        double best = 0.0;
        for (std::size_t d = 0; d < detected.size(); ++d) {
            const double overlap = std::min(truth[t].end, detected[d].end) -
                                   std::max(truth[t].start, detected[d].start);
            if (overlap > best) {
                best = overlap;
                out[t] = d;
            }
        }
    }
    return out;
}

DetectionScore score_detection(std::span<const Interval> truth, std::span<const Interval> detected) {
    const auto matches = match_events(truth, detected);
    std::vector<bool> used(detected.size(), false);
    DetectionScore s;
    for (const auto& m : matches) {
        if (!m) continue;
        ++s.matched;
        used[*m] = true;
    }
    const auto hits = static_cast<double>(std::count(used.begin(), used.end(), true));
    s.recall = truth.empty() ? 1.0 : static_cast<double>(s.matched) / static_cast<double>(truth.size());
    s.precision = detected.empty() ? 1.0 : hits / static_cast<double>(detected.size());
    return s;
}

std::vector<SurvivalCount> survival_experiment(const TraceConfig& cfg,
                                               std::span<const double> tau_list, int trials_per_tau) {
    cfg.validate();
    if (trials_per_tau < 1) throw std::invalid_argument("trials_per_tau must be >= 1");
    std::vector<SurvivalCount> out;
    out.reserve(tau_list.size());
    for (std::size_t i = 0; i < tau_list.size(); ++i) {
        if (!(tau_list[i] >= 0.0)) throw std::invalid_argument("tau must be non-negative");
        Rng rng(cfg.seed, streams::survival_base + i);
        int survived = 0;
        for (int k = 0; k < trials_per_tau; ++k) {
            if (rng.exponential(cfg.lifetime_t0) > tau_list[i]) ++survived;
        }
        out.push_back({tau_list[i], survived, trials_per_tau});
    }
    return out;
}

namespace {

// Fraction of [lo, hi) covered by the sorted, disjoint intervals, starting the
// scan at `cursor` and advancing it.
double covered_fraction(std::span<const Interval> intervals, std::size_t& cursor, double lo,
                        double hi) {
    while (cursor < intervals.size() && intervals[cursor].end <= lo) ++cursor;
    double covered = 0.0;
    for (std::size_t i = cursor; i < intervals.size() && intervals[i].start < hi; ++i) {
        covered += std::max(0.0, std::min(hi, intervals[i].end) - std::max(lo, intervals[i].start));
    }
    return covered / (hi - lo);
}

}  // namespace

AlternatingTraces alternating_sequence(const TraceConfig& cfg, double probe_duration,
                                       double cool_duration, const CoupledSystem& sys,
                                       double probe_omega, double probe_flux) {
    cfg.validate();
    sys.validate();
    if (!(probe_duration > 0.0) || !(cool_duration > 0.0)) {
        throw std::invalid_argument("probe and cooling durations must be positive");
    }
    if (!(probe_flux >= 0.0)) throw std::invalid_argument("probe_flux must be >= 0");

    auto empty = sys;
    empty.coupling_g0 = 0.0;
    const double t_atom = transmission(sys, probe_omega);
    const double t_empty = transmission(empty, probe_omega);

    const auto intervals = simulate_occupancy(cfg);
    const double cycle = probe_duration + cool_duration;
    const auto cycles = static_cast<std::size_t>(std::floor(cfg.duration / cycle));

    Rng rng(cfg.seed, streams::counts);
    AlternatingTraces out;
    out.probe.bin_width = probe_duration;
    out.cooling.bin_width = cool_duration;
    out.probe.counts.reserve(cycles);
    out.cooling.counts.reserve(cycles);
    std::size_t cursor = 0;
    for (std::size_t k = 0; k < cycles; ++k) {
        const double t0 = static_cast<double>(k) * cycle;
        const double f_probe = covered_fraction(intervals, cursor, t0, t0 + probe_duration);
        const double f_cool = covered_fraction(intervals, cursor, t0 + probe_duration, t0 + cycle);
        const double probe_rate =
            cfg.background_rate + probe_flux * (f_probe * t_atom + (1.0 - f_probe) * t_empty);
        const double cool_rate = cfg.background_rate * (1.0 - f_cool) + cfg.atom_rate * f_cool;
        out.probe.counts.push_back(rng.poisson(probe_rate * probe_duration));
        out.cooling.counts.push_back(rng.poisson(cool_rate * cool_duration));
    }
    out.probe.truth = intervals;
    out.cooling.truth = intervals;
    return out;
}

}  // namespace concentric
