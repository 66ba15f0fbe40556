#include "concentric/loss_budget.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "concentric/errors.hpp"
#include "concentric/units.hpp"

namespace concentric {

using units::kPi;
using units::kSpeedOfLight;
using units::kTwoPi;

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument(std::string(name) + " must be positive and finite");
    }
}

void require_fractions(double t, double l) {
    if (!(t > 0.0 && t < 1.0)) throw std::invalid_argument("mirror transmission must be in (0, 1)");
    if (!(l >= 0.0 && l < 1.0)) throw std::invalid_argument("absorption loss must be in [0, 1)");
}

// First-order propagation through f(x0, x1) by central differences.
template <class F>
Measured propagate(F&& f, const std::array<Measured, 2>& x) {
    Measured out{f(x[0].value, x[1].value), 0.0};
    double var = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (x[k].sigma == 0.0) continue;
        const double h = 1e-6 * (x[k].value != 0.0 ? std::fabs(x[k].value) : 1.0);
        auto up = x;
        auto down = x;
        up[k].value += h;
        down[k].value -= h;
        const double deriv =
            (f(up[0].value, up[1].value) - f(down[0].value, down[1].value)) / (2.0 * h);
        var += deriv * deriv * x[k].sigma * x[k].sigma;
    }
    out.sigma = std::sqrt(var);
    return out;
}

}  // namespace

LossBudget LossBudget::from_losses(double mirror_transmission, double round_trip_absorption,
                                   double cavity_length) {
    require_fractions(mirror_transmission, round_trip_absorption);
    require_positive(cavity_length, "cavity_length");
    LossBudget b;
    b.mirror_transmission = mirror_transmission;
    b.round_trip_absorption = round_trip_absorption;
    b.finesse = kTwoPi / (2.0 * mirror_transmission + round_trip_absorption);
    const auto rates = decay_rates(mirror_transmission, round_trip_absorption, cavity_length);
    b.cavity_field_decay = rates.kappa;
    b.mirror_field_decay = rates.kappa_t;
    b.incoupling_efficiency = concentric::incoupling_efficiency(mirror_transmission, round_trip_absorption);
    b.resonant_transmission = concentric::resonant_transmission(mirror_transmission, round_trip_absorption);
    return b;
}

double finesse_from_linewidth(double full_linewidth, double cavity_length) {
    require_positive(full_linewidth, "linewidth");
    require_positive(cavity_length, "cavity_length");
    const double kappa = full_linewidth / 2.0;
    return kPi * kSpeedOfLight / (2.0 * kappa * cavity_length);
}

double absorption_loss(double finesse, double mirror_transmission) {
    require_positive(finesse, "finesse");
    require_positive(mirror_transmission, "mirror_transmission");
    const double loss = kTwoPi / finesse - 2.0 * mirror_transmission;
    if (loss < 0.0) {
        throw InconsistentInputs("finesse " + std::to_string(finesse) +
                                 " is too high for mirror transmission " +
                                 std::to_string(mirror_transmission) + " (negative absorption)");
    }
    return loss;
}

double incoupling_efficiency(double mirror_transmission, double round_trip_absorption) {
    require_fractions(mirror_transmission, round_trip_absorption);
    const double total = 2.0 * mirror_transmission + round_trip_absorption;
    const double r = round_trip_absorption / total;
    return 1.0 - r * r;
}

double resonant_transmission(double mirror_transmission, double round_trip_absorption) {
    require_fractions(mirror_transmission, round_trip_absorption);
    const double total = 2.0 * mirror_transmission + round_trip_absorption;
    const double r = 2.0 * mirror_transmission / total;
    return r * r;
}

DecayRates decay_rates(double mirror_transmission, double round_trip_absorption,
                       double cavity_length) {
    require_fractions(mirror_transmission, round_trip_absorption);
    require_positive(cavity_length, "cavity_length");
    const double per_unit_loss = kSpeedOfLight / (4.0 * cavity_length);
    return {(2.0 * mirror_transmission + round_trip_absorption) * per_unit_loss,
            mirror_transmission * per_unit_loss};
}

double cooperativity(double coupling, double kappa, double gamma) {
    if (coupling < 0.0) throw std::invalid_argument("coupling must be non-negative");
    require_positive(kappa, "kappa");
    require_positive(gamma, "gamma");
    return coupling * coupling / (2.0 * kappa * gamma);
}

BudgetReport budget_from_finesse(Measured finesse, Measured mirror_transmission,
                                 double cavity_length) {
    require_positive(cavity_length, "cavity_length");
    // Surface the inconsistency at the nominal point before differentiating.
    absorption_loss(finesse.value, mirror_transmission.value);

    const std::array<Measured, 2> in{finesse, mirror_transmission};
    const auto loss = [](double f, double t) { return kTwoPi / f - 2.0 * t; };
    const auto eta = [&](double f, double t) {
        const double l = loss(f, t);
        const double total = 2.0 * t + l;
        return 1.0 - (l / total) * (l / total);
    };
    const auto tmax = [&](double f, double t) {
        const double total = 2.0 * t + loss(f, t);
        return 4.0 * t * t / (total * total);
    };
    const auto kappa = [&](double f, double) { return kPi * kSpeedOfLight / (2.0 * f * cavity_length); };
    const auto kappa_t = [&](double, double t) { return t * kSpeedOfLight / (4.0 * cavity_length); };

    BudgetReport r;
    r.finesse = finesse;
    r.round_trip_absorption = propagate(loss, in);
    r.incoupling_efficiency = propagate(eta, in);
    r.resonant_transmission = propagate(tmax, in);
    r.cavity_field_decay = propagate(kappa, in);
    r.mirror_field_decay = propagate(kappa_t, in);
    return r;
}

BudgetReport budget_from_linewidth(Measured full_linewidth, Measured mirror_transmission,
                                   double cavity_length) {
    const double f = finesse_from_linewidth(full_linewidth.value, cavity_length);
    const double f_sigma = f * full_linewidth.sigma / full_linewidth.value;
    return budget_from_finesse({f, f_sigma}, mirror_transmission, cavity_length);
}

}  // namespace concentric
