#pragma once

namespace concentric {

// Value with a one-sigma uncertainty.
struct Measured {
    double value = 0.0;
    double sigma = 0.0;
};

// Mirror and finesse bookkeeping for a symmetric cavity of length l.
//
// Convention: kappa is the total cavity field decay rate (half the FWHM in
// rad/s), kappa_T = T c / (4 l) the field decay through one mirror. With
// these, kappa = 2 kappa_T + L c / (4 l), T_max = (2 kappa_T / kappa)^2 and
// 1 - eta = (1 - 2 kappa_T / kappa)^2 hold exactly.
struct LossBudget {
    double mirror_transmission = 0.0;   // T, per mirror
    double round_trip_absorption = 0.0; // L
    double finesse = 0.0;               // F = 2 pi / (2T + L)
    double cavity_field_decay = 0.0;    // kappa, rad/s
    double mirror_field_decay = 0.0;    // kappa_T, rad/s
    double incoupling_efficiency = 0.0; // eta
    double resonant_transmission = 0.0; // T_max

    static LossBudget from_losses(double mirror_transmission, double round_trip_absorption,
                                  double cavity_length);
};

struct DecayRates {
    double kappa = 0.0;
    double kappa_t = 0.0;
};

// F = pi c / (2 kappa l), with full_linewidth = 2 kappa in rad/s.
double finesse_from_linewidth(double full_linewidth, double cavity_length);

// L = 2 pi / F - 2 T. Throws InconsistentInputs when that is negative.
double absorption_loss(double finesse, double mirror_transmission);

// eta = 1 - L^2 / (2T + L)^2
double incoupling_efficiency(double mirror_transmission, double round_trip_absorption);

// T_max = 4 T^2 / (2T + L)^2
double resonant_transmission(double mirror_transmission, double round_trip_absorption);

DecayRates decay_rates(double mirror_transmission, double round_trip_absorption,
                       double cavity_length);

// C0 = g0^2 / (2 kappa gamma)
double cooperativity(double coupling, double kappa, double gamma);

// Budget outputs with first-order propagated uncertainties.
struct BudgetReport {
    Measured finesse;
    Measured round_trip_absorption;
    Measured incoupling_efficiency;
    Measured resonant_transmission;
    Measured cavity_field_decay;
    Measured mirror_field_decay;
};

BudgetReport budget_from_finesse(Measured finesse, Measured mirror_transmission,
                                 double cavity_length);

BudgetReport budget_from_linewidth(Measured full_linewidth, Measured mirror_transmission,
                                   double cavity_length);

}  // namespace concentric
