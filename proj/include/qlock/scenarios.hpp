#pragma once

#include <optional>

#include "qlock/scenario.hpp"

namespace qlock {

// Inputs accepted by the scenario builders. Couplings come either directly
// (xi_a, xi_b or xi_b_ratio) or, in SI mode, from the cavity physicalities
// (wavelength, finesse, intracavity power).
struct ScenarioParams {
    UnitMode units = UnitMode::Normalized;
    std::string label;

    std::optional<double> xi_a; // defaults to 1/sqrt(2) in normalized mode
    std::optional<double> xi_b;
    std::optional<double> xi_b_ratio;

    double mass = 1.0;
    std::optional<double> mass_r;
    std::optional<double> mass_i;

    std::optional<double> lambda;
    std::optional<double> finesse_a;
    std::optional<double> power_a; // intracavity power [W]
    std::optional<double> finesse_b;
    std::optional<double> power_b;

    GainMode gain_mode = GainMode::Infinite; // locking-family default
    std::optional<Complex> fixed_gain;       // feedback impedance when gain_mode == Fixed
    double feedforward_gain = 2.0;           // displacement gain of the cavity lock
    double correction_gain = 2.0;            // signal-subtraction coefficient

    double loss = 0.0;
    double squeeze_r = 0.0;
    bool squeeze_tracking = true;
    double squeeze_fixed_angle = 0.0;

    std::optional<DetectionPolicy> detection_a;
    std::optional<DetectionPolicy> detection_b;

    SpectrumFn force_noise_m;
    SpectrumFn force_noise_r;
    SpectrumFn force_noise_i;
};

// Builds and validates one of the curated configurations.
Scenario build_scenario(ScenarioId id, const ScenarioParams& params);

// Closed-form budgets used as oracles against the generic network solve. All
// take raw parameters; suspended mirrors throughout.

// Phase readout of a free mirror: measurement + back-action + classical term.
double free_sigma(double xi_a, double mass, double hbar, double omega, double sigma_ff = 0.0);

// Envelope of free budgets over the coupling strength: hbar / (M omega^2).
double sql_envelope_sigma(double mass, double hbar, double omega);

// Frequency-tracking squeezed input on the free configuration.
double squeezed_input_sigma(double xi_a, double mass, double hbar, double omega, double r);

// Readout angle tracking the back-action quadrature: flat measurement floor.
double variational_sigma(double xi_a);

// Mirror locked on the reference at infinite gain, phase sensor readout.
double locking_sigma_inf(double xi_a, double xi_b, double mass, double hbar, double omega);

// Locking with the back-action evading sensor readout: both phase floors.
double backaction_cancel_sigma(double xi_a, double xi_b);

// Whole-cavity lock via feedforward to the input mirror.
double cavity_locking_sigma(double xi_a, double xi_b);

// Sensor detection angle of the cavity lock: arccot(1.5 (omega_sql_b/omega)^2).
double cavity_locking_angle(double omega, double omega_sql_b);

// Budget of the subtraction variant, evaluated through the network.
double signal_correction_sigma(const Scenario& scenario, double omega);

} // namespace qlock
