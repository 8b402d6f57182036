#pragma once

#include <functional>
#include <optional>
#include <string>

#include "qlock/spectral.hpp"

namespace qlock {

// Sign and orientation conventions, fixed once for the whole library:
//
//   * interferometer beam a probes the main cavity; its length variation is
//     X_sig + X_m (two-mirror setups) or X_sig + X_m - X_i (three-mirror);
//   * sensor beam b probes the control cavity between the end mirror m and
//     the reference mirror r; its length variation is X_r - X_m;
//   * radiation pressure of beam a enters mirror m with +hbar*xi_a*a0 and
//     mirror i with -hbar*xi_a*a0;
//   * radiation pressure of beam b enters mirror m with -hbar*xi_b*b0 and
//     mirror r with +hbar*xi_b*b0;
//   * the intracavity mean amplitude alpha is a photon-flux amplitude:
//     |alpha|^2 = P_cav * lambda / (2 pi hbar c).
//
// The cavity response is taken flat: all analysis frequencies are assumed to
// lie below the cavity bandwidth.

// An optical probe beam reflected by a resonant, single-ended cavity.
struct FieldChannel {
    std::string name;    // "a" interferometer, "b" sensor
    double xi = 0.0;     // optomechanical coupling parameter
    double lambda = 0.0; // optical wavelength [m], SI parameterization only
    double finesse = 0.0;
    double alpha = 0.0;  // intracavity mean amplitude, photon-flux units

    static FieldChannel from_xi(std::string name, double xi);
    static FieldChannel from_physical(std::string name, double lambda, double finesse,
                                      double intracavity_power, const Constants& constants);
};

using ImpedanceFn = std::function<Complex(double)>;

// A movable mirror. The suspended (free-mass) model has Z(omega) = -i omega M.
struct MechanicalMode {
    std::string name; // "m", "r" or "i"
    double mass = 0.0;
    ImpedanceFn impedance;
    SpectrumFn classical_force; // sigma_FF(omega), zero when unset

    Complex impedance_at(double omega) const;

    static MechanicalMode suspended(std::string name, double mass);
};

// Homodyne angle rules. The frequency-dependent rules express cot(theta) in
// terms of the relevant beam's standard-quantum-limit frequency:
//   EvadingSingle         cot(theta) = (omega_sql_b / omega)^2
//   EvadingCavity         cot(theta) = (3/2) (omega_sql_b / omega)^2
//   InterferometerOptimal cot(theta) = (omega_sql_a / omega)^2
enum class AngleRule { Phase, Fixed, EvadingSingle, EvadingCavity, InterferometerOptimal };

std::string_view angle_rule_name(AngleRule rule);

struct DetectionPolicy {
    AngleRule rule = AngleRule::Phase;
    double fixed_angle = 0.0; // used by AngleRule::Fixed

    // cot(theta) at omega; omega_sql is the SQL frequency of the beam the
    // rule refers to. Exact zero for phase readout.
    double cot_theta(double omega, double omega_sql) const;
    double theta(double omega, double omega_sql) const;
    double sin_theta(double omega, double omega_sql) const;

    static DetectionPolicy phase() { return {AngleRule::Phase, 0.0}; }
    static DetectionPolicy fixed(double theta) { return {AngleRule::Fixed, theta}; }
};

enum class ControlKind { None, FeedbackToM, FeedforwardToI, SignalSubtraction };
enum class GainMode { Off, Fixed, Infinite, Optimized };

std::string_view gain_mode_name(GainMode mode);

using GainFn = std::function<Complex(double)>;

// Feedback / feedforward law. The gain function returns the loop transfer
// Zfb(omega) in impedance units; Infinite mode is handled by its algebraic
// limit when the network is assembled, never by a large finite number. For
// SignalSubtraction the gain is the dimensionless subtraction coefficient.
struct ControlLaw {
    ControlKind kind = ControlKind::None;
    GainMode mode = GainMode::Off;
    GainFn gain;

    Complex gain_at(double omega) const { return gain ? gain(omega) : Complex{0.0, 0.0}; }

    static ControlLaw none() { return {}; }
    static ControlLaw feedback(GainMode mode, GainFn gain = {});
    static ControlLaw feedforward(GainFn gain);
    static ControlLaw subtraction(double coefficient);
};

// Coupling parameter of a resonant cavity: (4 pi / lambda) alpha sqrt(2 F / pi).
double optomech_coupling(double lambda, double finesse, double alpha);

// Intracavity mean amplitude from intracavity power, photon-flux convention.
double intracavity_amplitude(double intracavity_power, double lambda, const Constants& constants);

// Incident power sustaining a given intracavity power: P_in = P_cav pi / (2 F).
double incident_power_for(double intracavity_power, double finesse);

// Frequency at which measurement and back-action noise balance: sqrt(2 hbar xi^2 / M).
double sql_frequency(double xi, double mass, double hbar);

// Quadrature pair of one field, each quadrature a linear combination of the
// scenario's noise sources.
struct QuadPair {
    Observable q0;
    Observable q90;
};

// Resonant lossless reflection: amplitude is unchanged, phase picks up
// 2 xi X from the cavity length observable X.
QuadPair cavity_reflect(const QuadPair& in, const Observable& cavity_length, double xi);

// Displacement response X = F / (-i omega Z(omega)) applied coefficient-wise.
Observable mirror_response(const ImpedanceFn& impedance, double omega, const Observable& force,
                           std::string_view mirror_name = "");

// Homodyne estimator in displacement units: a_theta^out / (2 xi sin(theta)).
Observable homodyne(const QuadPair& out, double cos_theta, double sin_theta, double xi);

// Output-port beamsplitter with intensity loss eps: existing coefficients are
// scaled by sqrt(1-eps) and the fresh vacuum enters with sqrt(eps) on the
// pre-registered sources vac0_index / vac90_index.
QuadPair lossy_port(const QuadPair& in, double eps, int vac0_index, int vac90_index);

} // namespace qlock
