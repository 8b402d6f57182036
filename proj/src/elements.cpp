#include "qlock/elements.hpp"

#include <cmath>
#include <numbers>

namespace qlock {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr Complex kI{0.0, 1.0};
} // namespace

FieldChannel FieldChannel::from_xi(std::string name, double xi) {
    if (!(xi > 0.0))
        throw ConfigError("channel '" + name + "': coupling parameter must be positive");
    FieldChannel ch;
    ch.name = std::move(name);
    ch.xi = xi;
    return ch;
}

FieldChannel FieldChannel::from_physical(std::string name, double lambda, double finesse,
                                         double intracavity_power, const Constants& constants) {
    FieldChannel ch;
    ch.name = std::move(name);
    ch.lambda = lambda;
    ch.finesse = finesse;
    ch.alpha = intracavity_amplitude(intracavity_power, lambda, constants);
    ch.xi = optomech_coupling(lambda, finesse, ch.alpha);
    return ch;
}

Complex MechanicalMode::impedance_at(double omega) const {
    return impedance(omega);
}

MechanicalMode MechanicalMode::suspended(std::string name, double mass) {
    if (!(mass > 0.0))
        throw ConfigError("mirror '" + name + "': mass must be positive");
    MechanicalMode mode;
    mode.name = std::move(name);
    mode.mass = mass;
    mode.impedance = [mass](double omega) { return Complex{0.0, -omega * mass}; };
    return mode;
}

std::string_view angle_rule_name(AngleRule rule) {
    switch (rule) {
    case AngleRule::Phase: return "phase";
    case AngleRule::Fixed: return "fixed";
    case AngleRule::EvadingSingle: return "evading";
    case AngleRule::EvadingCavity: return "evading-cavity";
    case AngleRule::InterferometerOptimal: return "optimal";
    }
    return "?";
}

std::string_view gain_mode_name(GainMode mode) {
    switch (mode) {
    case GainMode::Off: return "off";
    case GainMode::Fixed: return "fixed";
    case GainMode::Infinite: return "infinite";
    case GainMode::Optimized: return "optimized";
    }
    return "?";
}

double DetectionPolicy::cot_theta(double omega, double omega_sql) const {
    switch (rule) {
    case AngleRule::Phase:
        return 0.0;
    case AngleRule::Fixed: {
        double s = std::sin(fixed_angle);
        if (s == 0.0)
            throw NumericError("degenerate readout: sin(theta) = 0 for fixed angle " +
                               std::to_string(fixed_angle));
        return std::cos(fixed_angle) / s;
    }
    case AngleRule::EvadingSingle: {
        double q = omega_sql / omega;
        return q * q;
    }
    case AngleRule::EvadingCavity: {
        double q = omega_sql / omega;
        return 1.5 * q * q;
    }
    case AngleRule::InterferometerOptimal: {
        double q = omega_sql / omega;
        return q * q;
    }
    }
    return 0.0;
}

double DetectionPolicy::theta(double omega, double omega_sql) const {
    if (rule == AngleRule::Fixed) return fixed_angle;
    if (rule == AngleRule::Phase) return kPi / 2.0;
    return std::atan2(1.0, cot_theta(omega, omega_sql)); // arccot in (0, pi/2]
}

double DetectionPolicy::sin_theta(double omega, double omega_sql) const {
    if (rule == AngleRule::Fixed) return std::sin(fixed_angle);
    if (rule == AngleRule::Phase) return 1.0;
    double c = cot_theta(omega, omega_sql);
    return 1.0 / std::sqrt(1.0 + c * c);
}

ControlLaw ControlLaw::feedback(GainMode mode, GainFn gain) {
    return {ControlKind::FeedbackToM, mode, std::move(gain)};
}

ControlLaw ControlLaw::feedforward(GainFn gain) {
    return {ControlKind::FeedforwardToI, GainMode::Fixed, std::move(gain)};
}

ControlLaw ControlLaw::subtraction(double coefficient) {
    return {ControlKind::SignalSubtraction, GainMode::Fixed,
            [coefficient](double) { return Complex{coefficient, 0.0}; }};
}

double optomech_coupling(double lambda, double finesse, double alpha) {
    if (!(lambda > 0.0)) throw ConfigError("optomech_coupling: wavelength must be positive");
    if (!(finesse > 0.0)) throw ConfigError("optomech_coupling: finesse must be positive");
    if (alpha < 0.0) throw ConfigError("optomech_coupling: amplitude must be non-negative");
    return (4.0 * kPi / lambda) * alpha * std::sqrt(2.0 * finesse / kPi);
}

double intracavity_amplitude(double intracavity_power, double lambda, const Constants& constants) {
    if (intracavity_power < 0.0)
        throw ConfigError("intracavity_amplitude: power must be non-negative");
    if (!(lambda > 0.0)) throw ConfigError("intracavity_amplitude: wavelength must be positive");
    const double photon_energy = constants.hbar * 2.0 * kPi * constants.c / lambda;
    return std::sqrt(intracavity_power / photon_energy);
}

double incident_power_for(double intracavity_power, double finesse) {
    return intracavity_power * kPi / (2.0 * finesse);
}

double sql_frequency(double xi, double mass, double hbar) {
    if (!(xi > 0.0) || !(mass > 0.0))
        throw ConfigError("sql_frequency: coupling and mass must be positive");
    return std::sqrt(2.0 * hbar * xi * xi / mass);
}

QuadPair cavity_reflect(const QuadPair& in, const Observable& cavity_length, double xi) {
    QuadPair out = in;
    out.q90 += Complex{2.0 * xi, 0.0} * cavity_length;
    return out;
}

Observable mirror_response(const ImpedanceFn& impedance, double omega, const Observable& force,
                           std::string_view mirror_name) {
    const Complex z = impedance(omega);
    if (std::abs(z) == 0.0)
        throw NumericError("singular dynamics: impedance of mirror '" + std::string(mirror_name) +
                           "' vanishes at omega = " + std::to_string(omega));
    const Complex denom = -kI * omega * z;
    Observable x = force;
    x *= 1.0 / denom;
    return x;
}

Observable homodyne(const QuadPair& out, double cos_theta, double sin_theta, double xi) {
    if (std::abs(sin_theta) < 1e-12)
        throw NumericError("degenerate readout: homodyne angle has sin(theta) = 0");
    Observable est = Complex{cos_theta, 0.0} * out.q0;
    est += Complex{sin_theta, 0.0} * out.q90;
    est *= 1.0 / (2.0 * xi * sin_theta);
    return est;
}

QuadPair lossy_port(const QuadPair& in, double eps, int vac0_index, int vac90_index) {
    if (eps < 0.0 || eps >= 1.0)
        throw ConfigError("loss fraction must lie in [0, 1), got " + std::to_string(eps));
    if (eps == 0.0) return in;
    const double t = std::sqrt(1.0 - eps);
    const double l = std::sqrt(eps);
    QuadPair out = in;
    out.q0 *= t;
    out.q90 *= t;
    out.q0.add(static_cast<std::size_t>(vac0_index), l);
    out.q90.add(static_cast<std::size_t>(vac90_index), l);
    return out;
}

} // namespace qlock
