#include "qlock/scenarios.hpp"

#include <cmath>

#include "qlock/network.hpp"

namespace qlock {

namespace {

constexpr double kInvSqrt2 = 0.7071067811865475244;

bool has_si_channel_a(const ScenarioParams& p) {
    return p.lambda && p.finesse_a && p.power_a;
}

bool has_si_channel_b(const ScenarioParams& p) {
    return p.lambda && p.finesse_b && p.power_b;
}

FieldChannel make_channel_a(const ScenarioParams& p, const Constants& constants) {
    if (p.xi_a) return FieldChannel::from_xi("a", *p.xi_a);
    if (has_si_channel_a(p)) {
        if (p.units != UnitMode::SI)
            throw ConfigError("physical cavity parameters require si units");
        return FieldChannel::from_physical("a", *p.lambda, *p.finesse_a, *p.power_a, constants);
    }
    if (p.units == UnitMode::Normalized) return FieldChannel::from_xi("a", kInvSqrt2);
    throw ConfigError("xi_a (or lambda/finesse_a/power_a) is required in si units");
}

FieldChannel make_channel_b(const ScenarioParams& p, double xi_a, const Constants& constants) {
    if (p.xi_b) return FieldChannel::from_xi("b", *p.xi_b);
    if (p.xi_b_ratio) return FieldChannel::from_xi("b", *p.xi_b_ratio * xi_a);
    if (has_si_channel_b(p)) {
        if (p.units != UnitMode::SI)
            throw ConfigError("physical cavity parameters require si units");
        return FieldChannel::from_physical("b", *p.lambda, *p.finesse_b, *p.power_b, constants);
    }
    throw ConfigError("xi_b is required for sensor scenarios "
                      "(set xi_b, xi_b_ratio, or finesse_b/power_b)");
}

MechanicalMode make_mirror(const char* name, double mass, const SpectrumFn& force_noise) {
    MechanicalMode mirror = MechanicalMode::suspended(name, mass);
    if (force_noise) mirror.classical_force = force_noise;
    return mirror;
}

ControlLaw make_feedback(const ScenarioParams& p) {
    switch (p.gain_mode) {
    case GainMode::Off:
        return ControlLaw{ControlKind::FeedbackToM, GainMode::Off, {}};
    case GainMode::Infinite:
        return ControlLaw::feedback(GainMode::Infinite);
    case GainMode::Optimized:
        return ControlLaw::feedback(GainMode::Optimized);
    case GainMode::Fixed: {
        if (!p.fixed_gain)
            throw ConfigError("fixed gain mode requires an explicit gain value");
        const Complex g = *p.fixed_gain;
        return ControlLaw::feedback(GainMode::Fixed, [g](double) { return g; });
    }
    }
    throw ConfigError("unhandled gain mode");
}

} // namespace

Scenario build_scenario(ScenarioId id, const ScenarioParams& params) {
    Scenario scn;
    scn.id = id;
    scn.units = params.units;
    scn.constants =
        params.units == UnitMode::SI ? Constants::si() : Constants::normalized();
    scn.label = params.label.empty() ? std::string(scenario_id_name(id)) : params.label;

    scn.interferometer = make_channel_a(params, scn.constants);
    scn.mirror_m = make_mirror("m", params.mass, params.force_noise_m);

    const bool wants_sensor = id == ScenarioId::Locking || id == ScenarioId::BackactionCancel ||
                              id == ScenarioId::CavityLocking ||
                              id == ScenarioId::SignalCorrection;
    if (wants_sensor) {
        scn.sensor = make_channel_b(params, scn.interferometer.xi, scn.constants);
        scn.mirror_r = make_mirror("r", params.mass_r.value_or(params.mass), params.force_noise_r);
    }
    if (id == ScenarioId::CavityLocking || id == ScenarioId::SignalCorrection)
        scn.mirror_i = make_mirror("i", params.mass_i.value_or(params.mass), params.force_noise_i);

    switch (id) {
    case ScenarioId::Free:
    case ScenarioId::SqlEnvelope:
        scn.detection_a = params.detection_a.value_or(DetectionPolicy::phase());
        break;
    case ScenarioId::SqueezedInput:
        scn.detection_a = params.detection_a.value_or(DetectionPolicy::phase());
        scn.squeeze.r = params.squeeze_r;
        scn.squeeze.tracking = params.squeeze_tracking;
        scn.squeeze.fixed_angle = params.squeeze_fixed_angle;
        break;
    case ScenarioId::VariationalReadout:
        scn.detection_a =
            params.detection_a.value_or(DetectionPolicy{AngleRule::InterferometerOptimal, 0.0});
        break;
    case ScenarioId::Locking:
        scn.detection_a = params.detection_a.value_or(DetectionPolicy::phase());
        scn.detection_b = params.detection_b.value_or(DetectionPolicy::phase());
        scn.control = make_feedback(params);
        break;
    case ScenarioId::BackactionCancel:
        scn.detection_a = params.detection_a.value_or(DetectionPolicy::phase());
        scn.detection_b =
            params.detection_b.value_or(DetectionPolicy{AngleRule::EvadingSingle, 0.0});
        scn.control = make_feedback(params);
        break;
    case ScenarioId::CavityLocking: {
        scn.detection_a = params.detection_a.value_or(DetectionPolicy::phase());
        scn.detection_b = DetectionPolicy{AngleRule::EvadingCavity, 0.0};
        const double gd = params.feedforward_gain;
        const ImpedanceFn imp = scn.mirror_i->impedance;
        scn.control =
            ControlLaw::feedforward([gd, imp](double omega) { return gd * imp(omega); });
        if (params.gain_mode == GainMode::Off) scn.control.mode = GainMode::Off;
        break;
    }
    case ScenarioId::SignalCorrection:
        scn.detection_a = params.detection_a.value_or(DetectionPolicy::phase());
        scn.detection_b =
            params.detection_b.value_or(DetectionPolicy{AngleRule::EvadingCavity, 0.0});
        scn.control = ControlLaw::subtraction(params.correction_gain);
        if (params.gain_mode == GainMode::Off) scn.control.mode = GainMode::Off;
        break;
    }

    scn.loss = params.loss;

    scn.metadata["xi_a"] = scn.interferometer.xi;
    scn.metadata["mass_m"] = scn.mirror_m.mass;
    if (scn.sensor) {
        scn.metadata["xi_b"] = scn.sensor->xi;
        scn.metadata["mass_r"] = scn.mirror_r->mass;
    }
    if (scn.mirror_i) scn.metadata["mass_i"] = scn.mirror_i->mass;
    if (scn.loss > 0.0) scn.metadata["loss"] = scn.loss;
    if (scn.squeeze.r > 0.0) scn.metadata["squeeze_r"] = scn.squeeze.r;
    if (id == ScenarioId::CavityLocking) scn.metadata["feedforward_gain"] = params.feedforward_gain;
    if (id == ScenarioId::SignalCorrection) scn.metadata["correction_gain"] = params.correction_gain;
    if (params.units == UnitMode::SI && has_si_channel_a(params)) {
        scn.metadata["lambda"] = *params.lambda;
        scn.metadata["finesse_a"] = *params.finesse_a;
        scn.metadata["power_a"] = *params.power_a;
        scn.metadata["incident_power_a"] = incident_power_for(*params.power_a, *params.finesse_a);
    }
    if (params.units == UnitMode::SI && has_si_channel_b(params)) {
        scn.metadata["finesse_b"] = *params.finesse_b;
        scn.metadata["power_b"] = *params.power_b;
        scn.metadata["incident_power_b"] = incident_power_for(*params.power_b, *params.finesse_b);
    }

    scn.validate();
    return scn;
}

double free_sigma(double xi_a, double mass, double hbar, double omega, double sigma_ff) {
    const double measurement = 1.0 / (4.0 * xi_a * xi_a);
    const double z2 = omega * mass * (omega * mass); // |Z_m|^2 for a suspended mirror
    const double back_action = hbar * hbar * xi_a * xi_a / (omega * omega * z2);
    const double classical = sigma_ff / (omega * omega * z2);
    return measurement + back_action + classical;
}

double sql_envelope_sigma(double mass, double hbar, double omega) {
    return hbar / (mass * omega * omega);
}

double squeezed_input_sigma(double xi_a, double mass, double hbar, double omega, double r) {
    const double omega_sql = sql_frequency(xi_a, mass, hbar);
    const double cot = (omega_sql / omega) * (omega_sql / omega);
    const double inv_sin2 = 1.0 + cot * cot;
    return std::exp(-2.0 * r) * inv_sin2 / (4.0 * xi_a * xi_a);
}

double variational_sigma(double xi_a) {
    return 1.0 / (4.0 * xi_a * xi_a);
}

double locking_sigma_inf(double xi_a, double xi_b, double mass, double hbar, double omega) {
    const double z2 = omega * mass * (omega * mass); // |Z_r|^2, identical suspended mirrors
    return 1.0 / (4.0 * xi_a * xi_a) + 1.0 / (4.0 * xi_b * xi_b) +
           hbar * hbar * xi_b * xi_b / (omega * omega * z2);
}

double backaction_cancel_sigma(double xi_a, double xi_b) {
    return 1.0 / (4.0 * xi_a * xi_a) + 1.0 / (4.0 * xi_b * xi_b);
}

double cavity_locking_sigma(double xi_a, double xi_b) {
    return 1.0 / (4.0 * xi_a * xi_a) + 1.0 / (xi_b * xi_b);
}

double cavity_locking_angle(double omega, double omega_sql_b) {
    if (!(omega > 0.0) || !(omega_sql_b > 0.0))
        throw ConfigError("cavity_locking_angle requires positive frequencies");
    const double q = omega_sql_b / omega;
    return std::atan2(1.0, 1.5 * q * q);
}

double signal_correction_sigma(const Scenario& scenario, double omega) {
    if (scenario.id != ScenarioId::SignalCorrection)
        throw ConfigError("signal_correction_sigma expects a signal-correction scenario");
    return NetworkModel(scenario).sigma(omega);
}

} // namespace qlock
