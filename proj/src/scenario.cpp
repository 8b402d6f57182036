#include "qlock/scenario.hpp"

namespace qlock {

std::string_view scenario_id_name(ScenarioId id) {
    switch (id) {
    case ScenarioId::Free: return "free";
    case ScenarioId::SqlEnvelope: return "sql-envelope";
    case ScenarioId::SqueezedInput: return "squeezed-input";
    case ScenarioId::VariationalReadout: return "variational-readout";
    case ScenarioId::Locking: return "locking";
    case ScenarioId::BackactionCancel: return "backaction-cancel";
    case ScenarioId::CavityLocking: return "cavity-locking";
    case ScenarioId::SignalCorrection: return "signal-correction";
    }
    return "?";
}

ScenarioId scenario_id_from(std::string_view name) {
    if (name == "free") return ScenarioId::Free;
    if (name == "sql-envelope") return ScenarioId::SqlEnvelope;
    if (name == "squeezed-input") return ScenarioId::SqueezedInput;
    if (name == "variational-readout") return ScenarioId::VariationalReadout;
    if (name == "locking") return ScenarioId::Locking;
    if (name == "backaction-cancel") return ScenarioId::BackactionCancel;
    if (name == "cavity-locking") return ScenarioId::CavityLocking;
    if (name == "signal-correction") return ScenarioId::SignalCorrection;
    throw ConfigError("unknown scenario id '" + std::string(name) + "'");
}

double Scenario::omega_sql_a() const {
    return sql_frequency(interferometer.xi, mirror_m.mass, constants.hbar);
}

double Scenario::omega_sql_b() const {
    if (!sensor)
        throw ConfigError("scenario '" + label + "' has no sensor channel");
    return sql_frequency(sensor->xi, mirror_m.mass, constants.hbar);
}

namespace {

void require(bool ok, const std::string& label, const std::string& what) {
    if (!ok) throw ConfigError("scenario '" + label + "': " + what);
}

} // namespace

void Scenario::validate() const {
    require(interferometer.xi > 0.0, label, "xi_a must be positive");
    require(mirror_m.mass > 0.0 && static_cast<bool>(mirror_m.impedance), label,
            "mirror m must be configured");
    require(loss >= 0.0 && loss < 1.0, label, "loss must lie in [0, 1)");
    require(squeeze.r >= 0.0, label, "squeeze parameter r must be non-negative");
    if (loss > 0.0) require(has_sensor(), label, "loss requires a sensor channel");
    if (sensor) {
        require(sensor->xi > 0.0, label, "xi_b must be positive");
        require(mirror_r.has_value(), label, "a sensor channel requires mirror r");
    }
    if (control.kind == ControlKind::FeedbackToM || control.kind == ControlKind::FeedforwardToI ||
        control.kind == ControlKind::SignalSubtraction)
        require(has_sensor(), label, "a control law requires the sensor channel");
    if (control.kind == ControlKind::FeedforwardToI || control.kind == ControlKind::SignalSubtraction)
        require(three_mirror(), label, "feedforward and signal subtraction require mirror i");
    if (control.mode == GainMode::Fixed || control.mode == GainMode::Off)
        require(control.kind == ControlKind::None || static_cast<bool>(control.gain) ||
                    control.mode == GainMode::Off,
                label, "fixed-gain control law requires a gain function");

    switch (id) {
    case ScenarioId::Free:
    case ScenarioId::SqlEnvelope:
    case ScenarioId::VariationalReadout:
        require(!has_sensor(), label, "single-beam scenario cannot carry a sensor channel");
        break;
    case ScenarioId::SqueezedInput:
        require(!has_sensor(), label, "single-beam scenario cannot carry a sensor channel");
        break;
    case ScenarioId::Locking:
    case ScenarioId::BackactionCancel:
        require(has_sensor(), label, "xi_b (sensor channel) is required");
        require(!three_mirror(), label, "two-mirror scenario cannot carry mirror i");
        require(control.kind == ControlKind::FeedbackToM || control.mode == GainMode::Off, label,
                "control law must feed back to mirror m");
        break;
    case ScenarioId::CavityLocking:
        require(has_sensor(), label, "xi_b (sensor channel) is required");
        require(three_mirror(), label, "cavity locking requires three mirrors");
        require(control.kind == ControlKind::FeedforwardToI || control.mode == GainMode::Off, label,
                "control law must feedforward to mirror i");
        require(detection_b.rule == AngleRule::EvadingCavity, label,
                "cavity locking requires the evading-cavity detection rule");
        break;
    case ScenarioId::SignalCorrection:
        require(has_sensor(), label, "xi_b (sensor channel) is required");
        require(three_mirror(), label, "signal correction uses the three-mirror geometry");
        require(control.kind == ControlKind::SignalSubtraction || control.mode == GainMode::Off,
                label, "control law must be a signal subtraction");
        break;
    }
}

} // namespace qlock
