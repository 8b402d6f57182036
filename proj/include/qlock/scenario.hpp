#pragma once

#include <map>
#include <optional>
#include <string>

#include "qlock/elements.hpp"

namespace qlock {

enum class ScenarioId {
    Free,
    SqlEnvelope,
    SqueezedInput,
    VariationalReadout,
    Locking,
    BackactionCancel,
    CavityLocking,
    SignalCorrection,
};

std::string_view scenario_id_name(ScenarioId id);
ScenarioId scenario_id_from(std::string_view name); // ConfigError on unknown id

// Squeezing of the interferometer beam. Tracking mode rotates the squeezed
// quadrature with frequency so that it stays aligned with the estimator's
// input-noise quadrature; fixed mode squeezes one angle everywhere.
struct SqueezePolicy {
    double r = 0.0;
    bool tracking = true;
    double fixed_angle = 0.0;
};

// Full description of one measurement configuration. Immutable once built and
// validated; evaluation at different frequencies may proceed concurrently.
struct Scenario {
    ScenarioId id = ScenarioId::Free;
    std::string label;
    UnitMode units = UnitMode::Normalized;
    Constants constants = Constants::normalized();

    FieldChannel interferometer;          // beam a
    std::optional<FieldChannel> sensor;   // beam b
    MechanicalMode mirror_m;
    std::optional<MechanicalMode> mirror_r;
    std::optional<MechanicalMode> mirror_i;

    DetectionPolicy detection_a = DetectionPolicy::phase();
    DetectionPolicy detection_b = DetectionPolicy::phase();
    ControlLaw control;
    double loss = 0.0;      // sensor output port loss fraction
    SqueezePolicy squeeze;  // beam a only

    std::map<std::string, double> metadata; // reported in emitted files

    bool has_sensor() const { return sensor.has_value(); }
    bool three_mirror() const { return mirror_i.has_value(); }

    double omega_sql_a() const;
    double omega_sql_b() const; // ConfigError when no sensor

    // Id-specific consistency checks; throws ConfigError with the offending
    // field named.
    void validate() const;
};

} // namespace qlock
