#pragma once

#include <string>
#include <vector>

#include "qlock/network.hpp"
#include "qlock/scenarios.hpp"

namespace qlock {

// One `[scenario.<label>]` section of a run configuration.
struct ScenarioConfig {
    std::string label;
    ScenarioId id = ScenarioId::Free;
    ScenarioParams params;
};

struct RunConfig {
    UnitMode units = UnitMode::Normalized;
    GridSpec grid;
    std::string format = "csv"; // csv | json
    std::string out_path;       // empty -> stdout
    bool verify = false;
    std::vector<ScenarioConfig> scenarios;
};

// Parses the structured key-value run configuration. Unknown keys, type
// mismatches and inconsistent scenarios are reported with the line number and
// scenario label.
RunConfig parse_config(const std::string& text);

// Individual value parsers, shared with the command-line front end.
GridSpec parse_grid_spec(const std::string& text);
UnitMode parse_units(const std::string& text);

// Applies one of `infinite | optimized | off | fixed=<re>[,<im>]`.
void apply_gain_spec(ScenarioParams& params, const std::string& text);

// Applies one of `phase | fixed=<rad> | evading | evading-cavity | optimal`.
// The frequency-dependent sensor rules target channel b; `optimal` targets
// channel a; `phase`/`fixed` target the channel the scenario reads out.
void apply_angle_spec(ScenarioParams& params, ScenarioId id, const std::string& text);

// `constant:<value>` or the path of a two-column (omega, psd) table.
SpectrumFn parse_force_noise(const std::string& text);

// The built-in preset reproducing the curve family of the sensitivity figure:
// free (a), envelope (b), locking at infinite and optimized gain with
// xi_b = xi_a/5 (c, d), back-action cancellation with xi_b = xi_a at infinite
// and optimized gain (e, e_opt), and the 1% lossy sensor variant (f).
RunConfig fig3_preset();

// Builds a scenario section from CLI defaults for ids given without a config
// file; sensor scenarios default to xi_b = xi_a.
ScenarioConfig default_scenario_config(const std::string& id_name);

} // namespace qlock
