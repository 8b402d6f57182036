#include "qlock/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace qlock {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& text, int line, const std::string& key) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                          "' expects a number, got '" + text + "'");
    }
}

bool parse_bool(const std::string& text, int line, const std::string& key) {
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                      "' expects a boolean, got '" + text + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) parts.push_back(item);
    return parts;
}

} // namespace

GridSpec parse_grid_spec(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.size() < 3 || parts.size() > 4)
        throw ConfigError("grid spec must be min:max:points[:log|:lin], got '" + text + "'");
    GridSpec spec;
    spec.min = parse_double(parts[0], 0, "grid");
    spec.max = parse_double(parts[1], 0, "grid");
    spec.points = static_cast<int>(parse_double(parts[2], 0, "grid"));
    spec.log_spacing = true;
    if (parts.size() == 4) {
        if (parts[3] == "log") spec.log_spacing = true;
        else if (parts[3] == "lin") spec.log_spacing = false;
        else throw ConfigError("grid spacing must be 'log' or 'lin', got '" + parts[3] + "'");
    }
    if (!(spec.min > 0.0) || !(spec.max > spec.min) || spec.points < 2)
        throw ConfigError("grid spec requires 0 < min < max and points >= 2, got '" + text + "'");
    return spec;
}

UnitMode parse_units(const std::string& text) {
    if (text == "si") return UnitMode::SI;
    if (text == "normalized") return UnitMode::Normalized;
    throw ConfigError("units must be 'si' or 'normalized', got '" + text + "'");
}

void apply_gain_spec(ScenarioParams& params, const std::string& text) {
    if (text == "infinite") {
        params.gain_mode = GainMode::Infinite;
        return;
    }
    if (text == "optimized") {
        params.gain_mode = GainMode::Optimized;
        return;
    }
    if (text == "off") {
        params.gain_mode = GainMode::Off;
        return;
    }
    if (text.rfind("fixed=", 0) == 0) {
        const auto parts = split(text.substr(6), ',');
        if (parts.empty() || parts.size() > 2)
            throw ConfigError("fixed gain expects fixed=<re>[,<im>], got '" + text + "'");
        const double re = parse_double(parts[0], 0, "gain");
        const double im = parts.size() == 2 ? parse_double(parts[1], 0, "gain") : 0.0;
        params.gain_mode = GainMode::Fixed;
        params.fixed_gain = Complex{re, im};
        params.feedforward_gain = re;
        params.correction_gain = re;
        return;
    }
    throw ConfigError("gain must be infinite|optimized|off|fixed=<re>[,<im>], got '" + text + "'");
}

void apply_angle_spec(ScenarioParams& params, ScenarioId id, const std::string& text) {
    const bool sensor_scenario = id == ScenarioId::Locking || id == ScenarioId::BackactionCancel ||
                                 id == ScenarioId::CavityLocking ||
                                 id == ScenarioId::SignalCorrection;
    DetectionPolicy policy;
    bool to_sensor = sensor_scenario;
    if (text == "phase") {
        policy = DetectionPolicy::phase();
    } else if (text.rfind("fixed=", 0) == 0) {
        policy = DetectionPolicy::fixed(parse_double(text.substr(6), 0, "angle"));
    } else if (text == "evading") {
        policy = DetectionPolicy{AngleRule::EvadingSingle, 0.0};
        to_sensor = true;
        if (!sensor_scenario)
            throw ConfigError("angle 'evading' applies to sensor scenarios only");
    } else if (text == "evading-cavity") {
        policy = DetectionPolicy{AngleRule::EvadingCavity, 0.0};
        to_sensor = true;
        if (!sensor_scenario)
            throw ConfigError("angle 'evading-cavity' applies to sensor scenarios only");
    } else if (text == "optimal") {
        policy = DetectionPolicy{AngleRule::InterferometerOptimal, 0.0};
        to_sensor = false;
    } else {
        throw ConfigError(
            "angle must be phase|fixed=<rad>|evading|evading-cavity|optimal, got '" + text + "'");
    }
    if (to_sensor)
        params.detection_b = policy;
    else
        params.detection_a = policy;
}

SpectrumFn parse_force_noise(const std::string& text) {
    if (text.rfind("constant:", 0) == 0) {
        const double level = parse_double(text.substr(9), 0, "force_noise");
        if (level < 0.0) throw ConfigError("force noise level must be non-negative");
        return [level](double) { return level; };
    }

    std::ifstream in(text);
    if (!in) throw IoError("cannot open force noise table '" + text + "'");
    std::vector<std::pair<double, double>> table;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string entry = trim(line);
        if (entry.empty() || entry[0] == '#') continue;
        std::replace(entry.begin(), entry.end(), ',', ' ');
        std::istringstream row(entry);
        double omega = 0.0, psd = 0.0;
        if (!(row >> omega >> psd))
            throw ConfigError("force noise table '" + text + "' line " +
                              std::to_string(line_no) + ": expected 'omega psd'");
        table.emplace_back(omega, psd);
    }
    if (table.empty()) throw ConfigError("force noise table '" + text + "' is empty");
    std::sort(table.begin(), table.end());

    // Piecewise-linear interpolation, clamped at the table edges.
    return [table](double omega) {
        if (omega <= table.front().first) return table.front().second;
        if (omega >= table.back().first) return table.back().second;
        auto hi = std::upper_bound(table.begin(), table.end(),
                                   std::make_pair(omega, 0.0));
        auto lo = hi - 1;
        const double t = (omega - lo->first) / (hi->first - lo->first);
        return lo->second + t * (hi->second - lo->second);
    };
}

namespace {

void apply_scenario_key(ScenarioConfig& scn, const std::string& key, const std::string& value,
                        int line, bool& id_seen) {
    auto& p = scn.params;
    if (key == "id") {
        scn.id = scenario_id_from(value);
        id_seen = true;
    } else if (key == "xi_a") {
        p.xi_a = parse_double(value, line, key);
    } else if (key == "xi_b") {
        p.xi_b = parse_double(value, line, key);
    } else if (key == "xi_b_ratio") {
        p.xi_b_ratio = parse_double(value, line, key);
    } else if (key == "mass") {
        p.mass = parse_double(value, line, key);
    } else if (key == "mass_r") {
        p.mass_r = parse_double(value, line, key);
    } else if (key == "mass_i") {
        p.mass_i = parse_double(value, line, key);
    } else if (key == "lambda") {
        p.lambda = parse_double(value, line, key);
    } else if (key == "finesse_a") {
        p.finesse_a = parse_double(value, line, key);
    } else if (key == "power_a") {
        p.power_a = parse_double(value, line, key);
    } else if (key == "finesse_b") {
        p.finesse_b = parse_double(value, line, key);
    } else if (key == "power_b") {
        p.power_b = parse_double(value, line, key);
    } else if (key == "gain") {
        apply_gain_spec(p, value);
    } else if (key == "angle") {
        apply_angle_spec(p, scn.id, value);
    } else if (key == "loss") {
        p.loss = parse_double(value, line, key);
    } else if (key == "squeeze_r") {
        p.squeeze_r = parse_double(value, line, key);
    } else if (key == "squeeze_angle") {
        if (value == "tracking") {
            p.squeeze_tracking = true;
        } else if (value.rfind("fixed=", 0) == 0) {
            p.squeeze_tracking = false;
            p.squeeze_fixed_angle = parse_double(value.substr(6), line, key);
        } else {
            throw ConfigError("line " + std::to_string(line) +
                              ": squeeze_angle must be tracking|fixed=<rad>");
        }
    } else if (key == "correction_gain") {
        p.correction_gain = parse_double(value, line, key);
    } else if (key == "feedforward_gain") {
        p.feedforward_gain = parse_double(value, line, key);
    } else if (key == "force_noise_m") {
        p.force_noise_m = parse_force_noise(value);
    } else if (key == "force_noise_r") {
        p.force_noise_r = parse_force_noise(value);
    } else if (key == "force_noise_i") {
        p.force_noise_i = parse_force_noise(value);
    } else {
        throw ConfigError("line " + std::to_string(line) + ": unknown key '" + key +
                          "' in scenario '" + scn.label + "'");
    }
}

} // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig config;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    ScenarioConfig* current = nullptr;
    bool current_id_seen = false;

    auto finish_section = [&]() {
        if (current && !current_id_seen)
            throw ConfigError("scenario '" + current->label + "' is missing the 'id' key");
    };

    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(line_no) + ": unterminated section");
            const std::string section = trim(line.substr(1, line.size() - 2));
            if (section.rfind("scenario.", 0) != 0)
                throw ConfigError("line " + std::to_string(line_no) + ": unknown section '[" +
                                  section + "]' (expected [scenario.<label>])");
            finish_section();
            const std::string label = section.substr(9);
            if (label.empty())
                throw ConfigError("line " + std::to_string(line_no) + ": empty scenario label");
            config.scenarios.push_back({});
            current = &config.scenarios.back();
            current->label = label;
            current->params.label = label;
            current_id_seen = false;
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");

        if (current) {
            apply_scenario_key(*current, key, value, line_no, current_id_seen);
            continue;
        }

        if (key == "units") config.units = parse_units(value);
        else if (key == "grid") config.grid = parse_grid_spec(value);
        else if (key == "format") {
            if (value != "csv" && value != "json")
                throw ConfigError("line " + std::to_string(line_no) +
                                  ": format must be csv or json");
            config.format = value;
        } else if (key == "out") config.out_path = value;
        else if (key == "verify") config.verify = parse_bool(value, line_no, key);
        else
            throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    finish_section();

    for (auto& scn : config.scenarios) scn.params.units = config.units;
    return config;
}

ScenarioConfig default_scenario_config(const std::string& id_name) {
    ScenarioConfig scn;
    scn.id = scenario_id_from(id_name);
    scn.label = id_name;
    scn.params.label = id_name;
    const bool sensor_scenario =
        scn.id == ScenarioId::Locking || scn.id == ScenarioId::BackactionCancel ||
        scn.id == ScenarioId::CavityLocking || scn.id == ScenarioId::SignalCorrection;
    if (sensor_scenario) scn.params.xi_b_ratio = 1.0;
    return scn;
}

RunConfig fig3_preset() {
    RunConfig config;
    config.units = UnitMode::Normalized;
    config.grid = GridSpec{0.1, 10.0, 400, true};

    auto add = [&config](const std::string& label, ScenarioId id,
                         const std::function<void(ScenarioParams&)>& tweak) {
        ScenarioConfig scn;
        scn.label = label;
        scn.id = id;
        scn.params.label = label;
        scn.params.units = UnitMode::Normalized;
        tweak(scn.params);
        config.scenarios.push_back(std::move(scn));
    };

    add("a_free", ScenarioId::Free, [](ScenarioParams&) {});
    add("b_sql", ScenarioId::SqlEnvelope, [](ScenarioParams&) {});
    add("c_lock_inf", ScenarioId::Locking, [](ScenarioParams& p) {
        p.xi_b_ratio = 0.2;
        p.gain_mode = GainMode::Infinite;
    });
    add("d_lock_opt", ScenarioId::Locking, [](ScenarioParams& p) {
        p.xi_b_ratio = 0.2;
        p.gain_mode = GainMode::Optimized;
    });
    add("e_cancel_inf", ScenarioId::BackactionCancel, [](ScenarioParams& p) {
        p.xi_b_ratio = 1.0;
        p.gain_mode = GainMode::Infinite;
    });
    add("e_cancel_opt", ScenarioId::BackactionCancel, [](ScenarioParams& p) {
        p.xi_b_ratio = 1.0;
        p.gain_mode = GainMode::Optimized;
    });
    add("f_cancel_lossy", ScenarioId::BackactionCancel, [](ScenarioParams& p) {
        p.xi_b_ratio = 1.0;
        p.gain_mode = GainMode::Infinite;
        p.loss = 0.01;
    });
    return config;
}

} // namespace qlock
