#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qlock/emit.hpp"
#include "qlock/run.hpp"
#include "qlock/version.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw qlock::IoError("cannot open config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Frequency-domain noise budgets for quantum-locked interferometers"};
    app.set_version_flag("--version", std::string(qlock::kVersion));

    std::string config_path;
    std::vector<std::string> scenario_ids;
    std::string grid_spec;
    std::string units_spec;
    std::string gain_spec;
    std::string angle_spec;
    double loss = -1.0;
    std::string format_spec;
    std::string out_path;
    bool verify = false;

    app.add_option("--config", config_path, "run configuration file");
    app.add_option("--scenario", scenario_ids,
                   "scenario id (repeatable, overrides the config; 'fig3' expands to the "
                   "sensitivity-figure preset)");
    app.add_option("--grid", grid_spec, "frequency grid min:max:points[:log|:lin]");
    app.add_option("--units", units_spec, "unit mode: si | normalized");
    app.add_option("--gain", gain_spec, "loop gain: fixed=<re>[,<im>] | infinite | optimized");
    app.add_option("--angle", angle_spec,
                   "detection angle: phase | fixed=<rad> | evading | evading-cavity | optimal");
    app.add_option("--loss", loss, "sensor output loss fraction in [0,1)");
    app.add_option("--format", format_spec, "output format: csv | json");
    app.add_option("--out", out_path, "output path (default stdout)");
    app.add_flag("--verify", verify, "run the grid-search oracle alongside the eigen optimizer");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        qlock::RunConfig config;
        bool preset = false;
        for (const auto& id : scenario_ids)
            if (id == "fig3") preset = true;

        if (preset) {
            if (scenario_ids.size() > 1)
                throw qlock::ConfigError("'fig3' cannot be combined with other scenarios");
            config = qlock::fig3_preset();
        } else if (!config_path.empty()) {
            config = qlock::parse_config(slurp(config_path));
            if (!scenario_ids.empty()) {
                // Keep matching config sections, create defaults for the rest.
                std::vector<qlock::ScenarioConfig> picked;
                for (const auto& id : scenario_ids) {
                    bool found = false;
                    for (const auto& scn : config.scenarios) {
                        if (scn.label == id) {
                            picked.push_back(scn);
                            found = true;
                            break;
                        }
                    }
                    if (!found) picked.push_back(qlock::default_scenario_config(id));
                }
                config.scenarios = std::move(picked);
            }
        } else {
            for (const auto& id : scenario_ids)
                config.scenarios.push_back(qlock::default_scenario_config(id));
        }

        if (!units_spec.empty()) config.units = qlock::parse_units(units_spec);
        if (!grid_spec.empty()) config.grid = qlock::parse_grid_spec(grid_spec);
        if (!format_spec.empty()) {
            if (format_spec != "csv" && format_spec != "json")
                throw qlock::ConfigError("format must be csv or json");
            config.format = format_spec;
        }
        if (!out_path.empty()) config.out_path = out_path;
        if (verify) config.verify = true;

        for (auto& scn : config.scenarios) {
            scn.params.units = config.units;
            if (!gain_spec.empty()) qlock::apply_gain_spec(scn.params, gain_spec);
            if (!angle_spec.empty()) qlock::apply_angle_spec(scn.params, scn.id, angle_spec);
            if (loss >= 0.0) scn.params.loss = loss;
        }

        const qlock::RunOutput output = qlock::run(config);
        const std::string text = config.format == "json" ? qlock::emit_json(output.budgets)
                                                         : qlock::emit_csv(output.budgets);
        if (config.out_path.empty())
            std::cout << text;
        else
            qlock::write_text_file(config.out_path, text);

        if (!output.verify_report.empty()) std::cerr << output.verify_report << "\n";
        return 0;
    } catch (const qlock::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const qlock::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    } catch (const qlock::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 4;
    }
}
