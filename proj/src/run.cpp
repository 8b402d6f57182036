#include "qlock/run.hpp"

#include <cmath>
#include <sstream>

#include "qlock/optimizer.hpp"

namespace qlock {

namespace {

std::string verify_scenario(const Scenario& scenario, const NoiseBudget& result,
                            std::span<const AngularFrequency> grid) {
    const NetworkModel model(scenario);
    const std::size_t stride = std::max<std::size_t>(1, grid.size() / 24);
    double worst = 0.0;
    std::size_t checked = 0;

    const double omega_scale =
        grid.front().mode() == UnitMode::Normalized ? scenario.omega_sql_a() : 1.0;
    const double sigma_scale = grid.front().mode() == UnitMode::Normalized
                                   ? 2.0 * scenario.interferometer.xi * scenario.interferometer.xi
                                   : 1.0;

    for (std::size_t k = 0; k < grid.size(); k += stride) {
        const double omega = grid[k].value() * omega_scale;
        const Complex g = result.gain[k];
        const double radius = std::max(10.0 * std::abs(g), 1.0);
        const GainSolution coarse =
            grid_search_oracle(model, omega, ComplexRect::centered(g, radius), 61);
        const GainSolution oracle = refine_search(model, omega, coarse.gain, radius / 30.0);
        const double eigen_sigma = result.total[k] / sigma_scale;
        const double rel = std::abs(eigen_sigma - oracle.sigma) / oracle.sigma;
        worst = std::max(worst, rel);
        ++checked;
    }

    std::ostringstream os;
    os << "verify " << result.label << ": " << checked
       << " grid points, max |eigen - oracle|/oracle = " << worst << " ("
       << (worst < 1e-3 ? "ok" : "MISMATCH") << ")";
    return os.str();
}

} // namespace

RunOutput run(const RunConfig& config) {
    if (config.scenarios.empty()) throw ConfigError("no scenarios configured");

    const auto grid = make_grid(config.grid, config.units);

    RunOutput output;
    std::ostringstream verify_report;
    for (const auto& entry : config.scenarios) {
        ScenarioParams params = entry.params;
        params.units = config.units;
        params.label = entry.label;
        Scenario scenario = build_scenario(entry.id, params);

        NoiseBudget result = budget(scenario, grid);
        if (config.verify && result.has_gain()) {
            if (!verify_report.str().empty()) verify_report << '\n';
            verify_report << verify_scenario(scenario, result, grid);
        }
        output.budgets.push_back(std::move(result));
    }
    output.verify_report = verify_report.str();
    return output;
}

} // namespace qlock
