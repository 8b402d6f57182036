#include <cmath>
#include <exception>
#include <sstream>

#include "qlock/network.hpp"
#include "qlock/optimizer.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qlock {

std::vector<AngularFrequency> make_grid(const GridSpec& spec, UnitMode mode) {
    if (!(spec.min > 0.0)) throw ConfigError("grid minimum must be positive");
    if (!(spec.max > spec.min)) throw ConfigError("grid maximum must exceed the minimum");
    if (spec.points < 2) throw ConfigError("grid needs at least 2 points");

    std::vector<AngularFrequency> grid;
    grid.reserve(static_cast<std::size_t>(spec.points));
    const int n = spec.points;
    for (int k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) / (n - 1);
        const double value = spec.log_spacing
                                 ? std::exp(std::log(spec.min) * (1.0 - t) + std::log(spec.max) * t)
                                 : spec.min + (spec.max - spec.min) * t;
        grid.emplace_back(value, mode);
    }
    return grid;
}

namespace {

struct SweepPlan {
    UnitMode io_units = UnitMode::Normalized;
    double omega_scale = 1.0;  // grid value -> raw angular frequency
    double sigma_scale = 1.0;  // raw spectrum -> emitted spectrum
};

SweepPlan plan_sweep(const Scenario& scenario, std::span<const AngularFrequency> grid) {
    if (grid.empty()) throw ConfigError("frequency grid is empty");
    const UnitMode io = grid.front().mode();
    for (const auto& point : grid)
        if (point.mode() != io)
            throw ConfigError("mixed unit modes within one frequency grid");
    for (std::size_t k = 1; k < grid.size(); ++k)
        if (!(grid[k].value() > grid[k - 1].value()))
            throw ConfigError("frequency grid must be strictly ascending");

    if (io == UnitMode::SI && scenario.units == UnitMode::Normalized)
        throw ConfigError("scenario '" + scenario.label +
                          "' is parameterized in normalized units and cannot produce an SI sweep");

    SweepPlan plan;
    plan.io_units = io;
    if (io == UnitMode::Normalized) {
        plan.omega_scale = scenario.omega_sql_a();
        plan.sigma_scale = 2.0 * scenario.interferometer.xi * scenario.interferometer.xi;
    }
    return plan;
}

struct PointKernel {
    const NetworkModel* model = nullptr;
    const Scenario* scenario = nullptr;
    SweepPlan plan;
    bool optimized = false;
    bool analytic_envelope = false;

    void eval(double grid_value, double* total, double* per_source, Complex* gain) const {
        const double omega = grid_value * plan.omega_scale;
        if (analytic_envelope) {
            const double sigma =
                scenario->constants.hbar / (scenario->mirror_m.mass * omega * omega);
            *total = sigma * plan.sigma_scale;
            per_source[0] = *total;
            return;
        }

        Eigen::RowVectorXcd transfer;
        if (optimized) {
            const GainSolution sol = optimize_gain(*model, omega);
            *gain = sol.gain;
            transfer = model->solve(model->assemble_with_gain(omega, sol.gain)).estimator;
        } else {
            transfer = model->solve(model->assemble(omega)).estimator;
        }

        const auto& sources = model->sources();
        double sum = 0.0;
        for (Eigen::Index s = 0; s < transfer.size(); ++s) {
            const double contribution = std::norm(transfer(s)) *
                                        sources[static_cast<std::size_t>(s)].at(omega) *
                                        plan.sigma_scale;
            per_source[s] = contribution;
            sum += contribution;
        }
        *total = sum;
    }
};

NoiseBudget run_sweep(const Scenario& scenario, std::span<const AngularFrequency> grid,
                      bool parallel) {
    const SweepPlan plan = plan_sweep(scenario, grid);

    PointKernel kernel;
    kernel.scenario = &scenario;
    kernel.plan = plan;
    kernel.analytic_envelope = scenario.id == ScenarioId::SqlEnvelope;
    kernel.optimized = scenario.control.kind != ControlKind::None &&
                       scenario.control.mode == GainMode::Optimized;

    NoiseBudget out;
    out.label = scenario.label;
    out.id = scenario.id;
    out.units = plan.io_units;
    out.metadata = scenario.metadata;
    out.metadata["xi_a"] = scenario.interferometer.xi;
    out.metadata["omega_sql_a"] = scenario.omega_sql_a();
    if (scenario.has_sensor()) {
        out.metadata["xi_b"] = scenario.sensor->xi;
        out.metadata["omega_sql_b"] = scenario.omega_sql_b();
    }

    NetworkModel model_storage(scenario);
    kernel.model = &model_storage;

    if (kernel.analytic_envelope)
        out.source_ids = {"envelope"};
    else
        for (const auto& source : model_storage.sources().all()) out.source_ids.push_back(source.id);

    const std::size_t npts = grid.size();
    const std::size_t nsrc = out.source_ids.size();
    out.omega.resize(npts);
    out.total.resize(npts);
    out.per_source.assign(nsrc, std::vector<double>(npts, 0.0));
    if (kernel.optimized) out.gain.assign(npts, Complex{0.0, 0.0});

    for (std::size_t k = 0; k < npts; ++k) out.omega[k] = grid[k].value();

    std::exception_ptr first_error;
    std::size_t first_error_index = npts;

    auto eval_point = [&](std::size_t k) {
        std::vector<double> contrib(nsrc, 0.0);
        Complex gain{0.0, 0.0};
        double total = 0.0;
        kernel.eval(grid[k].value(), &total, contrib.data(), &gain);
        out.total[k] = total;
        for (std::size_t s = 0; s < nsrc; ++s) out.per_source[s][k] = contrib[s];
        if (kernel.optimized) out.gain[k] = gain;
    };

#ifdef _OPENMP
    if (parallel) {
        const auto count = static_cast<std::int64_t>(npts);
#pragma omp parallel for schedule(static)
        for (std::int64_t k = 0; k < count; ++k) {
            try {
                eval_point(static_cast<std::size_t>(k));
            } catch (...) {
#pragma omp critical(qlock_sweep_error)
                {
                    if (static_cast<std::size_t>(k) < first_error_index) {
                        first_error_index = static_cast<std::size_t>(k);
                        first_error = std::current_exception();
                    }
                }
            }
        }
        if (first_error) std::rethrow_exception(first_error);
        return out;
    }
#else
    (void)parallel;
#endif

    for (std::size_t k = 0; k < npts; ++k) eval_point(k);
    (void)first_error;
    (void)first_error_index;
    return out;
}

} // namespace

NoiseBudget budget_serial(const Scenario& scenario, std::span<const AngularFrequency> grid) {
    return run_sweep(scenario, grid, false);
}

NoiseBudget budget_parallel(const Scenario& scenario, std::span<const AngularFrequency> grid) {
    return run_sweep(scenario, grid, true);
}

NoiseBudget budget(const Scenario& scenario, std::span<const AngularFrequency> grid,
                   const SweepOptions& options) {
    return run_sweep(scenario, grid, options.parallel);
}

} // namespace qlock
