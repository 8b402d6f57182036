#pragma once

#include <Eigen/Dense>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "qlock/scenario.hpp"

namespace qlock {

// Per-frequency linear model of a scenario. Unknowns are the mirror
// displacements; every field quadrature is an explicit linear function of the
// unknowns and the noise sources, so the readout reduces to a direct source
// term plus a weighted sum of unknowns.
struct LinearSystem {
    double omega = 0.0;
    std::vector<std::string> unknowns;   // mirror names, solve order
    Eigen::MatrixXcd dynamics;           // unknowns x unknowns
    Eigen::MatrixXcd forcing;            // unknowns x sources
    Eigen::RowVectorXcd readout_direct;  // 1 x sources
    Eigen::RowVectorXcd readout_weights; // 1 x unknowns
    Eigen::RowVectorXcd sensor_direct;   // 1 x sources (zero rows when no sensor)
    Eigen::RowVectorXcd sensor_weights;  // 1 x unknowns
};

Observable to_observable(const Eigen::RowVectorXcd& row);

class NetworkModel {
public:
    explicit NetworkModel(Scenario scenario);

    const Scenario& scenario() const { return scenario_; }
    const SourceSet& sources() const { return sources_; }
    int source_index(std::string_view id) const { return sources_.require(id); }
    int unknown_index(std::string_view mirror) const;
    std::size_t unknown_count() const { return unknowns_.size(); }

    // Encodes the dynamical relations at one frequency. Infinite-gain control
    // laws contribute their algebraic limit row; the scenario's gain mode must
    // be resolved (Optimized is the optimizer's job).
    LinearSystem assemble(double omega) const;
    LinearSystem assemble_with_gain(double omega, Complex gain) const;

    struct Solution {
        Eigen::MatrixXcd displacements;       // unknowns x sources
        Eigen::RowVectorXcd estimator;        // measurement estimator transfer amplitudes
        Eigen::RowVectorXcd sensor_estimator; // zero row when no sensor
    };
    Solution solve(const LinearSystem& system) const;

    Observable estimator(double omega) const;
    Observable estimator_with_gain(double omega, Complex gain) const;
    Observable sensor_estimator(double omega) const;

    double sigma(double omega) const;
    double sigma_with_gain(double omega, Complex gain) const;
    double sigma_of(const Eigen::RowVectorXcd& transfer, double omega) const;

private:
    struct Basis; // per-frequency quadrature vectors of the input beams

    Basis basis_at(double omega) const;
    LinearSystem assemble_impl(double omega, GainMode mode, Complex gain) const;

    Scenario scenario_;
    SourceSet sources_;
    std::vector<std::string> unknowns_;
    int ia0_ = -1, ia90_ = -1;       // channel a pair (squeeze basis when active)
    int ib0_ = -1, ib90_ = -1;       // channel b pair
    int iv0_ = -1, iv90_ = -1;       // sensor loss port vacuum
    int ifm_ = -1, ifr_ = -1, ifi_ = -1;
    bool squeeze_basis_ = false;
    double omega_sql_a_ = 0.0;
    double omega_sql_b_ = 0.0;
};

// One scenario's noise budget over a frequency grid. Entries are stored in
// the grid's unit mode: normalized grids yield spectra in units of
// 1/(2 xi_a^2) against Omega/Omega_sql_a, SI grids yield raw spectra against
// rad/s.
struct NoiseBudget {
    std::string label;
    ScenarioId id = ScenarioId::Free;
    UnitMode units = UnitMode::Normalized;
    std::vector<double> omega;
    std::vector<double> total;
    std::vector<std::string> source_ids;
    std::vector<std::vector<double>> per_source; // [source][point]
    std::vector<Complex> gain;                   // optimized control only
    std::map<std::string, double> metadata;

    bool has_gain() const { return !gain.empty(); }
};

struct GridSpec {
    double min = 0.1;
    double max = 10.0;
    int points = 400;
    bool log_spacing = true;
};

std::vector<AngularFrequency> make_grid(const GridSpec& spec, UnitMode mode);

struct SweepOptions {
    bool parallel = true;
};

// Frequency sweep producing the noise budget of one scenario. The parallel
// variant is the production kernel; the serial variant is the reference the
// tests compare against. Both evaluate the identical per-point computation,
// so their outputs match exactly.
NoiseBudget budget(const Scenario& scenario, std::span<const AngularFrequency> grid,
                   const SweepOptions& options = {});
NoiseBudget budget_serial(const Scenario& scenario, std::span<const AngularFrequency> grid);
NoiseBudget budget_parallel(const Scenario& scenario, std::span<const AngularFrequency> grid);

} // namespace qlock
