// Timing comparison of the serial reference sweep against the OpenMP kernel.
// Run from the build tree: ./bench/bench_sweep [points]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qlock/network.hpp"
#include "qlock/scenarios.hpp"

using namespace qlock;

namespace {

double time_once(const Scenario& scenario, const std::vector<AngularFrequency>& grid,
                 bool parallel, double* checksum) {
    const auto start = std::chrono::steady_clock::now();
    const NoiseBudget result =
        parallel ? budget_parallel(scenario, grid) : budget_serial(scenario, grid);
    const auto stop = std::chrono::steady_clock::now();
    *checksum = 0.0;
    for (double v : result.total) *checksum += v;
    return std::chrono::duration<double>(stop - start).count();
}

double best_of(int reps, const Scenario& scenario, const std::vector<AngularFrequency>& grid,
               bool parallel, double* checksum) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        double t = time_once(scenario, grid, parallel, checksum);
        if (t < best) best = t;
    }
    return best;
}

void bench(const char* name, const Scenario& scenario, int points) {
    const auto grid = make_grid(GridSpec{0.1, 10.0, points, true}, UnitMode::Normalized);
    double sum_serial = 0.0, sum_parallel = 0.0;
    const double t_serial = best_of(3, scenario, grid, false, &sum_serial);
    const double t_parallel = best_of(3, scenario, grid, true, &sum_parallel);
    const bool match = sum_serial == sum_parallel;
    std::printf("%-22s %8d pts   serial %9.4f s   parallel %9.4f s   speedup %5.2fx   %s\n",
                name, points, t_serial, t_parallel, t_serial / t_parallel,
                match ? "sums match" : "SUMS DIFFER");
}

} // namespace

int main(int argc, char** argv) {
    const int points = argc > 1 ? std::atoi(argv[1]) : 200000;

#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads = %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP disabled; both sweeps run serially\n");
#endif

    ScenarioParams free_params;
    bench("free", build_scenario(ScenarioId::Free, free_params), points);

    ScenarioParams lock_params;
    lock_params.xi_b_ratio = 0.2;
    lock_params.gain_mode = GainMode::Infinite;
    bench("locking infinite", build_scenario(ScenarioId::Locking, lock_params), points);

    ScenarioParams cavity_params;
    cavity_params.xi_b_ratio = 1.0;
    bench("cavity locking", build_scenario(ScenarioId::CavityLocking, cavity_params), points);

    ScenarioParams opt_params;
    opt_params.xi_b_ratio = 0.2;
    opt_params.gain_mode = GainMode::Optimized;
    bench("locking optimized", build_scenario(ScenarioId::Locking, opt_params),
          std::max(points / 20, 2));

    return 0;
}
