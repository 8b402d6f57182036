#pragma once

#include "qlock/config.hpp"

namespace qlock {

struct RunOutput {
    std::vector<NoiseBudget> budgets;
    std::string verify_report; // empty unless verification ran
};

// Executes every scenario of the configuration over the shared grid.
// Deterministic for a given configuration. With verify set, optimized-gain
// scenarios are re-checked against the grid-search oracle on a subsample of
// the grid and the comparison is reported.
RunOutput run(const RunConfig& config);

} // namespace qlock
