#pragma once

#include <string>
#include <vector>

#include "qlock/network.hpp"

namespace qlock {

// Column layout: omega, one total per scenario, then per-source columns named
// <label>.<source>, then <label>.gain_re/<label>.gain_im for optimized
// scenarios. Numbers carry 12 significant digits; identical inputs produce
// byte-identical output.
std::string emit_csv(const std::vector<NoiseBudget>& budgets);

// JSON mirror of the CSV data plus per-scenario metadata, the unit mode and
// the build version string.
std::string emit_json(const std::vector<NoiseBudget>& budgets);

// Reads back the totals of an emitted JSON document (round-trip checks).
std::vector<NoiseBudget> parse_budgets_json(const std::string& text);

void write_text_file(const std::string& path, const std::string& content);

} // namespace qlock
