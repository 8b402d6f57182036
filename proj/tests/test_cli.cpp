#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "qlock/emit.hpp"
#include "qlock/run.hpp"
#include "qlock/version.hpp"

using namespace qlock;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(static_cast<bool>(in), "cannot open ", path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

} // namespace

TEST_CASE("minimal configuration parses with defaults") {
    const RunConfig config = parse_config("units = normalized\n"
                                          "grid = 0.1:10:50:log\n"
                                          "\n"
                                          "[scenario.main]\n"
                                          "id = free\n"
                                          "xi_a = 1\n");
    CHECK(config.units == UnitMode::Normalized);
    CHECK(config.grid.points == 50);
    CHECK(config.grid.log_spacing);
    REQUIRE(config.scenarios.size() == 1);
    CHECK(config.scenarios[0].id == ScenarioId::Free);
    CHECK(config.scenarios[0].params.xi_a == 1.0);
    CHECK(config.format == "csv");
}

TEST_CASE("configuration errors carry location and key information") {
    CHECK_THROWS_WITH_AS((void)parse_config("bogus_key = 1\n"), doctest::Contains("line 1"),
                         ConfigError);
    CHECK_THROWS_WITH_AS((void)parse_config("[scenario.x]\nid = free\nwhatever = 2\n"),
                         doctest::Contains("whatever"), ConfigError);
    CHECK_THROWS_WITH_AS((void)parse_config("[scenario.x]\nid = free\nxi_a = abc\n"),
                         doctest::Contains("xi_a"), ConfigError);
    CHECK_THROWS_WITH_AS((void)parse_config("[scenario.x]\nxi_a = 1\n"),
                         doctest::Contains("id"), ConfigError);
    CHECK_THROWS_AS((void)parse_config("[weird]\nid = free\n"), ConfigError);
    CHECK_THROWS_AS((void)parse_config("grid = 10:1:5\n"), ConfigError);
}

TEST_CASE("sensor scenarios demand the sensor coupling") {
    const RunConfig config = parse_config("[scenario.lock]\n"
                                          "id = cavity-locking\n");
    CHECK_THROWS_WITH_AS((void)run(config), doctest::Contains("xi_b"), ConfigError);
}

TEST_CASE("running without scenarios is an error") {
    RunConfig config;
    CHECK_THROWS_WITH_AS((void)run(config), doctest::Contains("no scenarios"), ConfigError);
}

TEST_CASE("physical cavity parameters set the coupling") {
    RunConfig config = parse_config("units = si\n"
                                    "grid = 20:2000:10:log\n"
                                    "[scenario.main]\n"
                                    "id = free\n"
                                    "lambda = 1.064e-6\n"
                                    "finesse_a = 600\n"
                                    "power_a = 15e3\n"
                                    "mass = 20\n");
    const RunOutput output = run(config);
    REQUIRE(output.budgets.size() == 1);
    const auto& meta = output.budgets[0].metadata;
    const double alpha =
        intracavity_amplitude(15e3, 1.064e-6, Constants::si());
    CHECK(meta.at("xi_a") ==
          doctest::Approx(optomech_coupling(1.064e-6, 600.0, alpha)).epsilon(1e-12));
    CHECK(meta.at("incident_power_a") ==
          doctest::Approx(incident_power_for(15e3, 600.0)).epsilon(1e-12));
}

TEST_CASE("loss sweep on the evading configuration") {
    RunConfig config;
    config.grid = GridSpec{0.1, 10.0, 25, true};
    for (double eps : {0.0, 0.01}) {
        ScenarioConfig scn = default_scenario_config("backaction-cancel");
        scn.label = eps == 0.0 ? "lossless" : "lossy";
        scn.params.label = scn.label;
        scn.params.loss = eps;
        config.scenarios.push_back(scn);
    }
    const RunOutput output = run(config);
    REQUIRE(output.budgets.size() == 2);
    for (double total : output.budgets[0].total)
        CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    for (std::size_t k = 0; k < output.budgets[1].total.size(); ++k)
        CHECK(output.budgets[1].total[k] > output.budgets[0].total[k]);
}

TEST_CASE("small csv table has one header and one row per grid point") {
    RunConfig config;
    config.grid = GridSpec{0.5, 2.0, 3, false};
    config.scenarios.push_back(default_scenario_config("free"));
    const RunOutput output = run(config);
    const std::string csv = emit_csv(output.budgets);

    std::istringstream lines(csv);
    std::string line;
    std::vector<std::string> rows;
    while (std::getline(lines, line)) rows.push_back(line);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == "omega,free,free.a0,free.a90,free.Fm");
}

TEST_CASE("identical configurations emit byte-identical csv") {
    RunConfig config = fig3_preset();
    config.grid.points = 24;
    const std::string first = emit_csv(run(config).budgets);
    const std::string second = emit_csv(run(config).budgets);
    CHECK(first == second);
}

TEST_CASE("emitted json round-trips the totals exactly") {
    RunConfig config = fig3_preset();
    config.grid.points = 12;
    const RunOutput output = run(config);
    const std::string text = emit_json(output.budgets);
    const auto parsed = parse_budgets_json(text);
    REQUIRE(parsed.size() == output.budgets.size());
    for (std::size_t b = 0; b < parsed.size(); ++b) {
        REQUIRE(parsed[b].total.size() == output.budgets[b].total.size());
        CHECK(parsed[b].label == output.budgets[b].label);
        for (std::size_t k = 0; k < parsed[b].total.size(); ++k) {
            const double expected = output.budgets[b].total[k];
            CHECK(std::abs(parsed[b].total[k] - expected) <= 1e-12 * std::abs(expected));
        }
    }
    CHECK(text.find(kVersion) != std::string::npos);
}

TEST_CASE("figure preset matches the frozen table") {
    RunConfig config = fig3_preset();
    config.grid.points = 5;
    const std::string csv = emit_csv(run(config).budgets);
    const std::string golden = slurp(std::string(QLOCK_TEST_DATA_DIR) + "/fig3_golden.csv");
    CHECK(csv == golden);
}

TEST_CASE("command-line front end exit codes") {
    const std::string cli = QLOCK_CLI_PATH;
    auto exit_code = [&cli](const std::string& args) {
        const std::string cmd = cli + " " + args + " >/dev/null 2>&1";
        const int status = std::system(cmd.c_str());
        return WEXITSTATUS(status);
    };

    CHECK(exit_code("--scenario free --grid 0.1:10:5:log") == 0);
    CHECK(exit_code("--scenario nonsense") == 2);
    CHECK(exit_code("--no-such-flag") == 2);
    CHECK(exit_code("") == 2); // no scenarios
    CHECK(exit_code("--scenario free --angle fixed=0 --grid 0.1:10:3:log") == 3);
    CHECK(exit_code("--scenario free --out /nonexistent-dir/x.csv") == 4);
}

TEST_CASE("gain and angle specs parse and reject junk") {
    ScenarioParams p;
    apply_gain_spec(p, "fixed=1.5,-2");
    CHECK(p.gain_mode == GainMode::Fixed);
    CHECK(*p.fixed_gain == Complex{1.5, -2.0});
    apply_gain_spec(p, "optimized");
    CHECK(p.gain_mode == GainMode::Optimized);
    CHECK_THROWS_AS(apply_gain_spec(p, "sometimes"), ConfigError);

    apply_angle_spec(p, ScenarioId::Locking, "evading");
    CHECK(p.detection_b->rule == AngleRule::EvadingSingle);
    apply_angle_spec(p, ScenarioId::Free, "optimal");
    CHECK(p.detection_a->rule == AngleRule::InterferometerOptimal);
    CHECK_THROWS_AS(apply_angle_spec(p, ScenarioId::Free, "evading"), ConfigError);
    CHECK_THROWS_AS(apply_angle_spec(p, ScenarioId::Free, "diagonal"), ConfigError);
}

TEST_CASE("constant force noise tables feed the classical term") {
    ScenarioConfig scn = default_scenario_config("free");
    scn.params.force_noise_m = parse_force_noise("constant:0.25");
    RunConfig config;
    config.grid = GridSpec{1.0, 2.0, 3, false};
    config.scenarios.push_back(scn);
    const RunOutput output = run(config);
    // Classical term 0.25/omega^4 in normalized units of 1/(2 xi_a^2) = 1.
    const double expected = 1.0 + 0.25;
    CHECK(output.budgets[0].total[0] == doctest::Approx(expected).epsilon(1e-12));
}
