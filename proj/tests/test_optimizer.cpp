#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "qlock/optimizer.hpp"
#include "qlock/scenarios.hpp"

using namespace qlock;

namespace {

Scenario optimized_locking(double ratio) {
    ScenarioParams p;
    p.xi_b_ratio = ratio;
    p.gain_mode = GainMode::Optimized;
    return build_scenario(ScenarioId::Locking, p);
}

Scenario infinite_locking(double ratio) {
    ScenarioParams p;
    p.xi_b_ratio = ratio;
    p.gain_mode = GainMode::Infinite;
    return build_scenario(ScenarioId::Locking, p);
}

} // namespace

TEST_CASE("gain-independent quotient reports zero gain and the floor value") {
    // All transfer amplitudes proportional to the denominator: nothing to
    // trade, the budget is the measurement floor at every gain.
    const double floor = 0.5; // 1/(4 xi_a^2) in normalized parameters
    RationalQuotient q;
    q.denominator_root << Complex{0.4, -1.1}, Complex{2.0, 0.3};
    const Complex c{std::sqrt(floor), 0.0};
    const Eigen::Vector2cd u = c * q.denominator_root;
    q.numerator = u.conjugate() * u.transpose();

    const QuotientMinimum minimum = minimize_rational_quotient(q);
    CHECK(minimum.constant);
    CHECK(minimum.gain == Complex{0.0, 0.0});
    CHECK(minimum.value == doctest::Approx(floor).epsilon(1e-12));
}

TEST_CASE("degenerate but gain-dependent quotient raises a numeric error") {
    RationalQuotient q;
    q.denominator_root << Complex{1.0, 0.0}, Complex{0.0, 1.0};
    const Eigen::Vector2cd u(Complex{1.0, 0.0}, Complex{5.0, 0.0}); // not parallel to w
    q.numerator = u.conjugate() * u.transpose();
    CHECK_THROWS_AS((void)minimize_rational_quotient(q), NumericError);
}

TEST_CASE("closed-form optimum agrees with the sampling oracle") {
    const NetworkModel model(optimized_locking(0.2));
    for (double omega : {0.1, 0.32, 1.0, 3.2, 10.0}) {
        const GainSolution eigen_sol = optimize_gain(model, omega);
        const double radius = std::max(10.0 * std::abs(eigen_sol.gain), 1.0);
        const GainSolution oracle = grid_search_oracle(
            model, omega, ComplexRect::centered(Complex{0.0, 0.0}, radius), 201);
        CHECK(std::abs(eigen_sol.sigma - oracle.sigma) <= 1e-3 * oracle.sigma);
        CHECK(eigen_sol.method == GainSolution::Method::Eigen);
    }
}

TEST_CASE("optimum never loses to the open loop or the infinite-gain lock") {
    const NetworkModel model(optimized_locking(0.2));
    const Scenario inf = infinite_locking(0.2);
    const NetworkModel inf_model(inf);

    const auto grid = make_grid(GridSpec{0.1, 10.0, 400, true}, UnitMode::Normalized);
    double previous = -1.0;
    for (const auto& point : grid) {
        const double omega = point.value();
        const GainSolution sol = optimize_gain(model, omega);
        const double open_loop = model.sigma_with_gain(omega, Complex{0.0, 0.0});
        const double locked = inf_model.sigma(omega);
        CHECK(sol.sigma <= open_loop + 1e-9);
        CHECK(sol.sigma <= locked + 1e-9);

        // The optimal budget varies slowly along the default grid.
        if (previous > 0.0) CHECK(std::abs(sol.sigma / previous - 1.0) < 0.05);
        previous = sol.sigma;
    }
}

TEST_CASE("optimized lock approaches the open-loop floor at high frequency") {
    const NetworkModel model(optimized_locking(0.2));
    const GainSolution sol = optimize_gain(model, 10.0);
    const double sigma_normalized = sol.sigma * 2.0 * 0.5; // 2 xi_a^2 = 1
    CHECK(std::abs(sigma_normalized - 0.50005) / 0.50005 < 0.005);
    CHECK(std::abs(sol.gain) < 0.1);
}

TEST_CASE("oracle with two samples per axis returns the better corner") {
    const NetworkModel model(optimized_locking(0.2));
    const double omega = 0.5;
    const ComplexRect region{0.0, 3.0, 0.0, 2.0};
    const GainSolution best = grid_search_oracle(model, omega, region, 2);
    double best_manual = std::numeric_limits<double>::infinity();
    for (double re : {0.0, 3.0})
        for (double im : {0.0, 2.0})
            best_manual = std::min(best_manual, model.sigma_with_gain(omega, Complex{re, im}));
    CHECK(best.sigma == doctest::Approx(best_manual).epsilon(1e-15));
    CHECK(best.on_boundary);
}

TEST_CASE("oracle flags a region that excludes the optimum") {
    const NetworkModel model(optimized_locking(0.2));
    const double omega = 0.2;
    const GainSolution eigen_sol = optimize_gain(model, omega);

    // Shift the region well away from the optimal gain.
    const Complex offset = eigen_sol.gain + Complex{50.0 * (1.0 + std::abs(eigen_sol.gain)), 0.0};
    const GainSolution clipped =
        grid_search_oracle(model, omega, ComplexRect::centered(offset, 1.0), 21);
    CHECK(clipped.on_boundary);
    CHECK(clipped.sigma >= eigen_sol.sigma);

    // A region containing 0 and the optimum agrees within its resolution.
    const double radius = 2.0 * (1.0 + std::abs(eigen_sol.gain));
    const GainSolution covering =
        grid_search_oracle(model, omega, ComplexRect::centered(Complex{0, 0}, radius), 101);
    CHECK(!covering.on_boundary);
    CHECK(std::abs(covering.sigma - eigen_sol.sigma) <= 2e-3 * eigen_sol.sigma);
}

TEST_CASE("pattern refinement polishes a coarse oracle estimate") {
    const NetworkModel model(optimized_locking(0.2));
    const double omega = 0.7;
    const GainSolution eigen_sol = optimize_gain(model, omega);
    const double radius = std::max(10.0 * std::abs(eigen_sol.gain), 1.0);
    const GainSolution coarse = grid_search_oracle(
        model, omega, ComplexRect::centered(Complex{0.0, 0.0}, radius), 41);
    const GainSolution refined = refine_search(model, omega, coarse.gain, radius / 20.0);
    CHECK(refined.sigma <= coarse.sigma + 1e-15);
    CHECK(std::abs(refined.sigma - eigen_sol.sigma) <= 1e-6 * eigen_sol.sigma);
    CHECK(refined.method == GainSolution::Method::Refine);
}

TEST_CASE("scenarios without a loop reject gain optimization") {
    const NetworkModel model(build_scenario(ScenarioId::Free, ScenarioParams{}));
    CHECK_THROWS_AS((void)optimize_gain(model, 1.0), ConfigError);
}
