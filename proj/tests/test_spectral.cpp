#include <doctest.h>

#include <cmath>
#include <random>

#include "qlock/spectral.hpp"

using namespace qlock;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("quadrature rotation endpoints") {
    const Complex c0{0.3, -1.1};
    const Complex c90{2.0, 0.7};
    CHECK(rotate_quadrature(c0, c90, 0.0) == c0);
    CHECK(std::abs(rotate_quadrature(c0, c90, kPi / 2.0) - c90) < 1e-15);

    // 45 degrees mixes both quadratures with weight sqrt(2)/2.
    const double w = std::sqrt(2.0) / 2.0;
    CHECK(std::abs(rotate_quadrature(Complex{1, 0}, Complex{0, 0}, kPi / 4.0) - Complex{w, 0}) <
          1e-15);
    CHECK(std::abs(rotate_quadrature(Complex{0, 0}, Complex{1, 0}, kPi / 4.0) - Complex{w, 0}) <
          1e-15);
}

TEST_CASE("rotation round trip returns the original pair") {
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> coeff(-3.0, 3.0);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    for (int trial = 0; trial < 200; ++trial) {
        const Complex c0{coeff(rng), coeff(rng)};
        const Complex c90{coeff(rng), coeff(rng)};
        const double theta = angle(rng);
        const auto [r0, r90] = rotate_pair(c0, c90, theta);
        const auto [b0, b90] = rotate_pair(r0, r90, -theta);
        CHECK(std::abs(b0 - c0) < 1e-12);
        CHECK(std::abs(b90 - c90) < 1e-12);
    }
}

TEST_CASE("spectrum of uncorrelated sources") {
    SourceSet sources;
    const int ia = sources.add(NoiseSource::vacuum("a0"));
    const int ib = sources.add(NoiseSource::vacuum("a90"));

    Observable single(sources.size());
    single[static_cast<std::size_t>(ia)] = 1.0;
    CHECK(spectrum_of(single, sources, 1.0) == doctest::Approx(1.0).epsilon(1e-15));

    Observable pythagorean(sources.size());
    pythagorean[static_cast<std::size_t>(ia)] = 3.0;
    pythagorean[static_cast<std::size_t>(ib)] = 4.0;
    CHECK(spectrum_of(pythagorean, sources, 1.0) == doctest::Approx(25.0).epsilon(1e-15));
}

TEST_CASE("spectrum reproduces the measurement plus back-action split") {
    // Phase-noise coefficient 1/(2 xi) on a90 and back-action coefficient
    // hbar xi/(omega^2 M) on a0 with unit spectra.
    const double xi = 0.3, omega = 0.7, mass = 1.3, hbar = 1.0;
    SourceSet sources;
    sources.add(NoiseSource::vacuum("a0"));
    sources.add(NoiseSource::vacuum("a90"));

    std::vector<QuadratureCoefficient> coeffs{
        {"a90", Complex{1.0 / (2.0 * xi), 0.0}},
        {"a0", Complex{hbar * xi / (omega * omega * mass), 0.0}},
    };
    const double expected = 1.0 / (4.0 * xi * xi) +
                            hbar * hbar * xi * xi / (std::pow(omega, 4) * mass * mass);
    CHECK(spectrum_of(coeffs, sources, omega) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("unresolved source id is a configuration error") {
    SourceSet sources;
    sources.add(NoiseSource::vacuum("a0"));
    std::vector<QuadratureCoefficient> coeffs{{"ghost", Complex{1.0, 0.0}}};
    CHECK_THROWS_AS((void)spectrum_of(coeffs, sources, 1.0), ConfigError);
}

TEST_CASE("spectrum is invariant under a global phase on one source") {
    SourceSet sources;
    sources.add(NoiseSource::vacuum("a0"));
    sources.add(NoiseSource::vacuum("a90"));
    sources.add(NoiseSource::classical_force("Fm", [](double) { return 0.4; }));

    std::mt19937 rng(777);
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    for (int trial = 0; trial < 100; ++trial) {
        Observable obs(sources.size());
        for (std::size_t i = 0; i < obs.size(); ++i) obs[i] = Complex{coeff(rng), coeff(rng)};
        const double before = spectrum_of(obs, sources, 2.0);
        const Complex phase = std::polar(1.0, angle(rng));
        obs[1] *= phase; // one source only
        const double after = spectrum_of(obs, sources, 2.0);
        CHECK(after == doctest::Approx(before).epsilon(1e-12));
    }
}

TEST_CASE("squeezed conjugate quadratures satisfy the uncertainty product") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> rdist(0.0, 3.0);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    for (int trial = 0; trial < 500; ++trial) {
        const double r = rdist(rng);
        const double phi = angle(rng);
        const double theta = angle(rng);
        const double s1 = squeezed_quadrature_spectrum(r, phi, theta);
        const double s2 = squeezed_quadrature_spectrum(r, phi, theta + kPi / 2.0);
        CHECK(s1 * s2 >= 1.0 - 1e-12);
    }
}

TEST_CASE("angular frequencies must be positive and keep their mode") {
    CHECK_THROWS_AS(AngularFrequency(0.0, UnitMode::SI), ConfigError);
    CHECK_THROWS_AS(AngularFrequency(-2.0, UnitMode::Normalized), ConfigError);
    const AngularFrequency omega(3.5, UnitMode::SI);
    CHECK(omega.value() == 3.5);
    CHECK(omega.mode() == UnitMode::SI);
}

TEST_CASE("duplicate source ids are rejected") {
    SourceSet sources;
    sources.add(NoiseSource::vacuum("a0"));
    CHECK_THROWS_AS(sources.add(NoiseSource::vacuum("a0")), ConfigError);
}
