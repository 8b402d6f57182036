#pragma once

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qlock/errors.hpp"

namespace qlock {

using Complex = std::complex<double>;

// Two unit systems are supported. Normalized mode works in hbar = 1, M = 1
// units with frequencies expressed as Omega / Omega_sql of the main beam and
// spectra in units of 1/(2 xi_a^2). SI mode carries real units throughout.
enum class UnitMode { SI, Normalized };

std::string_view unit_mode_name(UnitMode mode);

struct Constants {
    double hbar;
    double c;

    static Constants si() { return {1.0545718e-34, 2.99792458e8}; }
    static Constants normalized() { return {1.0, 1.0}; }
};

// Analysis frequency with its unit mode. Values are strictly positive; the
// mode tag is fixed at construction and checked wherever frequencies from
// different modes could meet.
class AngularFrequency {
public:
    AngularFrequency(double value, UnitMode mode) : value_(value), mode_(mode) {
        if (!(value > 0.0))
            throw ConfigError("angular frequency must be strictly positive, got " +
                              std::to_string(value));
    }

    double value() const { return value_; }
    UnitMode mode() const { return mode_; }

private:
    double value_;
    UnitMode mode_;
};

enum class SourceKind { QuantumQuadrature, ClassicalForce, VacuumLoss };

// One-sided, symmetrized spectra. A coherent or vacuum field quadrature has
// spectrum 1 in this convention; classical forces carry force-PSD units.
using SpectrumFn = std::function<double(double)>;

struct NoiseSource {
    std::string id;
    SourceKind kind = SourceKind::QuantumQuadrature;
    SpectrumFn spectrum;

    double at(double omega) const { return spectrum ? spectrum(omega) : 0.0; }

    static NoiseSource vacuum(std::string id, SourceKind kind = SourceKind::QuantumQuadrature);
    static NoiseSource constant(std::string id, SourceKind kind, double level);
    static NoiseSource classical_force(std::string id, SpectrumFn psd);
};

// Registry of the statistically independent noise inputs of one scenario.
// Index order is fixed at build time; observables are dense over it.
class SourceSet {
public:
    int add(NoiseSource source);
    int index_of(std::string_view id) const; // -1 when absent
    int require(std::string_view id) const;  // ConfigError when absent

    std::size_t size() const { return sources_.size(); }
    const NoiseSource& operator[](std::size_t i) const { return sources_[i]; }
    const std::vector<NoiseSource>& all() const { return sources_; }

private:
    std::vector<NoiseSource> sources_;
};

// Linear combination of the sources of one SourceSet: the transfer amplitude
// from each source to some observable, at one analysis frequency.
class Observable {
public:
    Observable() = default;
    explicit Observable(std::size_t n) : coeff_(n, Complex{0.0, 0.0}) {}

    std::size_t size() const { return coeff_.size(); }
    Complex& operator[](std::size_t i) { return coeff_[i]; }
    const Complex& operator[](std::size_t i) const { return coeff_[i]; }

    Observable& add(std::size_t i, Complex c) {
        coeff_[i] += c;
        return *this;
    }

    Observable& operator+=(const Observable& other);
    Observable& operator-=(const Observable& other);
    Observable& operator*=(Complex s);

    friend Observable operator+(Observable a, const Observable& b) { return a += b; }
    friend Observable operator-(Observable a, const Observable& b) { return a -= b; }
    friend Observable operator*(Complex s, Observable a) { return a *= s; }

    const std::vector<Complex>& coefficients() const { return coeff_; }

private:
    std::vector<Complex> coeff_;
};

// Sparse form of a single transfer amplitude, used at API boundaries.
struct QuadratureCoefficient {
    std::string source_id;
    Complex coeff;
};

// Quadrature algebra: a_theta = cos(theta) a_0 + sin(theta) a_{pi/2}.
// rotate_quadrature combines the coefficient pair of (a_0, a_{pi/2}) into the
// coefficient of a_theta; rotate_pair re-expresses a pair in a basis rotated
// by theta (rotate_pair(.., theta) then (.., -theta) is the identity).
Complex rotate_quadrature(Complex c0, Complex c90, double theta);
std::pair<Complex, Complex> rotate_pair(Complex c0, Complex c90, double theta);

// Uncorrelated-source noise spectrum: sum_i |coeff_i|^2 S_i(omega).
double spectrum_of(const Observable& observable, const SourceSet& sources, double omega);
double spectrum_of(std::span<const QuadratureCoefficient> coefficients,
                   const SourceSet& sources, double omega);

// Spectrum of the theta quadrature of a field squeezed by r along angle phi:
// cos^2(theta-phi) e^{-2r} + sin^2(theta-phi) e^{+2r}. The product of the
// spectra of any two conjugate quadratures is >= 1.
double squeezed_quadrature_spectrum(double r, double phi, double theta);

} // namespace qlock
