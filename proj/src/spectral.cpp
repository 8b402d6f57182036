#include "qlock/spectral.hpp"

#include <cmath>

namespace qlock {

std::string_view unit_mode_name(UnitMode mode) {
    return mode == UnitMode::SI ? "si" : "normalized";
}

NoiseSource NoiseSource::vacuum(std::string id, SourceKind kind) {
    return {std::move(id), kind, [](double) { return 1.0; }};
}

NoiseSource NoiseSource::constant(std::string id, SourceKind kind, double level) {
    return {std::move(id), kind, [level](double) { return level; }};
}

NoiseSource NoiseSource::classical_force(std::string id, SpectrumFn psd) {
    return {std::move(id), SourceKind::ClassicalForce, std::move(psd)};
}

int SourceSet::add(NoiseSource source) {
    if (index_of(source.id) >= 0)
        throw ConfigError("duplicate noise source id '" + source.id + "'");
    sources_.push_back(std::move(source));
    return static_cast<int>(sources_.size()) - 1;
}

int SourceSet::index_of(std::string_view id) const {
    for (std::size_t i = 0; i < sources_.size(); ++i)
        if (sources_[i].id == id) return static_cast<int>(i);
    return -1;
}

int SourceSet::require(std::string_view id) const {
    int idx = index_of(id);
    if (idx < 0)
        throw ConfigError("unresolved noise source id '" + std::string(id) + "'");
    return idx;
}

Observable& Observable::operator+=(const Observable& other) {
    if (coeff_.size() != other.coeff_.size())
        throw NumericError("observable size mismatch in addition");
    for (std::size_t i = 0; i < coeff_.size(); ++i) coeff_[i] += other.coeff_[i];
    return *this;
}

Observable& Observable::operator-=(const Observable& other) {
    if (coeff_.size() != other.coeff_.size())
        throw NumericError("observable size mismatch in subtraction");
    for (std::size_t i = 0; i < coeff_.size(); ++i) coeff_[i] -= other.coeff_[i];
    return *this;
}

Observable& Observable::operator*=(Complex s) {
    for (auto& c : coeff_) c *= s;
    return *this;
}

Complex rotate_quadrature(Complex c0, Complex c90, double theta) {
    return std::cos(theta) * c0 + std::sin(theta) * c90;
}

std::pair<Complex, Complex> rotate_pair(Complex c0, Complex c90, double theta) {
    const double ct = std::cos(theta);
    const double st = std::sin(theta);
    return {ct * c0 + st * c90, -st * c0 + ct * c90};
}

double spectrum_of(const Observable& observable, const SourceSet& sources, double omega) {
    if (observable.size() != sources.size())
        throw ConfigError("observable refers to " + std::to_string(observable.size()) +
                          " sources but the registry holds " + std::to_string(sources.size()));
    double total = 0.0;
    for (std::size_t i = 0; i < sources.size(); ++i)
        total += std::norm(observable[i]) * sources[i].at(omega);
    return total;
}

double spectrum_of(std::span<const QuadratureCoefficient> coefficients,
                   const SourceSet& sources, double omega) {
    double total = 0.0;
    for (const auto& qc : coefficients) {
        int idx = sources.require(qc.source_id);
        total += std::norm(qc.coeff) * sources[static_cast<std::size_t>(idx)].at(omega);
    }
    return total;
}

double squeezed_quadrature_spectrum(double r, double phi, double theta) {
    const double c = std::cos(theta - phi);
    const double s = std::sin(theta - phi);
    return c * c * std::exp(-2.0 * r) + s * s * std::exp(2.0 * r);
}

} // namespace qlock
