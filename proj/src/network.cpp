#include "qlock/network.hpp"

#include <cmath>
#include <sstream>

namespace qlock {

namespace {
constexpr Complex kI{0.0, 1.0};

std::string format_omega(double omega) {
    std::ostringstream os;
    os << omega;
    return os.str();
}
} // namespace

Observable to_observable(const Eigen::RowVectorXcd& row) {
    Observable obs(static_cast<std::size_t>(row.size()));
    for (Eigen::Index i = 0; i < row.size(); ++i) obs[static_cast<std::size_t>(i)] = row(i);
    return obs;
}

struct NetworkModel::Basis {
    Eigen::RowVectorXcd a0, a90, b0, b90;
};

NetworkModel::NetworkModel(Scenario scenario) : scenario_(std::move(scenario)) {
    scenario_.validate();

    squeeze_basis_ = scenario_.squeeze.r != 0.0 || scenario_.id == ScenarioId::SqueezedInput;
    if (squeeze_basis_) {
        const double r = scenario_.squeeze.r;
        ia0_ = sources_.add(NoiseSource::constant("a_sq", SourceKind::QuantumQuadrature,
                                                  std::exp(-2.0 * r)));
        ia90_ = sources_.add(NoiseSource::constant("a_antisq", SourceKind::QuantumQuadrature,
                                                   std::exp(2.0 * r)));
    } else {
        ia0_ = sources_.add(NoiseSource::vacuum("a0"));
        ia90_ = sources_.add(NoiseSource::vacuum("a90"));
    }
    if (scenario_.has_sensor()) {
        ib0_ = sources_.add(NoiseSource::vacuum("b0"));
        ib90_ = sources_.add(NoiseSource::vacuum("b90"));
        if (scenario_.loss > 0.0) {
            iv0_ = sources_.add(NoiseSource::vacuum("vloss0", SourceKind::VacuumLoss));
            iv90_ = sources_.add(NoiseSource::vacuum("vloss90", SourceKind::VacuumLoss));
        }
    }

    auto force_source = [](const MechanicalMode& mode, const char* id) {
        SpectrumFn psd = mode.classical_force ? mode.classical_force
                                              : SpectrumFn([](double) { return 0.0; });
        return NoiseSource::classical_force(id, std::move(psd));
    };
    ifm_ = sources_.add(force_source(scenario_.mirror_m, "Fm"));
    unknowns_.push_back(scenario_.mirror_m.name);
    if (scenario_.mirror_r) {
        ifr_ = sources_.add(force_source(*scenario_.mirror_r, "Fr"));
        unknowns_.push_back(scenario_.mirror_r->name);
    }
    if (scenario_.mirror_i) {
        ifi_ = sources_.add(force_source(*scenario_.mirror_i, "Fi"));
        unknowns_.push_back(scenario_.mirror_i->name);
    }

    omega_sql_a_ = scenario_.omega_sql_a();
    if (scenario_.has_sensor()) omega_sql_b_ = scenario_.omega_sql_b();
}

int NetworkModel::unknown_index(std::string_view mirror) const {
    for (std::size_t i = 0; i < unknowns_.size(); ++i)
        if (unknowns_[i] == mirror) return static_cast<int>(i);
    throw ConfigError("unknown mirror '" + std::string(mirror) + "' in scenario '" +
                      scenario_.label + "'");
}

NetworkModel::Basis NetworkModel::basis_at(double omega) const {
    const auto s = static_cast<Eigen::Index>(sources_.size());
    Basis basis;
    basis.a0 = Eigen::RowVectorXcd::Zero(s);
    basis.a90 = Eigen::RowVectorXcd::Zero(s);
    if (squeeze_basis_) {
        // Physical quadratures expressed in the squeeze eigenbasis rotated by
        // phi: a0 = cos(phi) a_sq - sin(phi) a_antisq, a90 = sin(phi) a_sq +
        // cos(phi) a_antisq.
        double phi = scenario_.squeeze.fixed_angle;
        if (scenario_.squeeze.tracking) {
            DetectionPolicy optimal{AngleRule::InterferometerOptimal, 0.0};
            phi = -optimal.theta(omega, omega_sql_a_);
        }
        const double c = std::cos(phi);
        const double sn = std::sin(phi);
        basis.a0(ia0_) = c;
        basis.a0(ia90_) = -sn;
        basis.a90(ia0_) = sn;
        basis.a90(ia90_) = c;
    } else {
        basis.a0(ia0_) = 1.0;
        basis.a90(ia90_) = 1.0;
    }
    if (scenario_.has_sensor()) {
        basis.b0 = Eigen::RowVectorXcd::Zero(s);
        basis.b90 = Eigen::RowVectorXcd::Zero(s);
        basis.b0(ib0_) = 1.0;
        basis.b90(ib90_) = 1.0;
    }
    return basis;
}

LinearSystem NetworkModel::assemble(double omega) const {
    const auto& law = scenario_.control;
    if (law.kind != ControlKind::None && law.mode == GainMode::Optimized)
        throw ConfigError("scenario '" + scenario_.label +
                          "': optimized gain must be resolved by the optimizer before assembly");
    return assemble_impl(omega, law.mode, law.gain_at(omega));
}

LinearSystem NetworkModel::assemble_with_gain(double omega, Complex gain) const {
    return assemble_impl(omega, GainMode::Fixed, gain);
}

LinearSystem NetworkModel::assemble_impl(double omega, GainMode mode, Complex gain) const {
    if (!(omega > 0.0))
        throw ConfigError("analysis frequency must be positive, got " + format_omega(omega));

    const auto n = static_cast<Eigen::Index>(unknowns_.size());
    const auto s = static_cast<Eigen::Index>(sources_.size());
    const double hbar = scenario_.constants.hbar;
    const double xi_a = scenario_.interferometer.xi;

    LinearSystem sys;
    sys.omega = omega;
    sys.unknowns = unknowns_;
    sys.dynamics = Eigen::MatrixXcd::Zero(n, n);
    sys.forcing = Eigen::MatrixXcd::Zero(n, s);
    sys.readout_direct = Eigen::RowVectorXcd::Zero(s);
    sys.readout_weights = Eigen::RowVectorXcd::Zero(n);
    sys.sensor_direct = Eigen::RowVectorXcd::Zero(s);
    sys.sensor_weights = Eigen::RowVectorXcd::Zero(n);

    const Basis basis = basis_at(omega);

    auto impedance_of = [&](const MechanicalMode& mirror) {
        const Complex z = mirror.impedance(omega);
        if (std::abs(z) == 0.0)
            throw NumericError("singular dynamics: impedance of mirror '" + mirror.name +
                               "' vanishes at omega = " + format_omega(omega) + " in scenario '" +
                               scenario_.label + "'");
        return z;
    };

    // Equations of motion: -i omega Z X = sum of forces.
    const int m = 0;
    sys.dynamics(m, m) = -kI * omega * impedance_of(scenario_.mirror_m);
    sys.forcing.row(m) += hbar * xi_a * basis.a0;
    sys.forcing(m, ifm_) += 1.0;

    int r = -1, i = -1;
    if (scenario_.mirror_r) {
        r = unknown_index(scenario_.mirror_r->name);
        sys.dynamics(r, r) = -kI * omega * impedance_of(*scenario_.mirror_r);
        sys.forcing(r, ifr_) += 1.0;
    }
    if (scenario_.mirror_i) {
        i = unknown_index(scenario_.mirror_i->name);
        sys.dynamics(i, i) = -kI * omega * impedance_of(*scenario_.mirror_i);
        sys.forcing.row(i) -= hbar * xi_a * basis.a0;
        sys.forcing(i, ifi_) += 1.0;
    }

    if (scenario_.has_sensor()) {
        const double xi_b = scenario_.sensor->xi;
        sys.forcing.row(m) -= hbar * xi_b * basis.b0;
        sys.forcing.row(r) += hbar * xi_b * basis.b0;

        // Sensor readout: the detected quadrature of the reflected b field,
        // normalized as a displacement estimator of mirror m. The cavity
        // length is X_r - X_m, so the estimator resolves +X_m - X_r.
        const double cot_b = scenario_.detection_b.cot_theta(omega, omega_sql_b_);
        const double sin_b = scenario_.detection_b.sin_theta(omega, omega_sql_b_);
        if (std::abs(sin_b) < 1e-12)
            throw NumericError("degenerate sensor readout at omega = " + format_omega(omega) +
                               " in scenario '" + scenario_.label + "'");
        const double trans = std::sqrt(1.0 - scenario_.loss);

        sys.sensor_weights(m) = trans;
        sys.sensor_weights(r) = -trans;
        sys.sensor_direct = -trans / (2.0 * xi_b) * basis.b90 -
                            trans * cot_b / (2.0 * xi_b) * basis.b0;
        if (scenario_.loss > 0.0) {
            const double refl = std::sqrt(scenario_.loss);
            const double cos_b = cot_b * sin_b;
            sys.sensor_direct(iv0_) -= refl * cos_b / (2.0 * xi_b * sin_b);
            sys.sensor_direct(iv90_) -= refl / (2.0 * xi_b);
        }

        const auto& law = scenario_.control;
        const bool active = law.kind != ControlKind::None && mode != GainMode::Off;
        if (active && law.kind == ControlKind::FeedbackToM) {
            if (mode == GainMode::Infinite) {
                // Large-gain limit: the loop nulls the sensor estimator, so the
                // equation of motion of mirror m is replaced by that constraint.
                sys.dynamics.row(m) = sys.sensor_weights;
                sys.forcing.row(m) = -sys.sensor_direct;
            } else {
                const Complex fb = kI * omega * gain;
                sys.dynamics.row(m) -= fb * sys.sensor_weights;
                sys.forcing.row(m) += fb * sys.sensor_direct;
            }
        } else if (active && law.kind == ControlKind::FeedforwardToI) {
            if (mode == GainMode::Infinite)
                throw ConfigError("scenario '" + scenario_.label +
                                  "': infinite gain is not defined for feedforward control");
            const Complex ff = kI * omega * gain;
            sys.dynamics.row(i) += ff * sys.sensor_weights;
            sys.forcing.row(i) -= ff * sys.sensor_direct;
        }
    }

    // Interferometer readout: detected quadrature of the reflected a field,
    // normalized so that the signal enters with coefficient one.
    const double cot_a = scenario_.detection_a.cot_theta(omega, omega_sql_a_);
    sys.readout_direct = 1.0 / (2.0 * xi_a) * basis.a90 + cot_a / (2.0 * xi_a) * basis.a0;
    sys.readout_weights(m) = 1.0;
    if (i >= 0) sys.readout_weights(i) = -1.0;

    if (scenario_.control.kind == ControlKind::SignalSubtraction && mode != GainMode::Off) {
        const Complex kappa = (mode == GainMode::Fixed) ? gain : scenario_.control.gain_at(omega);
        sys.readout_direct -= kappa * sys.sensor_direct;
        sys.readout_weights -= kappa * sys.sensor_weights;
    }

    return sys;
}

NetworkModel::Solution NetworkModel::solve(const LinearSystem& sys) const {
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(sys.dynamics);
    if (!lu.isInvertible())
        throw NumericError("singular dynamics at omega = " + format_omega(sys.omega) +
                           " in scenario '" + scenario_.label + "'");

    Solution sol;
    sol.displacements = lu.solve(sys.forcing);

    const double scale = std::max({1.0, sys.forcing.cwiseAbs().maxCoeff(),
                                   (sys.dynamics * sol.displacements).cwiseAbs().maxCoeff()});
    const double residual =
        (sys.dynamics * sol.displacements - sys.forcing).cwiseAbs().maxCoeff();
    if (residual > 1e-10 * scale)
        throw NumericError("linear solve residual " + std::to_string(residual / scale) +
                           " exceeds tolerance at omega = " + format_omega(sys.omega) +
                           " in scenario '" + scenario_.label + "'");

    sol.estimator = sys.readout_direct + sys.readout_weights * sol.displacements;
    sol.sensor_estimator = sys.sensor_direct + sys.sensor_weights * sol.displacements;
    return sol;
}

Observable NetworkModel::estimator(double omega) const {
    return to_observable(solve(assemble(omega)).estimator);
}

Observable NetworkModel::estimator_with_gain(double omega, Complex gain) const {
    return to_observable(solve(assemble_with_gain(omega, gain)).estimator);
}

Observable NetworkModel::sensor_estimator(double omega) const {
    if (!scenario_.has_sensor())
        throw ConfigError("scenario '" + scenario_.label + "' has no sensor channel");
    return to_observable(solve(assemble(omega)).sensor_estimator);
}

double NetworkModel::sigma_of(const Eigen::RowVectorXcd& transfer, double omega) const {
    double total = 0.0;
    for (Eigen::Index k = 0; k < transfer.size(); ++k)
        total += std::norm(transfer(k)) * sources_[static_cast<std::size_t>(k)].at(omega);
    return total;
}

double NetworkModel::sigma(double omega) const {
    return sigma_of(solve(assemble(omega)).estimator, omega);
}

double NetworkModel::sigma_with_gain(double omega, Complex gain) const {
    return sigma_of(solve(assemble_with_gain(omega, gain)).estimator, omega);
}

} // namespace qlock
