#include "qlock/optimizer.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace qlock {

namespace {

double quotient_at(const RationalQuotient& q, Complex gain) {
    Eigen::Vector2cd v(Complex{1.0, 0.0}, gain);
    const Complex num = (v.adjoint() * q.numerator * v)(0, 0);
    const Complex root = (q.denominator_root.transpose() * v)(0, 0);
    return num.real() / std::norm(root);
}

bool improves(double sigma, Complex gain, double best_sigma, Complex best_gain) {
    const double tol = 1e-12 * (1.0 + std::abs(best_sigma));
    if (sigma < best_sigma - tol) return true;
    if (sigma <= best_sigma + tol && std::abs(gain) < std::abs(best_gain)) return true;
    return false;
}

} // namespace

std::string_view gain_method_name(GainSolution::Method method) {
    switch (method) {
    case GainSolution::Method::Eigen: return "eigen";
    case GainSolution::Method::Grid: return "grid";
    case GainSolution::Method::Refine: return "refine";
    }
    return "?";
}

RationalQuotient gain_quotient(const NetworkModel& model, double omega) {
    const auto& law = model.scenario().control;
    if (law.kind != ControlKind::FeedbackToM && law.kind != ControlKind::FeedforwardToI)
        throw ConfigError("scenario '" + model.scenario().label +
                          "' has no loop gain to optimize");

    // Every estimator transfer amplitude is (alpha_s + beta_s g) / (p + q g):
    // the gain enters one row of the dynamics, so the determinant is affine in
    // g and Cramer numerators are too. Two solves pin all coefficients down.
    const LinearSystem sys0 = model.assemble_with_gain(omega, Complex{0.0, 0.0});
    const Complex det0 = sys0.dynamics.determinant();

    Complex probe{1.0, 0.0};
    Complex det1;
    LinearSystem sys1;
    const std::array<Complex, 4> probes{Complex{1.0, 0.0}, Complex{0.0, 1.0}, Complex{-1.0, 0.0},
                                        Complex{2.0, 0.0}};
    bool found = false;
    for (const Complex& g : probes) {
        sys1 = model.assemble_with_gain(omega, g);
        det1 = sys1.dynamics.determinant();
        if (std::abs(det1) > 1e-8 * std::abs(det0)) {
            probe = g;
            found = true;
            break;
        }
    }
    if (!found)
        throw NumericError("gain optimization: dynamics singular at every probe gain, omega = " +
                           std::to_string(omega));

    const Eigen::RowVectorXcd c0 = model.solve(sys0).estimator;
    const Eigen::RowVectorXcd c1 = model.solve(sys1).estimator;

    const Eigen::RowVectorXcd alpha = c0 * det0;
    const Eigen::RowVectorXcd beta = (c1 * det1 - alpha) / probe;

    RationalQuotient quotient;
    quotient.numerator.setZero();
    for (Eigen::Index s = 0; s < alpha.size(); ++s) {
        const double weight = model.sources()[static_cast<std::size_t>(s)].at(omega);
        if (weight == 0.0) continue;
        Eigen::Vector2cd u(alpha(s), beta(s));
        quotient.numerator += weight * (u.conjugate() * u.transpose());
    }
    quotient.denominator_root << det0, (det1 - det0) / probe;
    return quotient;
}

QuotientMinimum minimize_rational_quotient(const RationalQuotient& quotient) {
    Eigen::Matrix2cd n = 0.5 * (quotient.numerator + quotient.numerator.adjoint());
    const double n00 = n(0, 0).real();
    const double n11 = n(1, 1).real();
    const double scale = n00 + n11;
    const double det = n00 * n11 - std::norm(n(0, 1));

    if (!(scale > 0.0))
        throw NumericError("gain optimization degenerate: numerator form vanishes");

    if (det <= 1e-14 * scale * scale) {
        // Rank-deficient numerator. When every transfer amplitude is
        // proportional to the denominator the quotient is gain-independent
        // and the least intervention g = 0 is reported.
        const double f0 = quotient_at(quotient, Complex{0.0, 0.0});
        const std::array<Complex, 4> probes{Complex{1.0, 0.0}, Complex{0.0, 1.0},
                                            Complex{-0.5, 0.5}, Complex{3.0, -2.0}};
        bool constant = true;
        for (const Complex& g : probes) {
            const double f = quotient_at(quotient, g);
            if (std::abs(f - f0) > 1e-9 * std::max(f0, 1e-300)) {
                constant = false;
                break;
            }
        }
        if (constant) return {Complex{0.0, 0.0}, f0, true};
        throw NumericError("gain optimization degenerate: numerator form is singular "
                           "but the budget still depends on the gain");
    }

    // Minimize v^H N v subject to w^T v fixed; the stationary point solves
    // N v = conj(w) and the minimum value is 1 / (z^H N^{-1} z), z = conj(w).
    const Eigen::Vector2cd z = quotient.denominator_root.conjugate();
    Eigen::Matrix2cd inv;
    inv << n(1, 1), -n(0, 1), -n(1, 0), n(0, 0);
    inv /= det;
    const Eigen::Vector2cd v = inv * z;

    const double residual = (n * v - z).norm();
    if (residual > 1e-10 * z.norm())
        throw NumericError("gain optimization: stationarity residual " +
                           std::to_string(residual / z.norm()) + " exceeds tolerance");

    const double zinvz = (z.adjoint() * v)(0).real();
    if (!(zinvz > 0.0))
        throw NumericError("gain optimization degenerate: non-positive quadratic form");

    const Complex gain = v(1) / v(0);
    if (!std::isfinite(gain.real()) || !std::isfinite(gain.imag()))
        throw NumericError("gain optimization: optimal gain diverges (infinite-gain optimum)");

    return {gain, 1.0 / zinvz, false};
}

GainSolution optimize_gain(const NetworkModel& model, double omega) {
    const RationalQuotient quotient = gain_quotient(model, omega);
    const QuotientMinimum minimum = minimize_rational_quotient(quotient);

    GainSolution sol;
    sol.omega = omega;
    sol.gain = minimum.gain;
    sol.method = GainSolution::Method::Eigen;
    sol.sigma = model.sigma_with_gain(omega, minimum.gain);

    const double mismatch = std::abs(sol.sigma - minimum.value);
    if (mismatch > 1e-9 * std::max(sol.sigma, 1e-300)) {
        std::ostringstream os;
        os << "gain optimization inconsistent at omega = " << omega << ": closed form "
           << minimum.value << " vs network " << sol.sigma;
        throw NumericError(os.str());
    }
    return sol;
}

ComplexRect ComplexRect::centered(Complex center, double half_width) {
    return {center.real() - half_width, center.real() + half_width, center.imag() - half_width,
            center.imag() + half_width};
}

GainSolution grid_search_oracle(const NetworkModel& model, double omega,
                                const ComplexRect& region, int samples_per_axis) {
    if (samples_per_axis < 2)
        throw ConfigError("grid search needs at least 2 samples per axis");
    if (!(region.re_max > region.re_min) || !(region.im_max > region.im_min))
        throw ConfigError("grid search region is empty");

    GainSolution best;
    best.omega = omega;
    best.method = GainSolution::Method::Grid;
    best.sigma = std::numeric_limits<double>::infinity();

    const int n = samples_per_axis;
    bool boundary = false;
    for (int iy = 0; iy < n; ++iy) {
        const double y = region.im_min + (region.im_max - region.im_min) * iy / (n - 1);
        for (int ix = 0; ix < n; ++ix) {
            const double x = region.re_min + (region.re_max - region.re_min) * ix / (n - 1);
            const Complex g{x, y};
            const double sigma = model.sigma_with_gain(omega, g);
            if (improves(sigma, g, best.sigma, best.gain)) {
                best.sigma = sigma;
                best.gain = g;
                boundary = (ix == 0 || ix == n - 1 || iy == 0 || iy == n - 1);
            }
        }
    }
    best.on_boundary = boundary;
    return best;
}

GainSolution refine_search(const NetworkModel& model, double omega, Complex start,
                           double half_width, int iterations) {
    GainSolution best;
    best.omega = omega;
    best.method = GainSolution::Method::Refine;
    best.gain = start;
    best.sigma = model.sigma_with_gain(omega, start);

    double hw = half_width;
    for (int it = 0; it < iterations; ++it) {
        bool moved = false;
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                if (dx == 0 && dy == 0) continue;
                const Complex g = best.gain + Complex{dx * hw, dy * hw};
                const double sigma = model.sigma_with_gain(omega, g);
                if (improves(sigma, g, best.sigma, best.gain)) {
                    best.sigma = sigma;
                    best.gain = g;
                    moved = true;
                }
            }
        }
        if (!moved) hw *= 0.5;
    }
    return best;
}

} // namespace qlock
