#pragma once

#include "qlock/network.hpp"

namespace qlock {

// Result of a single-frequency gain optimization.
struct GainSolution {
    double omega = 0.0;
    Complex gain{0.0, 0.0};
    double sigma = 0.0;
    enum class Method { Eigen, Grid, Refine } method = Method::Eigen;
    bool on_boundary = false; // grid search only: optimum found on the region edge
};

std::string_view gain_method_name(GainSolution::Method method);

// The budget as a function of one complex loop gain g is a ratio of Hermitian
// quadratic forms in the vector (1, g):
//     sigma(g) = (v^H N v) / |w^T v|^2,   v = (1, g)^T.
// numerator is N (positive definite away from degenerate scenarios) and
// denominator_root is w.
struct RationalQuotient {
    Eigen::Matrix2cd numerator;
    Eigen::Vector2cd denominator_root;
};

struct QuotientMinimum {
    Complex gain{0.0, 0.0};
    double value = 0.0;
    bool constant = false; // sigma does not depend on the gain; g = 0 reported
};

// Extracts N and w at one frequency from two fixed-gain network solves.
RationalQuotient gain_quotient(const NetworkModel& model, double omega);

// Closed-form minimizer of the quotient over finite gains. Throws
// NumericError when the numerator form is degenerate and the quotient is not
// constant.
QuotientMinimum minimize_rational_quotient(const RationalQuotient& quotient);

// Per-frequency optimum of the scenario's loop gain. The reported sigma is
// re-evaluated through the ordinary fixed-gain network path and checked
// against the closed-form minimum.
GainSolution optimize_gain(const NetworkModel& model, double omega);

struct ComplexRect {
    double re_min = -1.0, re_max = 1.0;
    double im_min = -1.0, im_max = 1.0;

    static ComplexRect centered(Complex center, double half_width);
};

// Brute-force sampling oracle: evaluates sigma on an n x n grid over the
// region through full network solves, independent of the closed-form path.
// Ties within numerical tolerance resolve toward the smallest |g|.
GainSolution grid_search_oracle(const NetworkModel& model, double omega,
                                const ComplexRect& region, int samples_per_axis);

// Local pattern search shrinking around the incumbent; used to polish the
// grid oracle's argmin in verification runs.
GainSolution refine_search(const NetworkModel& model, double omega, Complex start,
                           double half_width, int iterations = 60);

} // namespace qlock
