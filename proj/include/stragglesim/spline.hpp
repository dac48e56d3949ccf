#pragma once

#include <functional>
#include <vector>

namespace stragglesim {

/// Natural cubic smoothing spline, fitted independently per output coordinate.
/// Stored as knot values plus knot second derivatives; the end second
/// derivatives are zero, so evaluation extrapolates linearly with the
/// boundary slope outside the knot hull.
struct SplineModel {
    std::vector<double> knots;  // strictly increasing
    std::vector<std::vector<double>> fitted_values;
    std::vector<std::vector<double>> second_derivs;
    double lambda = 0.0;
    int dim = 0;

    std::vector<double> evaluate(double z) const;
};

/// Exact minimizer of
///   (1/normalization) * sum_i ||u(t_i) - y_i||^2 + lambda * sum_j int (u_j'')^2
/// over natural cubic splines with knots t_i, via the value-space banded
/// normal equations (O(n) per coordinate). normalization <= 0 means "knot
/// count". lambda = 0 reproduces the data exactly (interpolating spline).
SplineModel fit_smoothing_spline(std::vector<double> knots,
                                 const std::vector<std::vector<double>>& data,
                                 double lambda,
                                 int normalization = 0);

/// Integral of the squared second derivative (piecewise linear between
/// knots), in closed form, summed over coordinates.
double second_derivative_energy(const SplineModel& model);

struct ResidualReport {
    double sup_norm;
    double l2_norm;
    double deriv_l2_norm;
};

/// Grid diagnostics of h(z) = model(z) - target(z) over [-1, 1]: sup of the
/// Euclidean norm, trapezoid L2 norm of h, and trapezoid L2 norm of the
/// finite-difference derivative of h. grid_size >= 64.
ResidualReport residual_diagnostics(const SplineModel& decoder,
                                    const std::function<std::vector<double>(double)>& target,
                                    int grid_size);

}  // namespace stragglesim
