#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "stragglesim/mapping_points.hpp"
#include "stragglesim/rng.hpp"
#include "stragglesim/spline.hpp"

using namespace stragglesim;

namespace {

std::vector<std::vector<double>> scalar_data(const std::vector<double>& ys) {
    std::vector<std::vector<double>> out;
    out.reserve(ys.size());
    for (double y : ys) out.push_back({y});
    return out;
}

// Objective of the printed fit problem, with the roughness of the natural
// interpolant through the candidate knot values.
double objective(const std::vector<double>& knots, const std::vector<std::vector<double>>& data,
                 const std::vector<std::vector<double>>& candidate, double lambda, int norm) {
    double misfit = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i)
        for (std::size_t c = 0; c < data[i].size(); ++c) {
            const double d = candidate[i][c] - data[i][c];
            misfit += d * d;
        }
    const auto interp = fit_smoothing_spline(knots, candidate, 0.0);
    return misfit / norm + lambda * second_derivative_energy(interp);
}

}  // namespace

TEST_CASE("fit validation") {
    CHECK_THROWS_AS(fit_smoothing_spline({0.0}, {{1.0}}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(fit_smoothing_spline({0.0, 0.0}, {{1.0}, {2.0}}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(fit_smoothing_spline({0.0, 1.0}, {{1.0}}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(fit_smoothing_spline({0.0, 1.0}, {{1.0}, {2.0}}, -0.5), std::invalid_argument);
    CHECK_THROWS_AS(fit_smoothing_spline({0.0, 1.0}, {{1.0}, {2.0, 3.0}}, 0.0),
                    std::invalid_argument);
}

TEST_CASE("lambda zero interpolates the data exactly") {
    rng::Stream stream(51, {0});
    const auto knots = chebyshev_second(17).values;
    std::vector<std::vector<double>> data(knots.size());
    for (auto& v : data) v = {4.0 * stream.next_unit() - 2.0, stream.next_unit()};
    const auto model = fit_smoothing_spline(knots, data, 0.0);
    for (std::size_t i = 0; i < knots.size(); ++i) {
        CHECK(model.fitted_values[i] == data[i]);  // bitwise
        const auto at_knot = model.evaluate(knots[i]);
        CHECK(at_knot[0] == data[i][0]);
        CHECK(at_knot[1] == data[i][1]);
    }
}

TEST_CASE("affine data is reproduced for every smoothing weight") {
    const auto knots = uniform_points(11).values;
    std::vector<double> line;
    for (double t : knots) line.push_back(2.0 * t + 1.0);
    for (double lambda : {0.0, 1e-4, 0.3, 1e6}) {
        const auto model = fit_smoothing_spline(knots, scalar_data(line), lambda);
        for (int g = 0; g <= 80; ++g) {
            const double z = -1.5 + 3.0 * g / 80.0;  // inside, between, and outside the hull
            CHECK(std::abs(model.evaluate(z)[0] - (2.0 * z + 1.0)) <= 1e-10);
        }
        CHECK(second_derivative_energy(model) <= 1e-18);
    }
}

TEST_CASE("huge smoothing weight collapses to the least-squares line") {
    const auto model =
        fit_smoothing_spline({-1.0, 0.0, 1.0}, scalar_data({0.0, 1.0, 0.0}), 1e9);
    // least squares on this symmetric data: slope 0, intercept 1/3
    for (double z : {-1.0, -0.4, 0.0, 0.7, 1.0})
        CHECK(model.evaluate(z)[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-4));
}

TEST_CASE("natural boundary and linear extrapolation") {
    rng::Stream stream(52, {0});
    const auto knots = uniform_points(9).values;
    std::vector<std::vector<double>> data(knots.size());
    for (auto& v : data) v = {2.0 * stream.next_unit() - 1.0};
    for (double lambda : {0.0, 0.5}) {
        const auto model = fit_smoothing_spline(knots, data, lambda);
        CHECK(std::abs(model.second_derivs.front()[0]) <= 1e-12);
        CHECK(std::abs(model.second_derivs.back()[0]) <= 1e-12);
        // three points beyond each end are collinear
        for (const double base : {-1.3, 1.3}) {
            const double sgn = base < 0 ? -1.0 : 1.0;
            const double f0 = model.evaluate(base)[0];
            const double f1 = model.evaluate(base + sgn * 0.2)[0];
            const double f2 = model.evaluate(base + sgn * 0.4)[0];
            CHECK(std::abs((f2 - f1) - (f1 - f0)) <= 1e-12);
        }
    }
}

TEST_CASE("evaluate hits the fitted values at the knots") {
    const auto knots = chebyshev_second(8).values;
    std::vector<std::vector<double>> data(knots.size());
    rng::Stream stream(53, {0});
    for (auto& v : data) v = {stream.next_unit()};
    const auto model = fit_smoothing_spline(knots, data, 0.2);
    for (std::size_t i = 0; i < knots.size(); ++i)
        CHECK(model.evaluate(knots[i])[0] == model.fitted_values[i][0]);
}

TEST_CASE("curvature energy closed form") {
    SplineModel model;
    model.knots = {0.0, 1.0, 2.0};
    model.fitted_values = {{0.0}, {0.0}, {0.0}};
    const double c = 1.7;
    model.second_derivs = {{0.0}, {c}, {0.0}};
    model.dim = 1;
    CHECK(second_derivative_energy(model) == doctest::Approx(2.0 * c * c / 3.0).epsilon(1e-14));
}

TEST_CASE("smoothing lowers the curvature energy") {
    rng::Stream stream(54, {0});
    const auto knots = uniform_points(25).values;
    std::vector<std::vector<double>> noisy(knots.size());
    for (std::size_t i = 0; i < knots.size(); ++i)
        noisy[i] = {std::sin(3.0 * knots[i]) + 0.3 * (2.0 * stream.next_unit() - 1.0)};
    const double rough = second_derivative_energy(fit_smoothing_spline(knots, noisy, 0.0));
    const double smooth = second_derivative_energy(fit_smoothing_spline(knots, noisy, 1e-3));
    CHECK(smooth <= rough);
}

TEST_CASE("fitted values minimize the printed objective") {
    rng::Stream stream(55, {0});
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 4 + static_cast<int>(stream.next_index(9));
        std::vector<double> knots(static_cast<std::size_t>(n));
        for (;;) {
            for (double& t : knots) t = 2.0 * stream.next_unit() - 1.0;
            std::sort(knots.begin(), knots.end());
            bool ok = true;
            for (int i = 0; i + 1 < n; ++i)
                if (knots[static_cast<std::size_t>(i + 1)] - knots[static_cast<std::size_t>(i)] <
                    1e-3)
                    ok = false;
            if (ok) break;
        }
        std::vector<std::vector<double>> data(static_cast<std::size_t>(n));
        for (auto& v : data) v = {2.0 * stream.next_unit() - 1.0};
        const double lambda = 0.01 * (1.0 + static_cast<double>(stream.next_index(50)));
        const auto model = fit_smoothing_spline(knots, data, lambda);
        const double best = objective(knots, data, model.fitted_values, lambda, n);
        for (int rep = 0; rep < 3; ++rep) {
            auto perturbed = model.fitted_values;
            for (auto& v : perturbed) v[0] += 1e-3 * (2.0 * stream.next_unit() - 1.0);
            CHECK(objective(knots, data, perturbed, lambda, n) >= best - 1e-12);
        }
    }
}

TEST_CASE("coordinate fits stack independently") {
    rng::Stream stream(56, {0});
    const auto knots = chebyshev_second(13).values;
    std::vector<std::vector<double>> data(knots.size());
    for (auto& v : data) v = {stream.next_unit(), -2.0 * stream.next_unit(), stream.next_unit()};
    const auto joint = fit_smoothing_spline(knots, data, 0.07);
    for (int c = 0; c < 3; ++c) {
        std::vector<std::vector<double>> coord(knots.size());
        for (std::size_t i = 0; i < knots.size(); ++i)
            coord[i] = {data[i][static_cast<std::size_t>(c)]};
        const auto single = fit_smoothing_spline(knots, coord, 0.07);
        for (std::size_t i = 0; i < knots.size(); ++i) {
            CHECK(joint.fitted_values[i][static_cast<std::size_t>(c)] == single.fitted_values[i][0]);
            CHECK(joint.second_derivs[i][static_cast<std::size_t>(c)] == single.second_derivs[i][0]);
        }
    }
}

TEST_CASE("dense interpolation of a smooth target") {
    const auto knots = uniform_points(64).values;
    std::vector<std::vector<double>> samples(knots.size());
    for (std::size_t i = 0; i < knots.size(); ++i) samples[i] = {knots[i] * std::sin(knots[i])};
    const auto model = fit_smoothing_spline(knots, samples, 0.0);
    const auto report = residual_diagnostics(
        model, [](double z) { return std::vector<double>{z * std::sin(z)}; }, 2048);
    CHECK(report.sup_norm <= 1e-3);  // pinned dense-interpolation level
}

TEST_CASE("residual diagnostics") {
    const auto knots = chebyshev_second(10).values;
    std::vector<std::vector<double>> data(knots.size());
    rng::Stream stream(57, {0});
    for (auto& v : data) v = {stream.next_unit()};
    const auto model = fit_smoothing_spline(knots, data, 0.0);

    const auto self = residual_diagnostics(
        model, [&model](double z) { return model.evaluate(z); }, 256);
    CHECK(self.sup_norm == 0.0);
    CHECK(self.l2_norm == 0.0);
    CHECK(self.deriv_l2_norm == 0.0);

    CHECK_THROWS_AS(residual_diagnostics(
                        model, [](double) { return std::vector<double>{0.0}; }, 32),
                    std::invalid_argument);

    // interpolation-residual pairs respect the sup-norm product bound
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<std::vector<double>> samples(knots.size());
        std::vector<double> coeffs(4);
        for (double& cf : coeffs) cf = 2.0 * stream.next_unit() - 1.0;
        const auto target = [&coeffs](double z) {
            double acc = 0.0;
            for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * z + coeffs[i];
            return std::vector<double>{acc};
        };
        for (std::size_t i = 0; i < knots.size(); ++i) samples[i] = target(knots[i]);
        const auto fit = fit_smoothing_spline(knots, samples, 0.0);
        const auto report = residual_diagnostics(fit, target, 1024);
        CHECK(report.sup_norm * report.sup_norm <=
              2.0 * report.l2_norm * report.deriv_l2_norm * 1.05 + 1e-18);
    }
}
