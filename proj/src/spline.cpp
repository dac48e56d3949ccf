#include "stragglesim/spline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stragglesim/kahan.hpp"

namespace stragglesim {

namespace {

// Value-space smoothing-spline system for knots t_1 < ... < t_n. With
// h_i = t_{i+1} - t_i, interior second derivatives gamma solve
//   (R + a Q^T Q) gamma = Q^T y,      a = lambda * normalization,
// and the knot values are g = y - a Q gamma. R is the (n-2) tridiagonal
// roughness Gram matrix, Q the n x (n-2) second-difference map; for a
// natural cubic spline Q^T g = R gamma and the penalty is gamma^T R gamma.
struct BandedSystem {
    std::vector<double> h;      // knot gaps, size n-1
    std::vector<double> diag;   // LDL^T: D
    std::vector<double> sub1;   // LDL^T: L[i+1,i]
    std::vector<double> sub2;   // LDL^T: L[i+2,i]
};

BandedSystem factor_system(const std::vector<double>& knots, double a) {
    const std::size_t n = knots.size();
    const std::size_t m = n - 2;
    BandedSystem sys;
    sys.h.resize(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) sys.h[i] = knots[i + 1] - knots[i];

    std::vector<double> d0(m), d1(m > 0 ? m - 1 : 0, 0.0), d2(m > 1 ? m - 2 : 0, 0.0);
    const auto& h = sys.h;
    for (std::size_t i = 0; i < m; ++i) {
        const double li = 1.0 / h[i];
        const double ri = 1.0 / h[i + 1];
        d0[i] = (h[i] + h[i + 1]) / 3.0 + a * (li * li + (li + ri) * (li + ri) + ri * ri);
    }
    for (std::size_t i = 0; i + 1 < m; ++i) {
        const double li = 1.0 / h[i];
        const double mi = 1.0 / h[i + 1];
        const double ri = 1.0 / h[i + 2];
        d1[i] = h[i + 1] / 6.0 + a * (-(li + mi) * mi - mi * (mi + ri));
    }
    for (std::size_t i = 0; i + 2 < m; ++i) d2[i] = a / (h[i + 1] * h[i + 2]);

    // In-place LDL^T with half-bandwidth 2; the matrix is SPD (R is strictly
    // diagonally dominant and Q^T Q is PSD).
    sys.diag.assign(m, 0.0);
    sys.sub1.assign(m > 0 ? m - 1 : 0, 0.0);
    sys.sub2.assign(m > 1 ? m - 2 : 0, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        double di = d0[i];
        if (i >= 1) di -= sys.sub1[i - 1] * sys.sub1[i - 1] * sys.diag[i - 1];
        if (i >= 2) di -= sys.sub2[i - 2] * sys.sub2[i - 2] * sys.diag[i - 2];
        sys.diag[i] = di;
        if (i + 1 < m) {
            double e = d1[i];
            if (i >= 1) e -= sys.sub1[i - 1] * sys.sub2[i - 1] * sys.diag[i - 1];
            sys.sub1[i] = e / di;
        }
        if (i + 2 < m) sys.sub2[i] = d2[i] / di;
    }
    return sys;
}

void solve_banded(const BandedSystem& sys, std::vector<double>& x) {
    const std::size_t m = x.size();
    for (std::size_t i = 0; i < m; ++i) {
        if (i >= 1) x[i] -= sys.sub1[i - 1] * x[i - 1];
        if (i >= 2) x[i] -= sys.sub2[i - 2] * x[i - 2];
    }
    for (std::size_t i = 0; i < m; ++i) x[i] /= sys.diag[i];
    for (std::size_t i = m; i-- > 0;) {
        if (i + 1 < m) x[i] -= sys.sub1[i] * x[i + 1];
        if (i + 2 < m) x[i] -= sys.sub2[i] * x[i + 2];
    }
}

}  // namespace

SplineModel fit_smoothing_spline(std::vector<double> knots,
                                 const std::vector<std::vector<double>>& data, double lambda,
                                 int normalization) {
    const std::size_t n = knots.size();
    if (n < 2) throw std::invalid_argument("fit_smoothing_spline: need at least 2 knots");
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (!(knots[i] < knots[i + 1]))
            throw std::invalid_argument("fit_smoothing_spline: knots must be strictly increasing");
    if (data.size() != n)
        throw std::invalid_argument("fit_smoothing_spline: knot/data counts differ");
    if (!(lambda >= 0.0)) throw std::invalid_argument("fit_smoothing_spline: lambda must be >= 0");
    const std::size_t dim = data.front().size();
    if (dim == 0) throw std::invalid_argument("fit_smoothing_spline: value vectors must be non-empty");
    for (const auto& y : data)
        if (y.size() != dim)
            throw std::invalid_argument("fit_smoothing_spline: inconsistent value dimensions");
    const double norm = normalization > 0 ? normalization : static_cast<double>(n);

    SplineModel model;
    model.lambda = lambda;
    model.dim = static_cast<int>(dim);
    model.fitted_values = data;
    model.second_derivs.assign(n, std::vector<double>(dim, 0.0));
    if (n == 2) {  // a natural spline on two knots is the chord; penalty is zero
        model.knots = std::move(knots);
        return model;
    }

    // The printed objective divides the data term by `norm`, so the penalty
    // weight of the unit-weight system is lambda * norm.
    const double a = lambda * norm;
    const BandedSystem sys = factor_system(knots, a);
    const std::size_t m = n - 2;
    const auto& h = sys.h;

    std::vector<double> rhs(m);
    for (std::size_t c = 0; c < dim; ++c) {
        for (std::size_t i = 0; i < m; ++i)
            rhs[i] = (data[i][c] - data[i + 1][c]) / h[i] + (data[i + 2][c] - data[i + 1][c]) / h[i + 1];
        solve_banded(sys, rhs);
        for (std::size_t i = 0; i < m; ++i) model.second_derivs[i + 1][c] = rhs[i];
        if (a != 0.0) {
            for (std::size_t r = 0; r < n; ++r) {
                double qg = 0.0;
                if (r < m) qg += rhs[r] / h[r];
                if (r >= 1 && r - 1 < m) qg -= rhs[r - 1] * (1.0 / h[r - 1] + 1.0 / h[r]);
                if (r >= 2 && r - 2 < m) qg += rhs[r - 2] / h[r - 1];
                model.fitted_values[r][c] = data[r][c] - a * qg;
            }
        }
    }
    model.knots = std::move(knots);
    return model;
}

std::vector<double> SplineModel::evaluate(double z) const {
    const std::size_t n = knots.size();
    const std::size_t d = static_cast<std::size_t>(dim);
    std::vector<double> out(d);

    if (z <= knots.front() || z >= knots.back()) {
        // Boundary slope; the zero end curvature makes extrapolation linear.
        const bool low = z <= knots.front();
        const std::size_t i = low ? 0 : n - 2;
        const double hh = knots[i + 1] - knots[i];
        const double t = low ? knots.front() : knots.back();
        const auto& g0 = fitted_values[i];
        const auto& g1 = fitted_values[i + 1];
        const auto& s0 = second_derivs[i];
        const auto& s1 = second_derivs[i + 1];
        for (std::size_t c = 0; c < d; ++c) {
            const double slope = (g1[c] - g0[c]) / hh -
                                 (low ? hh * (2.0 * s0[c] + s1[c]) / 6.0
                                      : -hh * (s0[c] + 2.0 * s1[c]) / 6.0);
            const double base = low ? g0[c] : g1[c];
            out[c] = base + (z - t) * slope;
        }
        return out;
    }

    const auto it = std::upper_bound(knots.begin(), knots.end(), z);
    const std::size_t i = static_cast<std::size_t>(std::distance(knots.begin(), it)) - 1;
    const double hh = knots[i + 1] - knots[i];
    const double A = (knots[i + 1] - z) / hh;
    const double B = (z - knots[i]) / hh;
    const double wa = (A * A * A - A) * hh * hh / 6.0;
    const double wb = (B * B * B - B) * hh * hh / 6.0;
    const auto& g0 = fitted_values[i];
    const auto& g1 = fitted_values[i + 1];
    const auto& s0 = second_derivs[i];
    const auto& s1 = second_derivs[i + 1];
    for (std::size_t c = 0; c < d; ++c) out[c] = A * g0[c] + B * g1[c] + wa * s0[c] + wb * s1[c];
    return out;
}

double second_derivative_energy(const SplineModel& model) {
    // The second derivative is linear on each interval, so each piece
    // integrates to h/3 * (s0^2 + s0 s1 + s1^2).
    KahanSum total;
    const std::size_t n = model.knots.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double hh = model.knots[i + 1] - model.knots[i];
        const auto& s0 = model.second_derivs[i];
        const auto& s1 = model.second_derivs[i + 1];
        for (std::size_t c = 0; c < s0.size(); ++c)
            total.add(hh / 3.0 * (s0[c] * s0[c] + s0[c] * s1[c] + s1[c] * s1[c]));
    }
    return total.value();
}

ResidualReport residual_diagnostics(const SplineModel& decoder,
                                    const std::function<std::vector<double>(double)>& target,
                                    int grid_size) {
    if (grid_size < 64)
        throw std::invalid_argument("residual_diagnostics: grid_size must be >= 64");
    const std::size_t g = static_cast<std::size_t>(grid_size);
    const double step = 2.0 / static_cast<double>(g - 1);

    std::vector<std::vector<double>> hs(g);
    double sup2 = 0.0;
    for (std::size_t i = 0; i < g; ++i) {
        const double z = -1.0 + step * static_cast<double>(i);
        auto hv = decoder.evaluate(z);
        const auto tv = target(z);
        double norm2 = 0.0;
        for (std::size_t c = 0; c < hv.size(); ++c) {
            hv[c] -= tv[c];
            norm2 += hv[c] * hv[c];
        }
        sup2 = std::max(sup2, norm2);
        hs[i] = std::move(hv);
    }

    const auto trapezoid_weight = [&](std::size_t i) {
        return (i == 0 || i + 1 == g) ? 0.5 * step : step;
    };
    KahanSum l2_acc;
    KahanSum dl2_acc;
    const std::size_t d = hs.front().size();
    for (std::size_t i = 0; i < g; ++i) {
        double n2 = 0.0;
        double dn2 = 0.0;
        for (std::size_t c = 0; c < d; ++c) {
            n2 += hs[i][c] * hs[i][c];
            double deriv;
            if (i == 0)
                deriv = (hs[1][c] - hs[0][c]) / step;
            else if (i + 1 == g)
                deriv = (hs[g - 1][c] - hs[g - 2][c]) / step;
            else
                deriv = (hs[i + 1][c] - hs[i - 1][c]) / (2.0 * step);
            dn2 += deriv * deriv;
        }
        l2_acc.add(trapezoid_weight(i) * n2);
        dl2_acc.add(trapezoid_weight(i) * dn2);
    }

    ResidualReport report;
    report.sup_norm = std::sqrt(sup2);
    report.l2_norm = std::sqrt(l2_acc.value());
    report.deriv_l2_norm = std::sqrt(dl2_acc.value());
    return report;
}

}  // namespace stragglesim
