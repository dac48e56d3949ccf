#include "stragglesim/straggler_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace stragglesim {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEulerGamma = 0.57721566490153286;

void check_probability(double p) {
    if (!(p >= 0.0 && p < 1.0))
        throw std::invalid_argument("straggler probability must lie in [0, 1)");
}

}  // namespace

StragglerPattern pattern_from_flags(std::vector<std::uint8_t> flags) {
    StragglerPattern pat;
    pat.n_servers = static_cast<int>(flags.size());
    pat.straggler_flags = std::move(flags);
    for (int i = 0; i < pat.n_servers; ++i)
        if (!pat.straggler_flags[static_cast<std::size_t>(i)]) pat.surviving.push_back(i);
    return pat;
}

StragglerPattern sample_bernoulli_pattern(int n, double p, rng::Stream& stream) {
    if (n < 1) throw std::invalid_argument("sample_bernoulli_pattern: n must be >= 1");
    check_probability(p);
    std::vector<std::uint8_t> flags(static_cast<std::size_t>(n));
    for (auto& f : flags) f = stream.next_bernoulli(p) ? 1 : 0;
    return pattern_from_flags(std::move(flags));
}

StragglerPattern sample_fixed_count_pattern(int n, int s, rng::Stream& stream) {
    if (n < 1) throw std::invalid_argument("sample_fixed_count_pattern: n must be >= 1");
    if (s < 0 || s > n)
        throw std::invalid_argument("sample_fixed_count_pattern: need 0 <= s <= n");
    // Partial Fisher-Yates: the first s slots end up a uniform s-subset.
    std::vector<int> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    for (int i = 0; i < s; ++i) {
        const auto j = i + static_cast<int>(stream.next_index(static_cast<std::uint64_t>(n - i)));
        std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    }
    std::vector<std::uint8_t> flags(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < s; ++i) flags[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])] = 1;
    return pattern_from_flags(std::move(flags));
}

int longest_run(const StragglerPattern& pattern) {
    int best = 0;
    int cur = 0;
    for (auto f : pattern.straggler_flags) {
        cur = f ? cur + 1 : 0;
        best = std::max(best, cur);
    }
    return best;
}

double exact_run_cdf(int n, double p, int r) {
    if (n < 0) throw std::invalid_argument("exact_run_cdf: n must be >= 0");
    if (r < 0) throw std::invalid_argument("exact_run_cdf: r must be >= 0");
    check_probability(p);
    if (r >= n || p == 0.0) return 1.0;
    const double q = 1.0 - p;
    // state[t] = probability that the prefix so far is run-free beyond r and
    // ends with exactly t trailing stragglers. A straggler past t = r kills
    // the mass.
    std::vector<double> state(static_cast<std::size_t>(r) + 1, 0.0);
    std::vector<double> next(static_cast<std::size_t>(r) + 1, 0.0);
    state[0] = 1.0;
    for (int step = 0; step < n; ++step) {
        double alive = 0.0;
        for (double m : state) alive += m;
        std::fill(next.begin(), next.end(), 0.0);
        next[0] = q * alive;
        for (int t = 0; t < r; ++t) next[static_cast<std::size_t>(t) + 1] = p * state[static_cast<std::size_t>(t)];
        state.swap(next);
    }
    double cdf = 0.0;
    for (double m : state) cdf += m;
    return std::min(cdf, 1.0);
}

namespace {

// E[R^k] via tail sums; terms decay geometrically once r passes the typical
// run length, so the loop exits long before r = n.
double run_moment_tail_sum(int n, double p, bool second_moment) {
    check_probability(p);
    if (n < 0) throw std::invalid_argument("run moments: n must be >= 0");
    double acc = 0.0;
    for (int r = 0; r < n; ++r) {
        const double tail = 1.0 - exact_run_cdf(n, p, r);
        acc += second_moment ? (2.0 * r + 1.0) * tail : tail;
        if (tail < 1e-16) break;
    }
    return acc;
}

}  // namespace

double exact_run_mean(int n, double p) { return run_moment_tail_sum(n, p, false); }

double exact_run_variance(int n, double p) {
    const double mean = exact_run_mean(n, p);
    const double second = run_moment_tail_sum(n, p, true);
    return std::max(0.0, second - mean * mean);
}

GordonMoments gordon_moments(int n, double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("gordon_moments: p must lie strictly inside (0, 1)");
    if (n < 1) throw std::invalid_argument("gordon_moments: n must be >= 1");
    const double q = 1.0 - p;
    if (q * n < 1.0) throw std::invalid_argument("gordon_moments: need q * n >= 1");
    const double log_inv_p = std::log(1.0 / p);
    const double theta = kPi * kPi / log_inv_p;
    const double em_theta = std::exp(-theta);
    const double base = 2.0 * kPi * std::exp(theta);
    GordonMoments m;
    m.theta = theta;
    m.mean_center = std::log(q * n) / log_inv_p + kEulerGamma / log_inv_p - 0.5;
    m.mean_halfwidth = std::sqrt(theta) / (base * (1.0 - em_theta) * (1.0 - em_theta));
    m.var_center = kPi * kPi / (6.0 * log_inv_p * log_inv_p) + 1.0 / 12.0;
    m.var_halfwidth = 2.0 * (1.1 + 0.7 * theta) * std::sqrt(theta) /
                      (base * (1.0 - em_theta) * (1.0 - em_theta) * (1.0 - em_theta));
    return m;
}

double run_tail_threshold(const GordonMoments& moments, double delta) {
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("run_tail_threshold: delta must lie in (0, 1)");
    const double mean_upper = moments.mean_center + moments.mean_halfwidth;
    const double var_upper = moments.var_center + moments.var_halfwidth;
    return mean_upper + std::sqrt(1.0 / delta - 1.0) * std::sqrt(var_upper);
}

TailBoundReport tail_bound_check(int n, double p, double delta, int trials, rng::Stream& stream) {
    if (trials < 1) throw std::invalid_argument("tail_bound_check: trials must be >= 1");
    const double threshold = run_tail_threshold(gordon_moments(n, p), delta);
    long exceed = 0;
    for (int t = 0; t < trials; ++t) {
        const auto pattern = sample_bernoulli_pattern(n, p, stream);
        if (longest_run(pattern) >= threshold) ++exceed;
    }
    TailBoundReport report;
    report.threshold = threshold;
    report.empirical_tail = static_cast<double>(exceed) / trials;
    report.bound = delta;
    const double sigma = std::sqrt(delta * (1.0 - delta) / trials);
    report.pass = report.empirical_tail <= delta + 3.0 * sigma;
    return report;
}

}  // namespace stragglesim
