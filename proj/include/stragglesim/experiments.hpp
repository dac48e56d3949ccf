#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "stragglesim/pipeline.hpp"

namespace stragglesim {

/// A full Monte Carlo sweep: every (scheme, N, p-or-S) cell is run for
/// `trials` independent rounds with fresh data per trial.
struct SweepConfig {
    std::vector<Scheme> schemes = {Scheme::letcc, Scheme::bacc};
    std::vector<int> n_grid = {25, 50, 100, 200, 400, 800};
    StragglerMode mode = StragglerMode::bernoulli;
    std::vector<double> p_grid = {0.1};
    std::vector<int> s_grid = {};
    int k = 16;
    int trials = 100;
    std::uint64_t seed = 0;
    PointKind alpha_points = PointKind::chebyshev_first;
    PointKind beta_points = PointKind::chebyshev_second;
    double lambda_enc = 0.0;
    double lambda_dec = 0.0;
    EncNormalization enc_normalization = EncNormalization::data_count;
    FunctionSpec function;
    bool fixed_data = false;  // reuse trial 0's data in every trial (variance isolation)
    int threads = 0;          // 0: STRAGGLESIM_THREADS, else hardware
};

struct SweepRow {
    Scheme scheme = Scheme::letcc;
    int n = 0;
    int k = 0;
    StragglerMode mode = StragglerMode::bernoulli;
    double p_or_s = 0.0;
    int trials = 0;
    std::uint64_t seed = 0;
    double mean_loss = 0.0;
    double std_loss = 0.0;
    double mean_l_dec = 0.0;
    double mean_l_enc = 0.0;
    double mean_longest_run = 0.0;
    long resamples = 0;
    bool failed = false;
};

struct SweepResult {
    std::vector<SweepRow> rows;
};

/// Least-squares fit of log(mean_loss) against log(N).
struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    int n_min = 0;
    int n_max = 0;
};

SweepResult run_sweep(const SweepConfig& cfg);

/// Fit over the rows of one (scheme, p_or_s) series. Rows with non-positive
/// or non-finite mean_loss are dropped; fewer than 3 left throws.
RateFit fit_rate(std::span<const SweepRow> rows);

/// Reference bound shape (log_{1/p}(qN) + sqrt(1/delta))^a / N^b with
/// (a, b) = (3, 3) for letcc and (4, 2) for bacc; the multiplicative
/// constant is normalized to 1, so only the shape is meaningful.
double theoretical_curve(Scheme scheme, double n, double p, double delta);

/// Two sweeps sharing data draws: one Bernoulli(p), one with exactly s
/// stragglers. Returns {probabilistic fit, fixed-count fit}.
std::pair<RateFit, RateFit> compare_prob_vs_fixed(const SweepConfig& base, double p, int s);

/// Worker count: `requested` if positive else hardware concurrency, capped by
/// the STRAGGLESIM_THREADS environment variable when it is set.
int resolve_threads(int requested);

/// The data drawn for a given (seed, n, trial) cell slot; shared across
/// schemes, straggler params and modes so those comparisons see the same
/// inputs. Coordinates are uniform on [-1, 1]^d.
std::vector<std::vector<double>> sample_trial_data(std::uint64_t seed, int n, int trial, int k,
                                                   int dim);

}  // namespace stragglesim
