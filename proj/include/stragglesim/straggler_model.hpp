#pragma once

#include <cstdint>
#include <vector>

#include "stragglesim/rng.hpp"

namespace stragglesim {

/// One realized straggler draw over n servers: flag 1 = straggler,
/// surviving = sorted indices of the servers that answered.
struct StragglerPattern {
    int n_servers = 0;
    std::vector<std::uint8_t> straggler_flags;
    std::vector<int> surviving;
};

/// Closed-form center/halfwidth envelopes for the mean and variance of the
/// longest run of 1s in an iid Bernoulli(p) sequence (Gordon-style
/// extreme-value asymptotics; the vanishing remainder terms are dropped).
struct GordonMoments {
    double theta;
    double mean_center;
    double mean_halfwidth;
    double var_center;
    double var_halfwidth;
};

struct TailBoundReport {
    double threshold;       // run length t with Pr(R >= t) <= bound
    double empirical_tail;  // fraction of sampled patterns with R >= threshold
    double bound;           // the requested tail probability delta
    bool pass;              // empirical_tail <= bound + 3 sigma Monte Carlo slack
};

StragglerPattern pattern_from_flags(std::vector<std::uint8_t> flags);
StragglerPattern sample_bernoulli_pattern(int n, double p, rng::Stream& stream);
StragglerPattern sample_fixed_count_pattern(int n, int s, rng::Stream& stream);

/// Length of the longest block of consecutive straggler flags.
int longest_run(const StragglerPattern& pattern);

/// Pr(longest run of 1s <= r) over n iid Bernoulli(p) flags, computed exactly
/// by dynamic programming over the trailing-run length. O(n * r).
double exact_run_cdf(int n, double p, int r);

/// E[longest run] via the tail-sum identity over exact_run_cdf.
double exact_run_mean(int n, double p);
double exact_run_variance(int n, double p);

GordonMoments gordon_moments(int n, double p);

/// One-sided Chebyshev threshold t(delta): Pr(longest run >= t) <= delta,
/// built from the moment envelopes above.
double run_tail_threshold(const GordonMoments& moments, double delta);

TailBoundReport tail_bound_check(int n, double p, double delta, int trials, rng::Stream& stream);

}  // namespace stragglesim
