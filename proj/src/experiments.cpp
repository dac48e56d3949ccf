#include "stragglesim/experiments.hpp"

#include <bit>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "stragglesim/kahan.hpp"

namespace stragglesim {

namespace {

// Stream-key purposes; data streams deliberately ignore scheme / mode / p so
// that comparisons between schemes and straggler models see identical inputs.
constexpr std::uint64_t kDataStream = 1;
constexpr std::uint64_t kPatternStream = 2;

void parallel_for(int count, int threads, const std::function<void(int)>& body) {
    const int workers = std::max(1, std::min(threads, count));
    if (workers == 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (int i = w; i < count; i += workers) body(i);
            } catch (...) {
                std::scoped_lock lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

SchemeConfig cell_scheme_config(const SweepConfig& cfg, Scheme scheme, int n) {
    SchemeConfig sc;
    sc.scheme = scheme;
    sc.k = cfg.k;
    sc.n = n;
    sc.alpha_points = cfg.alpha_points;
    sc.beta_points = cfg.beta_points;
    sc.lambda_enc = cfg.lambda_enc;
    sc.lambda_dec = cfg.lambda_dec;
    sc.enc_normalization = cfg.enc_normalization;
    return sc;
}

SweepRow run_cell(const SweepConfig& cfg, const ComputeFunction& f, Scheme scheme, int n,
                  double p_or_s, int threads) {
    SweepRow row;
    row.scheme = scheme;
    row.n = n;
    row.k = cfg.k;
    row.mode = cfg.mode;
    row.p_or_s = p_or_s;
    row.trials = cfg.trials;
    row.seed = cfg.seed;

    StragglerDraw draw;
    draw.mode = cfg.mode;
    std::uint64_t param_bits;
    if (cfg.mode == StragglerMode::bernoulli) {
        draw.p = p_or_s;
        param_bits = std::bit_cast<std::uint64_t>(p_or_s);
    } else {
        draw.s = static_cast<int>(p_or_s);
        param_bits = static_cast<std::uint64_t>(draw.s);
    }
    const std::uint64_t mode_tag = cfg.mode == StragglerMode::bernoulli ? 0 : 1;

    try {
        const PipelineContext ctx(cell_scheme_config(cfg, scheme, n));
        std::vector<TrialResult> results(static_cast<std::size_t>(cfg.trials));
        parallel_for(cfg.trials, threads, [&](int t) {
            const int data_slot = cfg.fixed_data ? 0 : t;
            const auto data = sample_trial_data(cfg.seed, n, data_slot, cfg.k, f.in_dim);
            rng::Stream pattern_stream(cfg.seed, {kPatternStream, static_cast<std::uint64_t>(n),
                                                  static_cast<std::uint64_t>(t), mode_tag,
                                                  param_bits});
            results[static_cast<std::size_t>(t)] = run_trial(ctx, f, data, draw, pattern_stream);
        });

        // Sequential reduction in trial order: the report is independent of
        // how trials were scheduled.
        KahanSum loss, l_dec, l_enc, runs;
        long resamples = 0;
        for (const auto& r : results) {
            loss.add(r.total_loss);
            l_dec.add(r.l_dec);
            l_enc.add(r.l_enc);
            runs.add(static_cast<double>(r.longest_run));
            resamples += r.resample_count;
        }
        const double inv = 1.0 / cfg.trials;
        row.mean_loss = loss.value() * inv;
        row.mean_l_dec = l_dec.value() * inv;
        row.mean_l_enc = l_enc.value() * inv;
        row.mean_longest_run = runs.value() * inv;
        row.resamples = resamples;
        if (cfg.trials > 1) {
            KahanSum sq;
            for (const auto& r : results) {
                const double d = r.total_loss - row.mean_loss;
                sq.add(d * d);
            }
            row.std_loss = std::sqrt(sq.value() / (cfg.trials - 1));
        }
    } catch (const DegenerateConfiguration&) {
        row.failed = true;
        row.mean_loss = row.std_loss = row.mean_l_dec = row.mean_l_enc = row.mean_longest_run =
            std::nan("");
    }
    return row;
}

}  // namespace

std::vector<std::vector<double>> sample_trial_data(std::uint64_t seed, int n, int trial, int k,
                                                   int dim) {
    rng::Stream stream(seed, {kDataStream, static_cast<std::uint64_t>(n),
                              static_cast<std::uint64_t>(trial)});
    std::vector<std::vector<double>> data(static_cast<std::size_t>(k));
    for (auto& x : data) {
        x.resize(static_cast<std::size_t>(dim));
        for (double& c : x) c = 2.0 * stream.next_unit() - 1.0;
    }
    return data;
}

int resolve_threads(int requested) {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    int threads = requested > 0 ? requested : hw;
    if (const char* env = std::getenv("STRAGGLESIM_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1) threads = std::min(threads, cap);
    }
    return std::max(1, threads);
}

SweepResult run_sweep(const SweepConfig& cfg) {
    if (cfg.trials < 1) throw std::invalid_argument("run_sweep: trials must be >= 1");
    if (cfg.schemes.empty()) throw std::invalid_argument("run_sweep: no schemes requested");
    for (int n : cfg.n_grid)
        if (n < 4) throw std::invalid_argument("run_sweep: every N must be >= 4");
    const bool bernoulli = cfg.mode == StragglerMode::bernoulli;
    if (bernoulli && cfg.p_grid.empty())
        throw std::invalid_argument("run_sweep: bernoulli mode needs a p grid");
    if (!bernoulli && cfg.s_grid.empty())
        throw std::invalid_argument("run_sweep: fixed mode needs an s grid");

    const ComputeFunction f = make_function(cfg.function);
    const int threads = resolve_threads(cfg.threads);

    SweepResult result;
    for (Scheme scheme : cfg.schemes) {
        for (int n : cfg.n_grid) {
            if (bernoulli) {
                for (double p : cfg.p_grid)
                    result.rows.push_back(run_cell(cfg, f, scheme, n, p, threads));
            } else {
                for (int s : cfg.s_grid)
                    result.rows.push_back(run_cell(cfg, f, scheme, n, static_cast<double>(s), threads));
            }
        }
    }
    return result;
}

RateFit fit_rate(std::span<const SweepRow> rows) {
    std::vector<double> lx;
    std::vector<double> ly;
    int n_min = 0;
    int n_max = 0;
    for (const auto& r : rows) {
        if (r.failed || !(r.mean_loss > 0.0) || !std::isfinite(r.mean_loss)) continue;
        lx.push_back(std::log(static_cast<double>(r.n)));
        ly.push_back(std::log(r.mean_loss));
        n_min = n_min == 0 ? r.n : std::min(n_min, r.n);
        n_max = std::max(n_max, r.n);
    }
    const std::size_t m = lx.size();
    if (m < 3) throw std::invalid_argument("fit_rate: need at least 3 rows with positive mean loss");

    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sx += lx[i];
        sy += ly[i];
    }
    const double mx = sx / static_cast<double>(m);
    const double my = sy / static_cast<double>(m);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    RateFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = syy > 0.0 ? std::min(1.0, (sxy * sxy) / (sxx * syy)) : 1.0;
    fit.n_min = n_min;
    fit.n_max = n_max;
    return fit;
}

double theoretical_curve(Scheme scheme, double n, double p, double delta) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("theoretical_curve: p must lie strictly inside (0, 1)");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("theoretical_curve: delta must lie strictly inside (0, 1)");
    const double q = 1.0 - p;
    if (!(q * n >= 1.0)) throw std::invalid_argument("theoretical_curve: need q * N >= 1");
    const double log_term = std::log(q * n) / std::log(1.0 / p) + std::sqrt(1.0 / delta);
    if (scheme == Scheme::letcc) return std::pow(log_term, 3) / std::pow(n, 3);
    return std::pow(log_term, 4) / std::pow(n, 2);
}

std::pair<RateFit, RateFit> compare_prob_vs_fixed(const SweepConfig& base, double p, int s) {
    if (base.schemes.size() != 1)
        throw std::invalid_argument("compare_prob_vs_fixed: exactly one scheme per comparison");
    SweepConfig prob = base;
    prob.mode = StragglerMode::bernoulli;
    prob.p_grid = {p};
    prob.s_grid.clear();

    SweepConfig fixed = base;
    fixed.mode = StragglerMode::fixed_count;
    fixed.s_grid = {s};
    fixed.p_grid.clear();

    const SweepResult rp = run_sweep(prob);
    const SweepResult rf = run_sweep(fixed);
    return {fit_rate(rp.rows), fit_rate(rf.rows)};
}

}  // namespace stragglesim
