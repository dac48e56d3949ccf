#include "stragglesim/checks.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>
#include <sstream>

#include "stragglesim/config.hpp"
#include "stragglesim/csv.hpp"
#include "stragglesim/experiments.hpp"
#include "stragglesim/pipeline.hpp"

namespace stragglesim {

namespace {

constexpr double kPi = std::numbers::pi;

struct Failure {
    std::string detail;
};

using CheckBody = std::function<std::string()>;  // returns detail, throws Failure

CheckResult run_check(int id, const std::string& name, const CheckBody& body) {
    CheckResult result;
    result.id = id;
    result.name = name;
    const auto start = std::chrono::steady_clock::now();
    try {
        result.detail = body();
        result.pass = true;
    } catch (const Failure& f) {
        result.detail = f.detail;
        result.pass = false;
    } catch (const std::exception& e) {
        result.detail = std::string("exception: ") + e.what();
        result.pass = false;
    }
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

void require(bool ok, const std::string& detail) {
    if (!ok) throw Failure{detail};
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

// ---- 1: longest-run DP against full enumeration --------------------------

std::string check_run_dp_oracle() {
    for (int n = 1; n <= 16; ++n) {
        for (const double p : {0.1, 0.3, 0.5}) {
            const double q = 1.0 - p;
            std::vector<double> mass(static_cast<std::size_t>(n) + 1, 0.0);
            for (std::uint32_t bits = 0; bits < (1u << n); ++bits) {
                int run = 0, best = 0, ones = 0;
                for (int i = 0; i < n; ++i) {
                    if (bits & (1u << i)) {
                        ++ones;
                        ++run;
                        best = std::max(best, run);
                    } else {
                        run = 0;
                    }
                }
                mass[static_cast<std::size_t>(best)] +=
                    std::pow(p, ones) * std::pow(q, n - ones);
            }
            double cdf = 0.0;
            for (int r = 0; r <= n; ++r) {
                cdf += mass[static_cast<std::size_t>(r)];
                const double got = exact_run_cdf(n, p, r);
                require(std::abs(got - cdf) <= 1e-12,
                        "cdf mismatch at n=" + std::to_string(n) + " p=" + fmt(p) +
                            " r=" + std::to_string(r) + ": dp=" + fmt(got) + " enum=" + fmt(cdf));
            }
        }
    }
    const double mean3 = exact_run_mean(3, 0.5);
    require(std::abs(mean3 - 1.375) <= 1e-12, "exact_run_mean(3, 0.5) = " + fmt(mean3));
    return "dp matches enumeration for n<=16, p in {0.1,0.3,0.5}; mean(3,0.5)=1.375";
}

// ---- 2: closed-form moment envelopes at N = 1e5 ---------------------------

std::string check_moment_band() {
    const int n = 100000;
    std::string detail;
    for (const double p : {0.1, 0.5}) {
        const auto m = gordon_moments(n, p);
        const double theta_ref = kPi * kPi / std::log(1.0 / p);
        require(std::abs(m.theta - theta_ref) <= 1e-12 * theta_ref,
                "theta mismatch at p=" + fmt(p));
        const double mean = exact_run_mean(n, p);
        const double gap = std::abs(mean - m.mean_center);
        require(gap <= m.mean_halfwidth + 0.05,
                "mean band violated at p=" + fmt(p) + ": |" + fmt(mean) + " - " +
                    fmt(m.mean_center) + "| = " + fmt(gap) + " > " +
                    fmt(m.mean_halfwidth + 0.05));
        detail += "p=" + fmt(p) + " gap=" + fmt(gap) + " ";
    }
    return detail + "(allowance: halfwidth + 0.05)";
}

// ---- 3: one-sided Chebyshev tail threshold --------------------------------

std::string check_tail_threshold() {
    const int n = 10000;
    const double p = 0.1;
    std::string detail;
    for (const double delta : {0.05, 0.1, 0.2}) {
        const double threshold = run_tail_threshold(gordon_moments(n, p), delta);
        const int r = static_cast<int>(std::ceil(threshold)) - 1;
        const double tail = 1.0 - exact_run_cdf(n, p, r);
        require(tail <= delta, "tail " + fmt(tail) + " exceeds delta " + fmt(delta) +
                                   " at threshold " + fmt(threshold));
        detail += "d=" + fmt(delta) + " tail=" + fmt(tail) + " ";
    }
    return detail;
}

// ---- 4: codec exactness ----------------------------------------------------

std::string check_codec_exactness() {
    rng::Stream stream(404, {11});

    // Berrut: stored values at nodes, constants everywhere.
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 1 + static_cast<int>(stream.next_index(24));
        std::vector<double> nodes(static_cast<std::size_t>(n));
        for (double& x : nodes) x = 2.0 * stream.next_unit() - 1.0;
        std::sort(nodes.begin(), nodes.end());
        bool distinct = true;
        for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
            if (nodes[i + 1] - nodes[i] < 1e-6) distinct = false;
        if (!distinct) continue;
        std::vector<std::vector<double>> values(static_cast<std::size_t>(n));
        for (auto& v : values)
            v = {2.0 * stream.next_unit() - 1.0, 2.0 * stream.next_unit() - 1.0};
        const auto interp = fit_berrut(nodes, values);
        for (int j = 0; j < n; ++j) {
            const auto got = interp.evaluate(nodes[static_cast<std::size_t>(j)]);
            for (int c = 0; c < 2; ++c) {
                const double want = values[static_cast<std::size_t>(j)][static_cast<std::size_t>(c)];
                require(std::abs(got[static_cast<std::size_t>(c)] - want) <=
                            1e-10 * std::max(1.0, std::abs(want)),
                        "berrut node exactness violated");
            }
        }
        const double c0 = 0.7125;
        const auto const_interp =
            fit_berrut(nodes, std::vector<std::vector<double>>(static_cast<std::size_t>(n),
                                                               std::vector<double>{c0}));
        if (n >= 2) {
            for (int g = 0; g <= 100; ++g) {
                const double z = nodes.front() + (nodes.back() - nodes.front()) * g / 100.0;
                require(std::abs(const_interp.evaluate(z)[0] - c0) <= 1e-12,
                        "berrut constant reproduction violated at z=" + fmt(z));
            }
        }
    }

    // Spline: interpolation at lambda = 0, affine reproduction, end curvature.
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 4 + static_cast<int>(stream.next_index(20));
        const auto knots = chebyshev_second(n).values;
        std::vector<std::vector<double>> data(static_cast<std::size_t>(n));
        for (auto& v : data)
            v = {2.0 * stream.next_unit() - 1.0, 2.0 * stream.next_unit() - 1.0};
        const auto interp = fit_smoothing_spline(knots, data, 0.0);
        for (int j = 0; j < n; ++j) {
            const auto got = interp.evaluate(knots[static_cast<std::size_t>(j)]);
            for (int c = 0; c < 2; ++c) {
                const double want = data[static_cast<std::size_t>(j)][static_cast<std::size_t>(c)];
                require(std::abs(got[static_cast<std::size_t>(c)] - want) <=
                            1e-8 * std::max(1.0, std::abs(want)),
                        "spline lambda=0 interpolation violated");
            }
        }
        require(std::abs(interp.second_derivs.front()[0]) <= 1e-12 &&
                    std::abs(interp.second_derivs.back()[1]) <= 1e-12,
                "natural boundary curvature violated");
    }
    for (const double lambda : {0.0, 0.37, 1e4}) {
        const auto knots = uniform_points(13).values;
        std::vector<std::vector<double>> line(knots.size());
        for (std::size_t i = 0; i < knots.size(); ++i) line[i] = {2.0 * knots[i] + 1.0};
        const auto model = fit_smoothing_spline(knots, line, lambda);
        for (int g = 0; g <= 60; ++g) {
            const double z = -1.3 + 2.6 * g / 60.0;  // includes points outside the hull
            require(std::abs(model.evaluate(z)[0] - (2.0 * z + 1.0)) <= 1e-10,
                    "spline affine reproduction violated at lambda=" + fmt(lambda));
        }
    }
    return "berrut node/constant and spline interpolation/affine/boundary bounds hold";
}

// ---- 5: fitted convergence exponents --------------------------------------

SweepConfig exponent_sweep_config(int threads) {
    SweepConfig cfg;
    cfg.schemes = {Scheme::letcc, Scheme::bacc};
    cfg.n_grid = {50, 100, 200, 400, 800};
    cfg.mode = StragglerMode::bernoulli;
    cfg.p_grid = {0.1};
    cfg.k = 16;
    cfg.trials = 100;
    cfg.seed = 7;
    cfg.function.name = "xsinx";
    cfg.threads = threads;
    return cfg;
}

std::string check_convergence_exponents(int threads) {
    const SweepConfig cfg = exponent_sweep_config(threads);
    const SweepResult result = run_sweep(cfg);
    std::vector<SweepRow> letcc_rows, bacc_rows;
    for (const auto& r : result.rows)
        (r.scheme == Scheme::letcc ? letcc_rows : bacc_rows).push_back(r);
    const RateFit letcc = fit_rate(letcc_rows);
    const RateFit bacc = fit_rate(bacc_rows);
    const std::string detail =
        "slope letcc=" + fmt(letcc.slope) + " bacc=" + fmt(bacc.slope);
    require(letcc.slope <= -2.4, detail + "; letcc slope above -2.4");
    require(bacc.slope <= -1.4, detail + "; bacc slope above -1.4");
    require(letcc.slope <= bacc.slope - 0.4, detail + "; separation below 0.4");
    return detail;
}

// ---- 6: Bernoulli(p) vs fixed-count straggler slopes -----------------------

std::string check_prob_vs_fixed(int threads) {
    SweepConfig base = exponent_sweep_config(threads);
    base.schemes = {Scheme::letcc};
    const auto [prob, fixed] = compare_prob_vs_fixed(base, 0.1, 2);
    const std::string detail =
        "slope p=0.1: " + fmt(prob.slope) + ", S=2: " + fmt(fixed.slope);
    require(prob.slope >= fixed.slope - 0.05, detail + "; probabilistic slope too steep");
    return detail;
}

// ---- 7: per-trial loss decomposition ---------------------------------------

std::string check_loss_decomposition() {
    std::vector<FunctionSpec> specs(3);
    specs[0].name = "xsinx";
    specs[1].name = "poly";
    specs[1].coeffs = {0.25, -1.0, 0.5, 1.5};
    specs[2].name = "mlp";
    specs[2].layer_dims = {2, 8, 3};
    specs[2].mlp_seed = 5;

    long trials_done = 0;
    for (const Scheme scheme : {Scheme::letcc, Scheme::bacc}) {
        for (const auto& spec : specs) {
            const ComputeFunction f = make_function(spec);
            for (const int n : {16, 48, 96}) {
                for (const double p : {0.05, 0.15, 0.3}) {
                    SchemeConfig sc;
                    sc.scheme = scheme;
                    sc.k = 12;
                    sc.n = n;
                    const PipelineContext ctx(sc);
                    StragglerDraw draw;
                    draw.p = p;
                    for (int t = 0; t < 190; ++t) {
                        const auto data = sample_trial_data(29, n, t, sc.k, f.in_dim);
                        rng::Stream ps(29, {7, static_cast<std::uint64_t>(n),
                                            static_cast<std::uint64_t>(t),
                                            std::bit_cast<std::uint64_t>(p)});
                        const TrialResult r = run_trial(ctx, f, data, draw, ps);
                        require(r.total_loss <= r.l_dec + r.l_enc + 1e-9,
                                "decomposition violated: total=" + fmt(r.total_loss) +
                                    " dec=" + fmt(r.l_dec) + " enc=" + fmt(r.l_enc));
                        require(r.total_loss >= 0.0 && r.l_dec >= 0.0 && r.l_enc >= 0.0,
                                "negative loss term");
                        ++trials_done;
                    }
                }
            }
        }
    }
    require(trials_done >= 10000, "only " + std::to_string(trials_done) + " trials run");
    return "decomposition held on " + std::to_string(trials_done) + "/" +
           std::to_string(trials_done) + " trials";
}

// ---- 8: sup-norm interpolation diagnostic ----------------------------------

std::string check_sup_norm_bound() {
    rng::Stream stream(808, {3});
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int degree = 2 + static_cast<int>(stream.next_index(5));
        const int out_dim = trial % 10 == 0 ? 2 : 1;
        std::vector<std::vector<double>> coeff_sets(static_cast<std::size_t>(out_dim));
        for (auto& coeffs : coeff_sets) {
            coeffs.resize(static_cast<std::size_t>(degree) + 1);
            for (double& c : coeffs) c = 2.0 * stream.next_unit() - 1.0;
        }
        const auto target = [&coeff_sets](double z) {
            std::vector<double> out;
            out.reserve(coeff_sets.size());
            for (const auto& coeffs : coeff_sets) {
                double acc = 0.0;
                for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * z + coeffs[i];
                out.push_back(acc);
            }
            return out;
        };

        const int n_knots = 8 + static_cast<int>(stream.next_index(33));
        std::vector<double> knots(static_cast<std::size_t>(n_knots));
        for (;;) {
            for (double& t : knots) t = 1.96 * stream.next_unit() - 0.98;
            std::sort(knots.begin(), knots.end());
            bool ok = true;
            for (std::size_t i = 0; i + 1 < knots.size(); ++i)
                if (knots[i + 1] - knots[i] < 1e-6) ok = false;
            if (ok) break;
        }
        std::vector<std::vector<double>> samples(knots.size());
        for (std::size_t i = 0; i < knots.size(); ++i) samples[i] = target(knots[i]);
        const auto decoder = fit_smoothing_spline(knots, samples, 0.0);

        const auto report = residual_diagnostics(decoder, target, 1024);
        const double lhs = report.sup_norm * report.sup_norm;
        const double rhs = 2.0 * report.l2_norm * report.deriv_l2_norm * 1.05 + 1e-18;
        require(lhs <= rhs, "sup bound violated: sup^2=" + fmt(lhs) + " rhs=" + fmt(rhs));
        if (rhs > 0.0) worst = std::max(worst, lhs / rhs);
    }
    return "100 decoder/target pairs, worst lhs/rhs=" + fmt(worst);
}

// ---- 9: survivor-gap inequalities and the local mesh ratio bound -----------

std::string check_survivor_gap_bounds() {
    rng::Stream stream(909, {17});
    long patterns = 0;
    double worst_mu_margin = 0.0;
    for (const int n : {32, 128, 512}) {
        const MappingPoints beta = chebyshev_second(n);
        const MeshStats full = mesh_stats(beta);
        const double ps[3] = {0.05, 0.1, 0.3};
        for (int t = 0; t < 3400; ++t) {
            const double p = ps[t % 3];
            StragglerPattern pattern;
            do {
                pattern = sample_bernoulli_pattern(n, p, stream);
            } while (static_cast<int>(pattern.surviving.size()) < 3);
            const int run = longest_run(pattern);
            const MeshStats sub = subset_mesh_stats(beta, pattern.surviving);
            require(sub.delta_max <= (run + 1) * full.delta_max * (1.0 + 1e-12),
                    "survivor delta_max exceeded (run+1) * delta_max at n=" + std::to_string(n));
            require(sub.delta_min >= full.delta_min * (1.0 - 1e-12),
                    "survivor delta_min dropped below delta_min at n=" + std::to_string(n));
            const double mu = local_mesh_ratio(beta, pattern.surviving);
            const double bound = (run + 1.0) * (run + 3.0) * kPi * kPi / 4.0;
            require(mu <= bound * (1.0 + 1e-12),
                    "local mesh ratio " + fmt(mu) + " exceeded bound " + fmt(bound) + " at n=" +
                        std::to_string(n) + " run=" + std::to_string(run));
            worst_mu_margin = std::max(worst_mu_margin, mu / bound);
            ++patterns;
        }
    }
    return std::to_string(patterns) + " patterns, worst mu/bound=" + fmt(worst_mu_margin);
}

// ---- 10: byte-identical sweeps across thread counts -----------------------

constexpr const char* kGoldenConfig = R"json({
  "schemes": ["letcc", "bacc"],
  "n_grid": [25, 50, 100, 200],
  "k": 16,
  "mode": "bernoulli",
  "p_grid": [0.1],
  "trials": 20,
  "seed": 7,
  "alpha_points": "chebyshev1",
  "beta_points": "chebyshev2",
  "lambda_enc": 0.0,
  "lambda_dec": 0.0,
  "enc_normalization": "k",
  "function": {"name": "xsinx"}
})json";

std::string check_sweep_determinism() {
    ExperimentConfig config = parse_experiment_config(kGoldenConfig);
    config.sweep.threads = 1;
    const std::string csv_serial = sweep_to_csv(run_sweep(config.sweep));
    const std::string csv_serial_again = sweep_to_csv(run_sweep(config.sweep));
    config.sweep.threads = 8;
    const std::string csv_parallel = sweep_to_csv(run_sweep(config.sweep));
    require(csv_serial == csv_serial_again, "repeated serial sweeps differ");
    require(csv_serial == csv_parallel, "sweeps with 1 and 8 threads differ");
    return "identical CSV bytes across repeats and thread counts (" +
           std::to_string(csv_serial.size()) + " bytes)";
}

}  // namespace

std::vector<CheckResult> run_acceptance_checks(int threads) {
    std::vector<CheckResult> results;
    results.push_back(run_check(1, "longest-run-dp-oracle", check_run_dp_oracle));
    results.push_back(run_check(2, "longest-run-moment-band", check_moment_band));
    results.push_back(run_check(3, "longest-run-tail-bound", check_tail_threshold));
    results.push_back(run_check(4, "codec-exactness", check_codec_exactness));
    results.push_back(
        run_check(5, "convergence-exponents", [threads] { return check_convergence_exponents(threads); }));
    results.push_back(
        run_check(6, "bernoulli-vs-fixed-slope", [threads] { return check_prob_vs_fixed(threads); }));
    results.push_back(run_check(7, "loss-decomposition", check_loss_decomposition));
    results.push_back(run_check(8, "sup-norm-interpolation-bound", check_sup_norm_bound));
    results.push_back(run_check(9, "survivor-gap-bounds", check_survivor_gap_bounds));
    results.push_back(run_check(10, "sweep-determinism", check_sweep_determinism));
    return results;
}

int run_and_report_checks(std::ostream& out, int threads) {
    const auto results = run_acceptance_checks(threads);
    int failures = 0;
    for (const auto& r : results) {
        out << (r.pass ? "[PASS] " : "[FAIL] ") << r.id << " " << r.name << " ("
            << fmt(r.seconds) << "s) " << r.detail << "\n";
        if (!r.pass) ++failures;
    }
    out << (failures == 0 ? "all checks passed" : std::to_string(failures) + " check(s) failed")
        << "\n";
    return failures;
}

}  // namespace stragglesim
