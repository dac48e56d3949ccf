#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "stragglesim/experiments.hpp"
#include "stragglesim/pipeline.hpp"

using namespace stragglesim;

namespace {

std::vector<std::vector<double>> constant_data(int k, double c) {
    return std::vector<std::vector<double>>(static_cast<std::size_t>(k), {c});
}

SchemeConfig small_config(Scheme scheme, int k = 8, int n = 20) {
    SchemeConfig cfg;
    cfg.scheme = scheme;
    cfg.k = k;
    cfg.n = n;
    return cfg;
}

}  // namespace

TEST_CASE("constant data stays constant through the encoder") {
    for (Scheme scheme : {Scheme::bacc, Scheme::letcc}) {
        const PipelineContext ctx(small_config(scheme));
        const auto enc = encode(ctx, constant_data(8, 0.42));
        REQUIRE(enc.coded_inputs.size() == 20);
        for (const auto& coded : enc.coded_inputs)
            CHECK(std::abs(coded[0] - 0.42) <= 1e-12);
    }
}

TEST_CASE("interpolating encoders pass the data through exactly") {
    const auto data = sample_trial_data(3, 20, 0, 8, 1);
    for (Scheme scheme : {Scheme::bacc, Scheme::letcc}) {
        const PipelineContext ctx(small_config(scheme));
        const auto enc = encode(ctx, data);
        for (int k = 0; k < 8; ++k)
            CHECK(enc.evaluate(ctx.alpha[k])[0] == data[static_cast<std::size_t>(k)][0]);
    }
}

TEST_CASE("computing applies f to survivors only") {
    const PipelineContext ctx(small_config(Scheme::bacc, 4, 8));
    const auto f = make_xsinx();
    const auto enc = encode(ctx, sample_trial_data(5, 8, 0, 4, 1));

    const auto full = compute_with_stragglers(
        ctx, enc.coded_inputs, f, pattern_from_flags(std::vector<std::uint8_t>(8, 0)));
    CHECK(full.values.size() == 8);

    const auto pattern = pattern_from_flags({1, 1, 0, 1, 1, 0, 1, 1});
    const auto two = compute_with_stragglers(ctx, enc.coded_inputs, f, pattern);
    REQUIRE(two.indices == std::vector<int>{2, 5});
    CHECK(two.betas[0] == ctx.beta[2]);
    CHECK(two.betas[1] == ctx.beta[5]);
    CHECK(two.values[0][0] == f(enc.coded_inputs[2])[0]);

    const auto fconst = make_polynomial(std::vector<double>{0.875});
    const auto cres = compute_with_stragglers(ctx, enc.coded_inputs, fconst, pattern);
    CHECK(cres.values[0][0] == cres.values[1][0]);

    // too few survivors for each decoder
    const auto all_gone = pattern_from_flags(std::vector<std::uint8_t>(8, 1));
    CHECK_THROWS_AS(compute_with_stragglers(ctx, enc.coded_inputs, f, all_gone),
                    InsufficientSurvivors);
    const PipelineContext sctx(small_config(Scheme::letcc, 4, 8));
    const auto senc = encode(sctx, sample_trial_data(5, 8, 0, 4, 1));
    const auto one_left = pattern_from_flags({1, 1, 1, 0, 1, 1, 1, 1});
    CHECK_THROWS_AS(compute_with_stragglers(sctx, senc.coded_inputs, f, one_left),
                    InsufficientSurvivors);

    const auto wrong_len = pattern_from_flags({0, 0, 0});
    CHECK_THROWS_AS(compute_with_stragglers(ctx, enc.coded_inputs, f, wrong_len),
                    std::invalid_argument);
}

TEST_CASE("constant functions decode with vanishing loss") {
    const auto f = make_polynomial(std::vector<double>{1.25});
    for (Scheme scheme : {Scheme::bacc, Scheme::letcc}) {
        const PipelineContext ctx(small_config(scheme));
        const auto data = sample_trial_data(9, 20, 0, 8, 1);
        const auto enc = encode(ctx, data);
        const auto pattern = pattern_from_flags({0, 1, 0, 0, 1, 0, 0, 0, 1, 0,
                                                 0, 0, 0, 1, 0, 0, 1, 0, 0, 0});
        const auto sur = compute_with_stragglers(ctx, enc.coded_inputs, f, pattern);
        const auto r = decode_and_score(ctx, sur, enc, data, f);
        CHECK(r.total_loss <= 1e-20);
        CHECK(r.survivor_count == 15);
    }
}

TEST_CASE("affine composite gives a vanishing decoder term") {
    // data on a line through the alpha points and f = identity: the composite
    // f(u_enc(.)) is affine, which the spline decoder reproduces exactly
    SchemeConfig cfg = small_config(Scheme::letcc);
    const PipelineContext ctx(cfg);
    std::vector<std::vector<double>> data;
    for (int k = 0; k < cfg.k; ++k) data.push_back({0.7 * ctx.alpha[k] - 0.2});
    const auto f = make_polynomial(std::vector<double>{0.0, 1.0});
    const auto enc = encode(ctx, data);
    const auto pattern = pattern_from_flags({0, 0, 1, 0, 0, 1, 0, 0, 0, 0,
                                             1, 0, 0, 0, 1, 0, 0, 0, 0, 0});
    const auto sur = compute_with_stragglers(ctx, enc.coded_inputs, f, pattern);
    const auto r = decode_and_score(ctx, sur, enc, data, f);
    CHECK(r.l_dec <= 1e-18);
}

TEST_CASE("per-trial loss decomposition inequality") {
    rng::Stream seed_stream(71, {0});
    const auto f = make_xsinx();
    for (int trial = 0; trial < 1000; ++trial) {
        const Scheme scheme = trial % 2 == 0 ? Scheme::bacc : Scheme::letcc;
        const PipelineContext ctx(small_config(scheme, 8, 24));
        const auto data = sample_trial_data(1000 + trial, 24, trial, 8, 1);
        StragglerDraw draw;
        draw.p = 0.05 + 0.25 * seed_stream.next_unit();
        rng::Stream ps(90, {static_cast<std::uint64_t>(trial)});
        const auto r = run_trial(ctx, f, data, draw, ps);
        CHECK(r.total_loss <= r.l_dec + r.l_enc + 1e-9);
        CHECK(r.total_loss >= 0.0);
        CHECK(r.l_dec >= 0.0);
        CHECK(r.l_enc >= 0.0);
        CHECK(r.l_enc <= 1e-16);  // interpolating encoder
    }
}

TEST_CASE("no stragglers equals the full-set decode") {
    const auto f = make_xsinx();
    for (Scheme scheme : {Scheme::bacc, Scheme::letcc}) {
        const PipelineContext ctx(small_config(scheme));
        const auto data = sample_trial_data(17, 20, 0, 8, 1);
        StragglerDraw zero_p;
        zero_p.p = 0.0;
        rng::Stream ps(1, {1});
        const auto via_trial = run_trial(ctx, f, data, zero_p, ps);

        const auto enc = encode(ctx, data);
        const auto sur = compute_with_stragglers(
            ctx, enc.coded_inputs, f, pattern_from_flags(std::vector<std::uint8_t>(20, 0)));
        const auto direct = decode_and_score(ctx, sur, enc, data, f);
        CHECK(via_trial.total_loss == direct.total_loss);
        CHECK(via_trial.l_dec == direct.l_dec);
        CHECK(via_trial.resampled == false);

        StragglerDraw zero_s;
        zero_s.mode = StragglerMode::fixed_count;
        zero_s.s = 0;
        rng::Stream ps2(2, {2});
        const auto fixed = run_trial(ctx, f, data, zero_s, ps2);
        CHECK(fixed.total_loss == via_trial.total_loss);  // same full pattern bitwise
        CHECK(fixed.l_dec == via_trial.l_dec);
        CHECK(fixed.l_enc == via_trial.l_enc);
    }
}

TEST_CASE("trials replay bitwise from the same stream key") {
    const auto f = make_xsinx();
    const PipelineContext ctx(small_config(Scheme::letcc, 8, 32));
    const auto data = sample_trial_data(23, 32, 4, 8, 1);
    StragglerDraw draw;
    draw.p = 0.2;
    rng::Stream a(600, {5});
    rng::Stream b(600, {5});
    const auto ra = run_trial(ctx, f, data, draw, a);
    const auto rb = run_trial(ctx, f, data, draw, b);
    CHECK(ra.total_loss == rb.total_loss);
    CHECK(ra.l_dec == rb.l_dec);
    CHECK(ra.l_enc == rb.l_enc);
    CHECK(ra.longest_run == rb.longest_run);
    CHECK(ra.survivor_count == rb.survivor_count);
}

TEST_CASE("mirrored data and pattern give the mirrored losses") {
    const auto f = make_xsinx();  // even, so mirroring is an exact symmetry
    for (Scheme scheme : {Scheme::bacc, Scheme::letcc}) {
        const PipelineContext ctx(small_config(scheme, 8, 10));
        const auto data = sample_trial_data(29, 10, 0, 8, 1);
        const auto pattern = pattern_from_flags({0, 1, 0, 0, 0, 0, 1, 0, 1, 0});

        std::vector<std::vector<double>> mirrored_data(data.rbegin(), data.rend());
        auto mirrored_flags = pattern.straggler_flags;
        std::reverse(mirrored_flags.begin(), mirrored_flags.end());

        const auto enc = encode(ctx, data);
        const auto sur = compute_with_stragglers(ctx, enc.coded_inputs, f, pattern);
        const auto r = decode_and_score(ctx, sur, enc, data, f);

        const auto menc = encode(ctx, mirrored_data);
        const auto msur = compute_with_stragglers(ctx, menc.coded_inputs, f,
                                                  pattern_from_flags(mirrored_flags));
        const auto mr = decode_and_score(ctx, msur, menc, mirrored_data, f);

        CHECK(mr.total_loss == doctest::Approx(r.total_loss).epsilon(1e-12));
        CHECK(mr.l_dec == doctest::Approx(r.l_dec).epsilon(1e-12));
    }
}

TEST_CASE("losses degrade with the straggler probability") {
    const auto f = make_xsinx();
    for (Scheme scheme : {Scheme::bacc, Scheme::letcc}) {
        const PipelineContext ctx(small_config(scheme, 16, 100));
        const int trials = 1000;
        double mean[2] = {0.0, 0.0};
        double sq[2] = {0.0, 0.0};
        const double ps[2] = {0.05, 0.2};
        for (int which = 0; which < 2; ++which) {
            StragglerDraw draw;
            draw.p = ps[which];
            for (int t = 0; t < trials; ++t) {
                const auto data = sample_trial_data(31, 100, t, 16, 1);
                rng::Stream stream(47, {static_cast<std::uint64_t>(which),
                                        static_cast<std::uint64_t>(t)});
                const auto r = run_trial(ctx, f, data, draw, stream);
                mean[which] += r.total_loss;
                sq[which] += r.total_loss * r.total_loss;
            }
            mean[which] /= trials;
            sq[which] = (sq[which] - trials * mean[which] * mean[which]) / (trials - 1);
        }
        const double sep = 3.0 * std::sqrt(sq[0] / trials + sq[1] / trials);
        CHECK(mean[1] - mean[0] >= sep);
    }
}

TEST_CASE("single-trial regression values") {
    // reference values pinned from the first run of this configuration
    const auto f = make_xsinx();
    const auto data = sample_trial_data(11, 100, 0, 16, 1);
    StragglerDraw draw;
    draw.p = 0.1;

    SchemeConfig sc;
    sc.k = 16;
    sc.n = 100;
    sc.scheme = Scheme::letcc;
    rng::Stream ps(11, {99});
    const auto letcc = run_trial(PipelineContext(sc), f, data, draw, ps);
    CHECK(letcc.total_loss == doctest::Approx(3.2913547451080851e-4).epsilon(1e-9));
    CHECK(letcc.longest_run == 3);
    CHECK(letcc.survivor_count == 88);

    sc.scheme = Scheme::bacc;
    rng::Stream ps2(11, {99});
    const auto bacc = run_trial(PipelineContext(sc), f, data, draw, ps2);
    CHECK(bacc.total_loss == doctest::Approx(1.6129906866406585e-3).epsilon(1e-9));
    CHECK(bacc.longest_run == 3);  // same pattern stream as the letcc trial
    CHECK(bacc.survivor_count == 88);
}

TEST_CASE("degenerate configurations surface after bounded resampling") {
    // n=2, s=1 in letcc mode can never decode: every draw kills one server
    const PipelineContext ctx(small_config(Scheme::letcc, 2, 2));
    const auto f = make_xsinx();
    const auto data = sample_trial_data(1, 2, 0, 2, 1);
    StragglerDraw draw;
    draw.mode = StragglerMode::fixed_count;
    draw.s = 1;
    rng::Stream stream(3, {3});
    CHECK_THROWS_AS(run_trial(ctx, f, data, draw, stream), DegenerateConfiguration);
}

TEST_CASE("resampling is flagged and counted") {
    // letcc with n=3, p=0.75: patterns with < 2 survivors are redrawn
    const PipelineContext ctx(small_config(Scheme::letcc, 4, 3));
    const auto f = make_xsinx();
    const auto data = sample_trial_data(2, 3, 0, 4, 1);
    StragglerDraw draw;
    draw.p = 0.75;
    bool saw_resample = false;
    for (int t = 0; t < 200 && !saw_resample; ++t) {
        rng::Stream stream(100, {static_cast<std::uint64_t>(t)});
        const auto r = run_trial(ctx, f, data, draw, stream);
        CHECK(r.survivor_count >= 2);
        if (r.resampled) {
            CHECK(r.resample_count >= 1);
            saw_resample = true;
        }
    }
    CHECK(saw_resample);
}
