#include "stragglesim/pipeline.hpp"

#include <cmath>
#include <string>

#include "stragglesim/kahan.hpp"

namespace stragglesim {

namespace {

double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t c = 0; c < a.size(); ++c) {
        const double d = a[c] - b[c];
        acc += d * d;
    }
    return acc;
}

}  // namespace

int min_survivors(Scheme scheme) {
    return scheme == Scheme::letcc ? 2 : 1;
}

PipelineContext::PipelineContext(const SchemeConfig& config)
    : cfg(config), alpha(make_points(config.alpha_points, config.k)),
      beta(make_points(config.beta_points, config.n)) {
    if (config.n < 2) throw std::invalid_argument("scheme config: need at least 2 servers");
    if (config.k < 1) throw std::invalid_argument("scheme config: need at least 1 data point");
    if (config.scheme == Scheme::letcc && config.k < 2)
        throw std::invalid_argument("scheme config: the spline encoder needs k >= 2");
    if (!(config.lambda_enc >= 0.0 && config.lambda_dec >= 0.0))
        throw std::invalid_argument("scheme config: smoothing weights must be >= 0");
}

std::vector<double> EncodeResult::evaluate(double z) const {
    return std::visit([z](const auto& m) { return m.evaluate(z); }, model);
}

EncodeResult encode(const PipelineContext& ctx, const std::vector<std::vector<double>>& data,
                    int enc_norm) {
    if (static_cast<int>(data.size()) != ctx.cfg.k)
        throw std::invalid_argument("encode: expected exactly k data points");
    const int norm = enc_norm > 0 ? enc_norm : ctx.cfg.k;

    EncodeResult result;
    if (ctx.cfg.scheme == Scheme::bacc) {
        result.model = fit_berrut(ctx.alpha.values, data);
    } else {
        result.model = fit_smoothing_spline(ctx.alpha.values, data, ctx.cfg.lambda_enc, norm);
    }
    result.coded_inputs.reserve(static_cast<std::size_t>(ctx.cfg.n));
    for (int s = 0; s < ctx.cfg.n; ++s) result.coded_inputs.push_back(result.evaluate(ctx.beta[s]));
    return result;
}

SurvivorResults compute_with_stragglers(const PipelineContext& ctx,
                                        const std::vector<std::vector<double>>& coded_inputs,
                                        const ComputeFunction& f, const StragglerPattern& pattern) {
    if (pattern.n_servers != ctx.cfg.n)
        throw std::invalid_argument("compute_with_stragglers: pattern length differs from n");
    const int needed = min_survivors(ctx.cfg.scheme);
    if (static_cast<int>(pattern.surviving.size()) < needed)
        throw InsufficientSurvivors("only " + std::to_string(pattern.surviving.size()) +
                                    " survivors, decoder needs " + std::to_string(needed));
    SurvivorResults out;
    out.indices = pattern.surviving;
    out.betas.reserve(out.indices.size());
    out.values.reserve(out.indices.size());
    for (int v : out.indices) {
        out.betas.push_back(ctx.beta[v]);
        out.values.push_back(f(coded_inputs[static_cast<std::size_t>(v)]));
    }
    return out;
}

TrialResult decode_and_score(const PipelineContext& ctx, const SurvivorResults& survivors,
                             const EncodeResult& enc, const std::vector<std::vector<double>>& data,
                             const ComputeFunction& f) {
    std::variant<BerrutInterpolant, SplineModel> decoder;
    if (ctx.cfg.scheme == Scheme::bacc) {
        decoder = fit_berrut(survivors.betas, survivors.values);
    } else {
        decoder = fit_smoothing_spline(survivors.betas, survivors.values, ctx.cfg.lambda_dec,
                                       static_cast<int>(survivors.betas.size()));
    }

    KahanSum total;
    KahanSum dec_term;
    KahanSum enc_term;
    for (int k = 0; k < ctx.cfg.k; ++k) {
        const double ak = ctx.alpha[k];
        const auto fhat = std::visit([ak](const auto& m) { return m.evaluate(ak); }, decoder);
        const auto f_enc = f(enc.evaluate(ak));
        const auto f_true = f(data[static_cast<std::size_t>(k)]);
        total.add(squared_distance(fhat, f_true));
        dec_term.add(squared_distance(fhat, f_enc));
        enc_term.add(squared_distance(f_enc, f_true));
    }

    TrialResult r;
    const double kd = static_cast<double>(ctx.cfg.k);
    r.total_loss = total.value() / kd;
    r.l_dec = 2.0 * dec_term.value() / kd;
    r.l_enc = 2.0 * enc_term.value() / kd;
    r.survivor_count = static_cast<int>(survivors.indices.size());
    return r;
}

TrialResult run_trial(const PipelineContext& ctx, const ComputeFunction& f,
                      const std::vector<std::vector<double>>& data, const StragglerDraw& draw,
                      rng::Stream& pattern_stream) {
    const int needed = min_survivors(ctx.cfg.scheme);
    int resamples = 0;
    StragglerPattern pattern;
    for (;;) {
        pattern = draw.mode == StragglerMode::bernoulli
                      ? sample_bernoulli_pattern(ctx.cfg.n, draw.p, pattern_stream)
                      : sample_fixed_count_pattern(ctx.cfg.n, draw.s, pattern_stream);
        if (static_cast<int>(pattern.surviving.size()) >= needed) break;
        if (++resamples > 1000)
            throw DegenerateConfiguration("no decodable straggler pattern in 1000 draws (n=" +
                                          std::to_string(ctx.cfg.n) + ")");
    }

    const int enc_norm = ctx.cfg.enc_normalization == EncNormalization::survivor_count
                             ? static_cast<int>(pattern.surviving.size())
                             : ctx.cfg.k;
    const auto enc = encode(ctx, data, enc_norm);
    const auto survivors = compute_with_stragglers(ctx, enc.coded_inputs, f, pattern);
    TrialResult r = decode_and_score(ctx, survivors, enc, data, f);
    r.longest_run = longest_run(pattern);
    r.resampled = resamples > 0;
    r.resample_count = resamples;
    return r;
}

std::string_view scheme_name(Scheme scheme) {
    return scheme == Scheme::bacc ? "bacc" : "letcc";
}

Scheme scheme_from_name(std::string_view name) {
    if (name == "bacc") return Scheme::bacc;
    if (name == "letcc") return Scheme::letcc;
    throw std::invalid_argument("unknown scheme '" + std::string(name) + "' (expected bacc|letcc)");
}

std::string_view straggler_mode_name(StragglerMode mode) {
    return mode == StragglerMode::bernoulli ? "bernoulli" : "fixed";
}

}  // namespace stragglesim
