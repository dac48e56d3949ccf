#pragma once

#include <stdexcept>
#include <variant>
#include <vector>

#include "stragglesim/berrut.hpp"
#include "stragglesim/functions.hpp"
#include "stragglesim/mapping_points.hpp"
#include "stragglesim/rng.hpp"
#include "stragglesim/spline.hpp"
#include "stragglesim/straggler_model.hpp"

namespace stragglesim {

enum class Scheme { bacc, letcc };
enum class StragglerMode { bernoulli, fixed_count };

/// Divisor of the encoder data-fit term. The printed objective is ambiguous
/// on this point, so both readings are runnable; data_count is the default.
/// Irrelevant when lambda_enc = 0.
enum class EncNormalization { data_count, survivor_count };

struct SchemeConfig {
    Scheme scheme = Scheme::letcc;
    int k = 16;  // data points
    int n = 100; // servers
    PointKind alpha_points = PointKind::chebyshev_first;
    PointKind beta_points = PointKind::chebyshev_second;
    double lambda_enc = 0.0;
    double lambda_dec = 0.0;
    EncNormalization enc_normalization = EncNormalization::data_count;
};

/// Per-trial losses. total_loss is the plain mean squared recovery error;
/// l_dec and l_enc are the two decomposition terms, each carrying its
/// factor 2, so total_loss <= l_dec + l_enc always holds.
struct TrialResult {
    double total_loss = 0.0;
    double l_dec = 0.0;
    double l_enc = 0.0;
    int survivor_count = 0;
    int longest_run = 0;
    bool resampled = false;
    int resample_count = 0;
};

/// How stragglers are drawn for a trial: independent Bernoulli(p) flags, or
/// exactly s stragglers chosen uniformly at random.
struct StragglerDraw {
    StragglerMode mode = StragglerMode::bernoulli;
    double p = 0.0;
    int s = 0;
};

struct EncodeResult {
    std::variant<BerrutInterpolant, SplineModel> model;
    std::vector<std::vector<double>> coded_inputs;  // one per server

    std::vector<double> evaluate(double z) const;
};

struct SurvivorResults {
    std::vector<int> indices;
    std::vector<double> betas;
    std::vector<std::vector<double>> values;  // f applied to surviving coded inputs
};

struct InsufficientSurvivors : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DegenerateConfiguration : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Fewest survivors the scheme's decoder can be fitted on.
int min_survivors(Scheme scheme);

/// Precomputed mapping points for one scheme configuration.
struct PipelineContext {
    SchemeConfig cfg;
    MappingPoints alpha;
    MappingPoints beta;

    explicit PipelineContext(const SchemeConfig& cfg);
};

/// Step 1: fit the encoder through (alpha_k, x_k) and evaluate it at every
/// beta_n. enc_norm <= 0 means "use k".
EncodeResult encode(const PipelineContext& ctx, const std::vector<std::vector<double>>& data,
                    int enc_norm = 0);

/// Step 2: apply f to the coded inputs of the surviving servers only. Throws
/// InsufficientSurvivors when fewer than min_survivors(scheme) answered.
SurvivorResults compute_with_stragglers(const PipelineContext& ctx,
                                        const std::vector<std::vector<double>>& coded_inputs,
                                        const ComputeFunction& f, const StragglerPattern& pattern);

/// Step 3: fit the decoder on the survivor results, read it off at the alpha
/// points, and score the recovery against the true f(x_k).
TrialResult decode_and_score(const PipelineContext& ctx, const SurvivorResults& survivors,
                             const EncodeResult& enc, const std::vector<std::vector<double>>& data,
                             const ComputeFunction& f);

/// One Monte Carlo round: draw a pattern (resampling while the survivor set
/// is too small to decode, up to 1000 times), then encode / compute / decode.
TrialResult run_trial(const PipelineContext& ctx, const ComputeFunction& f,
                      const std::vector<std::vector<double>>& data, const StragglerDraw& draw,
                      rng::Stream& pattern_stream);

std::string_view scheme_name(Scheme scheme);
Scheme scheme_from_name(std::string_view name);
std::string_view straggler_mode_name(StragglerMode mode);

}  // namespace stragglesim
