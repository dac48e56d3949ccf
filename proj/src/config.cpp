#include "stragglesim/config.hpp"

#include <set>
#include <string>

#include "json.hpp"

namespace stragglesim {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& key, const std::string& what) {
    throw ConfigError("config key '" + key + "': " + what);
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& scope) {
    for (const auto& item : obj.items())
        if (!allowed.contains(item.key()))
            throw ConfigError("unknown config key '" + scope + item.key() + "'");
}

double get_number(const json& obj, const std::string& key, double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) fail(key, "expected a number");
    return obj[key].get<double>();
}

long get_integer(const json& obj, const std::string& key, long fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number_integer()) fail(key, "expected an integer");
    return obj[key].get<long>();
}

bool get_bool(const json& obj, const std::string& key, bool fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_boolean()) fail(key, "expected true or false");
    return obj[key].get<bool>();
}

std::string get_string(const json& obj, const std::string& key, const std::string& fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_string()) fail(key, "expected a string");
    return obj[key].get<std::string>();
}

FunctionSpec parse_function(const json& obj) {
    if (!obj.is_object()) fail("function", "expected an object");
    reject_unknown_keys(obj, {"name", "layer_dims", "seed", "zero_weights", "coeffs"},
                        "function.");
    FunctionSpec spec;
    spec.name = get_string(obj, "name", "xsinx");
    if (spec.name != "xsinx" && spec.name != "mlp" && spec.name != "poly")
        fail("function.name", "expected xsinx|mlp|poly");
    if (obj.contains("layer_dims")) {
        if (!obj["layer_dims"].is_array() || obj["layer_dims"].size() < 2)
            fail("function.layer_dims", "expected an array of at least 2 layer sizes");
        spec.layer_dims.clear();
        for (const auto& v : obj["layer_dims"]) {
            if (!v.is_number_integer() || v.get<long>() < 1)
                fail("function.layer_dims", "layer sizes must be positive integers");
            spec.layer_dims.push_back(static_cast<int>(v.get<long>()));
        }
    }
    spec.mlp_seed = static_cast<std::uint64_t>(get_integer(obj, "seed", 1));
    spec.zero_weights = get_bool(obj, "zero_weights", false);
    if (obj.contains("coeffs")) {
        if (!obj["coeffs"].is_array() || obj["coeffs"].empty())
            fail("function.coeffs", "expected a non-empty array of numbers");
        spec.coeffs.clear();
        for (const auto& v : obj["coeffs"]) {
            if (!v.is_number()) fail("function.coeffs", "coefficients must be numbers");
            spec.coeffs.push_back(v.get<double>());
        }
    }
    return spec;
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("config root must be a JSON object");
    reject_unknown_keys(root,
                        {"schemes", "n_grid", "k", "mode", "p_grid", "s_grid", "trials", "seed",
                         "alpha_points", "beta_points", "lambda_enc", "lambda_dec",
                         "enc_normalization", "function", "fixed_data", "threads", "out"},
                        "");

    ExperimentConfig config;
    SweepConfig& sweep = config.sweep;

    if (root.contains("schemes")) {
        if (!root["schemes"].is_array() || root["schemes"].empty())
            fail("schemes", "expected a non-empty array");
        sweep.schemes.clear();
        for (const auto& v : root["schemes"]) {
            if (!v.is_string()) fail("schemes", "entries must be strings");
            try {
                sweep.schemes.push_back(scheme_from_name(v.get<std::string>()));
            } catch (const std::invalid_argument& e) {
                fail("schemes", e.what());
            }
        }
    }

    if (root.contains("n_grid")) {
        if (!root["n_grid"].is_array() || root["n_grid"].empty())
            fail("n_grid", "expected a non-empty array of integers");
        sweep.n_grid.clear();
        for (const auto& v : root["n_grid"]) {
            if (!v.is_number_integer()) fail("n_grid", "entries must be integers");
            sweep.n_grid.push_back(static_cast<int>(v.get<long>()));
        }
    }
    for (int n : sweep.n_grid)
        if (n < 4) fail("n_grid", "every N must be >= 4");

    sweep.k = static_cast<int>(get_integer(root, "k", sweep.k));
    if (sweep.k < 1) fail("k", "must be >= 1");
    for (Scheme s : sweep.schemes)
        if (s == Scheme::letcc && sweep.k < 2) fail("k", "letcc needs k >= 2");

    const std::string mode = get_string(root, "mode", "bernoulli");
    if (mode == "bernoulli")
        sweep.mode = StragglerMode::bernoulli;
    else if (mode == "fixed")
        sweep.mode = StragglerMode::fixed_count;
    else
        fail("mode", "expected bernoulli|fixed");

    if (root.contains("p_grid")) {
        if (!root["p_grid"].is_array()) fail("p_grid", "expected an array of numbers");
        sweep.p_grid.clear();
        for (const auto& v : root["p_grid"]) {
            if (!v.is_number()) fail("p_grid", "entries must be numbers");
            const double p = v.get<double>();
            if (!(p >= 0.0 && p < 1.0)) fail("p_grid", "probabilities must lie in [0, 1)");
            sweep.p_grid.push_back(p);
        }
    }
    if (root.contains("s_grid")) {
        if (!root["s_grid"].is_array()) fail("s_grid", "expected an array of integers");
        sweep.s_grid.clear();
        for (const auto& v : root["s_grid"]) {
            if (!v.is_number_integer()) fail("s_grid", "entries must be integers");
            const long s = v.get<long>();
            if (s < 0) fail("s_grid", "straggler counts must be >= 0");
            sweep.s_grid.push_back(static_cast<int>(s));
        }
    }
    if (sweep.mode == StragglerMode::bernoulli && sweep.p_grid.empty())
        fail("p_grid", "bernoulli mode needs at least one probability");
    if (sweep.mode == StragglerMode::fixed_count) {
        if (sweep.s_grid.empty()) fail("s_grid", "fixed mode needs at least one count");
        for (int s : sweep.s_grid)
            for (int n : sweep.n_grid)
                if (s > n) fail("s_grid", "straggler count exceeds the smallest N");
    }

    sweep.trials = static_cast<int>(get_integer(root, "trials", sweep.trials));
    if (sweep.trials < 1) fail("trials", "must be >= 1");
    sweep.seed = static_cast<std::uint64_t>(get_integer(root, "seed", 0));

    try {
        sweep.alpha_points = point_kind_from_name(get_string(root, "alpha_points", "chebyshev1"));
    } catch (const std::invalid_argument& e) {
        fail("alpha_points", e.what());
    }
    try {
        sweep.beta_points = point_kind_from_name(get_string(root, "beta_points", "chebyshev2"));
    } catch (const std::invalid_argument& e) {
        fail("beta_points", e.what());
    }

    sweep.lambda_enc = get_number(root, "lambda_enc", 0.0);
    sweep.lambda_dec = get_number(root, "lambda_dec", 0.0);
    if (sweep.lambda_enc < 0.0) fail("lambda_enc", "must be >= 0");
    if (sweep.lambda_dec < 0.0) fail("lambda_dec", "must be >= 0");

    const std::string enc_norm = get_string(root, "enc_normalization", "k");
    if (enc_norm == "k")
        sweep.enc_normalization = EncNormalization::data_count;
    else if (enc_norm == "survivors")
        sweep.enc_normalization = EncNormalization::survivor_count;
    else
        fail("enc_normalization", "expected k|survivors");

    if (root.contains("function")) sweep.function = parse_function(root["function"]);
    sweep.fixed_data = get_bool(root, "fixed_data", false);
    sweep.threads = static_cast<int>(get_integer(root, "threads", 0));
    if (sweep.threads < 0) fail("threads", "must be >= 0");
    config.out = get_string(root, "out", "");
    return config;
}

}  // namespace stragglesim
