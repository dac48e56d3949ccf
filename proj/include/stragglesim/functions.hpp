#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace stragglesim {

/// A computing task f: R^d -> R^m handed to the servers. eval is pure and
/// deterministic; repeated calls are bitwise identical.
struct ComputeFunction {
    std::string name;
    int in_dim = 1;
    int out_dim = 1;
    std::function<std::vector<double>(std::span<const double>)> eval;

    std::vector<double> operator()(std::span<const double> x) const { return eval(x); }
};

/// f(x) = x sin(x), the scalar benchmark task.
ComputeFunction make_xsinx();

/// Fixed-weight fully connected network with tanh hidden layers and a softmax
/// output; weights are drawn once from the seeded stream. With zero_weights
/// the network outputs the uniform distribution 1/m regardless of input.
ComputeFunction make_fixed_mlp(std::span<const int> layer_dims, std::uint64_t seed,
                               bool zero_weights = false);

/// Scalar polynomial with ascending coefficients, evaluated by Horner.
ComputeFunction make_polynomial(std::span<const double> coeffs);

/// Parameter block for the registry; `name` picks the family, the rest are
/// per-family parameters.
struct FunctionSpec {
    std::string name = "xsinx";
    std::vector<int> layer_dims = {1024, 64, 10};  // mlp
    std::uint64_t mlp_seed = 1;                    // mlp
    bool zero_weights = false;                     // mlp
    std::vector<double> coeffs = {0.0, 1.0};       // poly
};

/// Registry lookup over {"xsinx", "mlp", "poly"}; unknown names throw.
ComputeFunction make_function(const FunctionSpec& spec);

}  // namespace stragglesim
