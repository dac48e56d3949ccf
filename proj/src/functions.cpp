#include "stragglesim/functions.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

#include "stragglesim/rng.hpp"

namespace stragglesim {

namespace {

void check_input_dim(std::span<const double> x, int expected, const char* name) {
    if (static_cast<int>(x.size()) != expected)
        throw std::invalid_argument(std::string(name) + ": input dimension mismatch");
}

struct MlpLayer {
    std::vector<double> weights;  // row-major, out x in
    std::vector<double> biases;
    int in = 0;
    int out = 0;
};

}  // namespace

ComputeFunction make_xsinx() {
    ComputeFunction f;
    f.name = "xsinx";
    f.in_dim = 1;
    f.out_dim = 1;
    f.eval = [](std::span<const double> x) {
        check_input_dim(x, 1, "xsinx");
        return std::vector<double>{x[0] * std::sin(x[0])};
    };
    return f;
}

ComputeFunction make_polynomial(std::span<const double> coeffs) {
    if (coeffs.empty()) throw std::invalid_argument("make_polynomial: need at least one coefficient");
    auto c = std::make_shared<std::vector<double>>(coeffs.begin(), coeffs.end());
    ComputeFunction f;
    f.name = "poly";
    f.in_dim = 1;
    f.out_dim = 1;
    f.eval = [c](std::span<const double> x) {
        check_input_dim(x, 1, "poly");
        double acc = 0.0;
        for (std::size_t i = c->size(); i-- > 0;) acc = acc * x[0] + (*c)[i];
        return std::vector<double>{acc};
    };
    return f;
}

ComputeFunction make_fixed_mlp(std::span<const int> layer_dims, std::uint64_t seed,
                               bool zero_weights) {
    if (layer_dims.size() < 2)
        throw std::invalid_argument("make_fixed_mlp: need at least input and output dims");
    for (int d : layer_dims)
        if (d < 1) throw std::invalid_argument("make_fixed_mlp: layer dims must be positive");

    auto layers = std::make_shared<std::vector<MlpLayer>>();
    rng::Stream stream(seed, {0x6d6c70ull});  // weights drawn once, then frozen
    for (std::size_t l = 0; l + 1 < layer_dims.size(); ++l) {
        MlpLayer layer;
        layer.in = layer_dims[l];
        layer.out = layer_dims[l + 1];
        const double scale = zero_weights ? 0.0 : 1.0 / std::sqrt(static_cast<double>(layer.in));
        layer.weights.resize(static_cast<std::size_t>(layer.in) * layer.out);
        layer.biases.resize(static_cast<std::size_t>(layer.out));
        for (auto& w : layer.weights) w = scale * (2.0 * stream.next_unit() - 1.0);
        for (auto& b : layer.biases) b = scale * (2.0 * stream.next_unit() - 1.0);
        layers->push_back(std::move(layer));
    }

    ComputeFunction f;
    f.name = "mlp";
    f.in_dim = layer_dims.front();
    f.out_dim = layer_dims.back();
    f.eval = [layers, in = f.in_dim](std::span<const double> x) {
        check_input_dim(x, in, "mlp");
        std::vector<double> act(x.begin(), x.end());
        std::vector<double> next;
        for (std::size_t l = 0; l < layers->size(); ++l) {
            const auto& layer = (*layers)[l];
            next.assign(static_cast<std::size_t>(layer.out), 0.0);
            for (int o = 0; o < layer.out; ++o) {
                double z = layer.biases[static_cast<std::size_t>(o)];
                const double* row = layer.weights.data() + static_cast<std::size_t>(o) * layer.in;
                for (int i = 0; i < layer.in; ++i) z += row[i] * act[static_cast<std::size_t>(i)];
                next[static_cast<std::size_t>(o)] = z;
            }
            act.swap(next);
            if (l + 1 < layers->size())
                for (double& v : act) v = std::tanh(v);
        }
        // softmax head
        double zmax = act.front();
        for (double v : act) zmax = std::max(zmax, v);
        double total = 0.0;
        for (double& v : act) {
            v = std::exp(v - zmax);
            total += v;
        }
        for (double& v : act) v /= total;
        return act;
    };
    return f;
}

ComputeFunction make_function(const FunctionSpec& spec) {
    if (spec.name == "xsinx") return make_xsinx();
    if (spec.name == "poly") return make_polynomial(spec.coeffs);
    if (spec.name == "mlp") return make_fixed_mlp(spec.layer_dims, spec.mlp_seed, spec.zero_weights);
    throw std::invalid_argument("unknown function '" + spec.name + "' (expected xsinx|mlp|poly)");
}

}  // namespace stragglesim
