#include "stragglesim/berrut.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace stragglesim {

BerrutInterpolant fit_berrut(std::vector<double> nodes, std::vector<std::vector<double>> values) {
    if (nodes.empty()) throw std::invalid_argument("fit_berrut: need at least one node");
    if (nodes.size() != values.size())
        throw std::invalid_argument("fit_berrut: node/value counts differ");
    for (std::size_t j = 0; j + 1 < nodes.size(); ++j)
        if (!(nodes[j] < nodes[j + 1]))
            throw std::invalid_argument("fit_berrut: nodes must be strictly increasing");
    const std::size_t dim = values.front().size();
    if (dim == 0) throw std::invalid_argument("fit_berrut: value vectors must be non-empty");
    for (const auto& v : values)
        if (v.size() != dim) throw std::invalid_argument("fit_berrut: inconsistent value dimensions");

    BerrutInterpolant interp;
    interp.signs.resize(nodes.size());
    for (std::size_t j = 0; j < nodes.size(); ++j) interp.signs[j] = (j % 2 == 0) ? 1.0 : -1.0;
    interp.nodes = std::move(nodes);
    interp.values = std::move(values);
    interp.dim = static_cast<int>(dim);
    return interp;
}

std::vector<double> BerrutInterpolant::evaluate(double z) const {
    const std::size_t n = nodes.size();
    const double eps = 1e-13 * (nodes.back() - nodes.front());
    for (std::size_t j = 0; j < n; ++j)
        if (std::abs(z - nodes[j]) <= eps) return values[j];

    std::vector<double> num(static_cast<std::size_t>(dim), 0.0);
    double denom = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double w = signs[j] / (z - nodes[j]);
        denom += w;
        const auto& y = values[j];
        for (std::size_t c = 0; c < num.size(); ++c) num[c] += w * y[c];
    }
    if (std::abs(denom) < 1e-300)
        throw std::runtime_error("berrut evaluate: numerical pole at z = " + std::to_string(z));
    for (double& c : num) c /= denom;
    return num;
}

}  // namespace stragglesim
