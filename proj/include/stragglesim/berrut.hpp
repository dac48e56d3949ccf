#pragma once

#include <vector>

namespace stragglesim {

/// Barycentric rational interpolant with alternating unit weights. The sign of
/// the j-th weight is (-1)^j by position in the sorted node list, which keeps
/// the denominator free of poles on the node hull for any node spacing.
struct BerrutInterpolant {
    std::vector<double> nodes;                // strictly increasing
    std::vector<std::vector<double>> values;  // one value vector per node
    std::vector<double> signs;                // +1/-1, strictly alternating
    int dim = 0;

    /// Evaluate at z. Within 1e-13 * span of a node the stored value is
    /// returned directly (removable singularity of the barycentric form).
    std::vector<double> evaluate(double z) const;
};

BerrutInterpolant fit_berrut(std::vector<double> nodes, std::vector<std::vector<double>> values);

}  // namespace stragglesim
