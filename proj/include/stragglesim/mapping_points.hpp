#pragma once

#include <span>
#include <string_view>
#include <vector>

namespace stragglesim {

enum class PointKind { uniform, chebyshev_first, chebyshev_second };

/// Ordered abscissae on (-1, 1): alpha points carry the data, beta points the
/// servers. Chebyshev-second includes the endpoints -1 and +1 exactly; the
/// other families are strictly interior.
struct MappingPoints {
    std::vector<double> values;  // strictly increasing
    PointKind kind = PointKind::uniform;

    int size() const { return static_cast<int>(values.size()); }
    double operator[](int i) const { return values[static_cast<std::size_t>(i)]; }
};

/// Consecutive-gap statistics. delta_max is taken over the sequence augmented
/// with the domain boundary (-1 prepended, +1 appended); delta_min over the
/// interior gaps only, so it stays positive for point sets touching the ends.
struct MeshStats {
    double delta_max = 0.0;
    double delta_min = 0.0;
    double ratio = 0.0;  // delta_max / delta_min
};

MappingPoints uniform_points(int n);
MappingPoints chebyshev_first(int n);
MappingPoints chebyshev_second(int n);
MappingPoints make_points(PointKind kind, int n);

MeshStats mesh_stats(const MappingPoints& points);

/// Same gap statistics on the subsequence picked out by `surviving`
/// (0-based indices, strictly increasing, non-empty).
MeshStats subset_mesh_stats(const MappingPoints& points, std::span<const int> surviving);

/// Largest over interior gaps of min(gap / left neighbour, gap / right
/// neighbour) on the surviving subsequence; the first gap has no left
/// neighbour and the last no right one, so those candidates are skipped.
/// Needs >= 3 surviving points. Bounded by subset_mesh_stats(...).ratio.
double local_mesh_ratio(const MappingPoints& points, std::span<const int> surviving);

PointKind point_kind_from_name(std::string_view name);  // "uniform" | "chebyshev1" | "chebyshev2"
std::string_view point_kind_name(PointKind kind);

}  // namespace stragglesim
