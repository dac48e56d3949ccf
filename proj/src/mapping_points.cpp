#include "stragglesim/mapping_points.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace stragglesim {

namespace {

constexpr double kPi = std::numbers::pi;

void validate_subset(const MappingPoints& points, std::span<const int> surviving) {
    if (surviving.empty()) throw std::invalid_argument("subset of mapping points must be non-empty");
    int prev = -1;
    for (int i : surviving) {
        if (i < 0 || i >= points.size())
            throw std::invalid_argument("surviving index " + std::to_string(i) + " out of range");
        if (i <= prev) throw std::invalid_argument("surviving indices must be strictly increasing");
        prev = i;
    }
}

MeshStats gap_stats(std::span<const double> values) {
    if (values.size() < 2)
        throw std::invalid_argument("mesh statistics need at least 2 points");
    // delta_max over the sequence with the domain boundary prepended/appended,
    // delta_min over the interior gaps only.
    double dmax = values.front() - (-1.0);
    dmax = std::max(dmax, 1.0 - values.back());
    double dmin = values[1] - values[0];
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        const double gap = values[i + 1] - values[i];
        dmax = std::max(dmax, gap);
        dmin = std::min(dmin, gap);
    }
    return MeshStats{dmax, dmin, dmax / dmin};
}

}  // namespace

MappingPoints uniform_points(int n) {
    if (n < 1) throw std::invalid_argument("uniform_points: n must be >= 1");
    std::vector<double> v(static_cast<std::size_t>(n));
    // (2j - (n+1)) / (n+1): integer numerator keeps the set exactly symmetric.
    for (int j = 1; j <= n; ++j)
        v[static_cast<std::size_t>(j - 1)] = static_cast<double>(2 * j - (n + 1)) / (n + 1);
    return MappingPoints{std::move(v), PointKind::uniform};
}

MappingPoints chebyshev_first(int n) {
    if (n < 1) throw std::invalid_argument("chebyshev_first: n must be >= 1");
    std::vector<double> v(static_cast<std::size_t>(n));
    // cos((2k-1) pi / 2n) for k = 1..n, written through sin of a signed
    // argument so the set is ascending and exactly symmetric about 0.
    for (int j = 1; j <= n; ++j)
        v[static_cast<std::size_t>(j - 1)] = std::sin(kPi * (2 * j - n - 1) / (2.0 * n));
    return MappingPoints{std::move(v), PointKind::chebyshev_first};
}

MappingPoints chebyshev_second(int n) {
    if (n < 2) throw std::invalid_argument("chebyshev_second: n must be >= 2");
    std::vector<double> v(static_cast<std::size_t>(n));
    // cos((j-1) pi / (n-1)) in ascending sine form; endpoints land on -1/+1 exactly.
    for (int j = 1; j <= n; ++j)
        v[static_cast<std::size_t>(j - 1)] = std::sin(kPi * (2 * j - n - 1) / (2.0 * (n - 1)));
    v.front() = -1.0;
    v.back() = 1.0;
    return MappingPoints{std::move(v), PointKind::chebyshev_second};
}

MappingPoints make_points(PointKind kind, int n) {
    switch (kind) {
        case PointKind::uniform: return uniform_points(n);
        case PointKind::chebyshev_first: return chebyshev_first(n);
        case PointKind::chebyshev_second: return chebyshev_second(n);
    }
    throw std::invalid_argument("make_points: unknown point kind");
}

MeshStats mesh_stats(const MappingPoints& points) {
    return gap_stats(points.values);
}

MeshStats subset_mesh_stats(const MappingPoints& points, std::span<const int> surviving) {
    validate_subset(points, surviving);
    std::vector<double> sub;
    sub.reserve(surviving.size());
    for (int i : surviving) sub.push_back(points[i]);
    return gap_stats(sub);
}

double local_mesh_ratio(const MappingPoints& points, std::span<const int> surviving) {
    validate_subset(points, surviving);
    const int m = static_cast<int>(surviving.size());
    if (m < 3) throw std::invalid_argument("local_mesh_ratio needs at least 3 surviving points");
    std::vector<double> gap(static_cast<std::size_t>(m - 1));
    for (int i = 0; i + 1 < m; ++i)
        gap[static_cast<std::size_t>(i)] = points[surviving[i + 1]] - points[surviving[i]];
    double mu = 0.0;
    for (int i = 0; i + 2 < m; ++i) {
        double r = gap[static_cast<std::size_t>(i)] / gap[static_cast<std::size_t>(i + 1)];
        if (i >= 1) r = std::min(r, gap[static_cast<std::size_t>(i)] / gap[static_cast<std::size_t>(i - 1)]);
        mu = std::max(mu, r);
    }
    return mu;
}

PointKind point_kind_from_name(std::string_view name) {
    if (name == "uniform") return PointKind::uniform;
    if (name == "chebyshev1") return PointKind::chebyshev_first;
    if (name == "chebyshev2") return PointKind::chebyshev_second;
    throw std::invalid_argument("unknown point kind '" + std::string(name) +
                                "' (expected uniform|chebyshev1|chebyshev2)");
}

std::string_view point_kind_name(PointKind kind) {
    switch (kind) {
        case PointKind::uniform: return "uniform";
        case PointKind::chebyshev_first: return "chebyshev1";
        case PointKind::chebyshev_second: return "chebyshev2";
    }
    return "?";
}

}  // namespace stragglesim
