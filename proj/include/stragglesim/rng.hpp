#pragma once

#include <cstdint>
#include <initializer_list>

namespace stragglesim::rng {

// splitmix64 finalizer; also used to fold key material into a stream state.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Deterministic counter-keyed generator. A stream is fully determined by
/// (seed, key...), so trials can be replayed in any order, on any thread,
/// and still draw bit-identical sequences.
class Stream {
public:
    explicit Stream(std::uint64_t seed, std::initializer_list<std::uint64_t> key = {}) {
        state_ = mix64(seed + kGolden);
        for (std::uint64_t k : key) state_ = mix64(state_ ^ mix64(k + kGolden));
    }

    std::uint64_t next_u64() {
        state_ += kGolden;
        return mix64(state_);
    }

    /// Uniform in [0, 1) with 53-bit resolution.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool next_bernoulli(double p) { return next_unit() < p; }

    /// Uniform integer in [0, n), unbiased (multiply-shift with rejection).
    std::uint64_t next_index(std::uint64_t n) {
        auto x = next_u64();
        auto m = static_cast<unsigned __int128>(x) * n;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < n) {
            const std::uint64_t t = -n % n;
            while (lo < t) {
                x = next_u64();
                m = static_cast<unsigned __int128>(x) * n;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

private:
    static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;
    std::uint64_t state_;
};

}  // namespace stragglesim::rng
