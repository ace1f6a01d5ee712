#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

namespace autoform {

// SplitMix64. Chosen over <random> engines because the exemplar split must
// be reproducible bit-for-bit across platforms, and the standard
// distributions are not portable. Identified as "splitmix64-v1" in outputs.
class SplitMix64 {
public:
    static constexpr const char* kName = "splitmix64-v1";

    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, bound) by rejection; bound must be nonzero.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t v;
        do {
            v = next();
        } while (v >= limit);
        return v % bound;
    }

private:
    std::uint64_t state_;
};

// First k positions of a seeded Fisher-Yates shuffle of {0..n-1}.
inline std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k, std::uint64_t seed) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    SplitMix64 rng(seed);
    for (std::size_t i = 0; i < k && i + 1 < n; ++i) {
        std::size_t j = i + static_cast<std::size_t>(rng.next_below(n - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    return idx;
}

}  // namespace autoform
