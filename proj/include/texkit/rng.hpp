#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace texkit {

// Seeded random source with a platform-stable bounded draw.
//
// std::mt19937_64 output is fully specified by the standard, but the
// standard distributions are not; every draw below is defined directly
// on the raw engine output so that a given seed produces the same
// sequence on every compiler.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    // Uniform draw from [0, bound). Rejection sampling, no modulo bias.
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) {
            throw std::invalid_argument("SeededRng::below: bound must be positive");
        }
        const std::uint64_t cutoff = (0UL - bound) % bound;  // 2^64 mod bound
        std::uint64_t v = gen_();
        while (v < cutoff) {
            v = gen_();
        }
        return v % bound;
    }

    // Uniform double in [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 gen_;
};

// In-place Fisher-Yates shuffle driven by SeededRng.
template <typename T>
void shuffle(std::vector<T>& items, SeededRng& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng.below(i));
        std::swap(items[i - 1], items[j]);
    }
}

// k distinct indices drawn uniformly from [0, n), in draw order.
inline std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k, SeededRng& rng) {
    if (k > n) {
        throw std::invalid_argument("sample_indices: k exceeds population size");
    }
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    for (std::size_t i = 0; i < k; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.below(n - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    return idx;
}

}  // namespace texkit
