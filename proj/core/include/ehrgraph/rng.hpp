#pragma once

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace ehrgraph {

// splitmix64 stream. Deliberately not std::mt19937 + standard distributions:
// distribution output is implementation-defined and corpora must reproduce
// bit-for-bit across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in (0, 1]; never zero, so log() is always finite.
    double next_unit() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    // Uniform integer in [0, bound); bound must be nonzero. Rejection keeps
    // the distribution exact.
    std::uint64_t next_below(std::uint64_t bound) {
        std::uint64_t rem = (UINT64_MAX % bound) + 1;
        if (rem == bound) rem = 0;
        std::uint64_t x = next_u64();
        if (rem != 0) {
            const std::uint64_t top = UINT64_MAX - rem;
            while (x > top) x = next_u64();
        }
        return x % bound;
    }

    // Fisher-Yates.
    template <typename T>
    void shuffle(std::vector<T>& values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            std::swap(values[i - 1], values[next_below(i)]);
        }
    }

private:
    std::uint64_t state_;
};

// Stable substream derivation: one root seed fans out to named streams so
// stages never share or perturb each other's randomness.
std::uint64_t derive_seed(std::uint64_t root, std::string_view stream);

}  // namespace ehrgraph
