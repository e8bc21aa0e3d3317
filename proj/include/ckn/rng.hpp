#pragma once

#include <cstdint>

namespace ckn {

// splitmix64: deterministic and platform-independent, unlike the standard
// library distributions
struct SplitMix64 {
    std::uint64_t state = 0;

    explicit SplitMix64(std::uint64_t seed = 0) : state(seed) {}

    std::uint64_t next_u64() {
        state += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30))*0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27))*0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    double unit() { return static_cast<double>(next_u64() >> 11)*0x1.0p-53; }  // [0, 1)
    double uniform(double lo, double hi) { return lo + (hi - lo)*unit(); }
    int index(int n) { return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n)); }
};

}  // namespace ckn
