#pragma once

#include <cstdint>
#include <random>

namespace mmtc {

// Deterministic stream of uniforms. Each (seed, sequence) pair yields an
// independent stream; draws avoid std::uniform_real_distribution so results
// are identical across standard library implementations.
class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed, std::uint64_t sequence = 0)
        : eng_(mix(seed + 0x9e3779b97f4a7c15ull * (sequence + 1))) {}

    std::uint64_t next_u64() { return eng_(); }

    // uniform on [0, 1)
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::mt19937_64 eng_;
};

}  // namespace mmtc
