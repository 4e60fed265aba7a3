#pragma once

#include <cstdint>

namespace ddopt {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace detail

// xoshiro256** seeded through splitmix64. Substreams are derived by hashing
// (seed, stream) so that replicates and sentences can draw from independent
// deterministic streams regardless of scheduling.
class Rng {
  public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
        std::uint64_t sm = seed ^ (0xD2B74407B1CE6E93ULL * (stream + 1));
        for (auto& word : s_) word = detail::splitmix64(sm);
    }

    static Rng substream(std::uint64_t seed, std::uint64_t stream) { return Rng(seed, stream); }

    std::uint64_t next_u64() {
        using detail::rotl;
        std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform integer in [0, bound) by rejection; unbiased.
    std::uint64_t uniform_below(std::uint64_t bound) {
        std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            std::uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

    double uniform01() { return (next_u64() >> 11) * 0x1.0p-53; }

  private:
    std::uint64_t s_[4];
};

}  // namespace ddopt
