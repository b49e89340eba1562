#pragma once

#include <cstdint>
#include <random>

namespace cutpath {

// splitmix64 step; used both as a mixer and to derive stream seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Derives an independent stream seed from (master, stream, replica).
// Replicas of the same experiment never share a stream.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t replica) {
    std::uint64_t s = master;
    (void)splitmix64(s);
    s ^= 0x8000000080003089ULL * (stream + 1);
    (void)splitmix64(s);
    s ^= 0xd2b74407b1ce6e93ULL * (replica + 1);
    return splitmix64(s);
}

// mt19937_64 with portable draw helpers. The raw engine output is pinned by
// the standard; std::uniform_*_distribution is not, so we roll our own.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // Uniform in [0, n) by rejection; n > 0.
    std::uint64_t next_below(std::uint64_t n) {
        const std::uint64_t limit = n * (UINT64_MAX / n);
        std::uint64_t x;
        do {
            x = eng_();
        } while (x >= limit);
        return x % n;
    }

    // Uniform in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace cutpath
