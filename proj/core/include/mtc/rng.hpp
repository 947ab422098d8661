#pragma once

#include <cstdint>
#include <string_view>

namespace mtc {

// splitmix64; one independent stream per (master_seed, tag, index)
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next()
    {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        return mix(z);
    }

    // [0, 1) with 53 random bits
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // [-r, r)
    double symmetric(double r) { return r * (2.0 * uniform01() - 1.0); }

    static std::uint64_t mix(std::uint64_t z)
    {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    static std::uint64_t stream(std::uint64_t master, std::uint64_t tag, std::uint64_t index)
    {
        return mix(master ^ mix(tag ^ mix(index + 0x9e3779b97f4a7c15ULL)));
    }

private:
    std::uint64_t state_;
};

constexpr std::uint64_t fnv1a(std::string_view s)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline constexpr std::string_view rng_algorithm = "splitmix64 streams keyed by (master_seed, fnv1a(tag), index)";

}  // namespace mtc
