#pragma once

#include <cstdint>
#include <random>

namespace pinndd {

/// Seedable random stream. Substreams are derived from a master seed by
/// mixing fixed (stream, purpose) tags, so per-subdomain sampling is
/// identical whether subdomains run sequentially or in parallel.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// splitmix64 finalizer.
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    static Rng for_stream(std::uint64_t master, std::uint64_t stream,
                          std::uint64_t purpose) {
        std::uint64_t s = mix(master);
        s = mix(s ^ mix(stream + 0x632be59bd9b4e019ULL));
        s = mix(s ^ mix(purpose + 0x9e6c63d0876a7a35ULL));
        return Rng(s);
    }

    double uniform(double a, double b) {
        return std::uniform_real_distribution<double>(a, b)(engine_);
    }

    std::uint64_t next_u64() { return engine_(); }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

}  // namespace pinndd
