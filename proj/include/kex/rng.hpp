#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

namespace kex {

// Deterministic 64-bit generator (SplitMix64). The standard <random>
// distributions are not bit-identical across library implementations, and
// every simulation output here must be reproducible byte for byte, so the
// engine and all range mappings are pinned down explicitly.
//
// Streams can be derived from a parent seed plus an arbitrary key tuple,
// which is how per-registry, per-round and per-pair substreams are built
// without sharing mutable state.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Derives an independent stream from (seed, keys...). Hashing is
    // iterated mixing, so distinct key tuples give distinct streams.
    static Rng keyed(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
        std::uint64_t s = mix(seed);
        for (std::uint64_t k : keys) s = mix(s ^ mix(k));
        return Rng(s);
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, bound) via 128-bit multiply-shift.
    std::uint64_t next_below(std::uint64_t bound) {
        return static_cast<std::uint64_t>(
            (static_cast<__uint128_t>(next_u64()) * bound) >> 64);
    }

    // Uniform integer in [lo, hi] inclusive.
    int uniform_int(int lo, int hi) {
        return lo + static_cast<int>(next_below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    // Uniform in [0, 1) with 53 significant bits.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return uniform01() < p; }

    // Samples an index from a probability vector (entries sum to ~1).
    // Any residual mass from rounding goes to the last category.
    int categorical(const std::vector<double>& probs) {
        double u = uniform01();
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
            acc += probs[i];
            if (u < acc) return static_cast<int>(i);
        }
        return static_cast<int>(probs.size()) - 1;
    }

private:
    std::uint64_t state_;
};

} // namespace kex
