#pragma once

#include <cstdint>
#include <vector>

#include "kex/domain.hpp"
#include "kex/rng.hpp"

namespace kex {

// Knobs for random pair generation. Blood-group vectors live on Registry.
struct GeneratorConfig {
    double crossmatch_positive_probability = 0.3;
    bool include_compatible_pairs = true;
    int age_min = 18;
    int age_max = 75;
    int antigen_alphabet_a = 20;
    int antigen_alphabet_b = 20;
    int antigen_alphabet_dr = 10;

    void validate() const;
};

// Seeded source of pairs. One instance per replication; the instance owns
// the id counter, the caller owns the rng streams (so arrival draws can be
// keyed per registry and round).
class PairGenerator {
public:
    PairGenerator(GeneratorConfig config, std::uint64_t stream_seed);

    // Samples blood groups, HLA profiles and ages, then the pair's own
    // crossmatch. When include_compatible_pairs is false, resamples until
    // the pair is incompatible (GenerationError after 10000 attempts).
    Pair draw_pair(const Registry& registry, int round, Rng& rng);

    // Draws n ~ U{arrival_low..arrival_high}, then n pairs, all stamped
    // with arrival_round = round.
    std::vector<Pair> arrivals(const Registry& registry, int round, Rng& rng);

    // Independent stream for a registry's arrivals in a round; invocation
    // order does not matter.
    Rng arrival_stream(const Registry& registry, int round) const;

    const GeneratorConfig& config() const { return config_; }
    std::uint64_t stream_seed() const { return seed_; }

private:
    GeneratorConfig config_;
    std::uint64_t seed_;
    PairId next_id_ = 0;
};

} // namespace kex
