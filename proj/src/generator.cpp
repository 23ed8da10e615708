#include "kex/generator.hpp"

#include "kex/scoring.hpp"

namespace kex {

namespace {
constexpr std::uint64_t kArrivalTag = 0xA221;
constexpr int kMaxResampleAttempts = 10000;
} // namespace

void GeneratorConfig::validate() const {
    if (crossmatch_positive_probability < 0.0 || crossmatch_positive_probability > 1.0)
        throw ContractViolation("crossmatch_positive_probability outside [0,1]");
    if (age_min < 18 || age_max > 75 || age_min > age_max)
        throw ContractViolation("age range must satisfy 18 <= age_min <= age_max <= 75");
    if (antigen_alphabet_a < 1 || antigen_alphabet_b < 1 || antigen_alphabet_dr < 1)
        throw ContractViolation("antigen alphabets must have at least one identifier");
}

PairGenerator::PairGenerator(GeneratorConfig config, std::uint64_t stream_seed)
    : config_(std::move(config)), seed_(stream_seed) {
    config_.validate();
}

Pair PairGenerator::draw_pair(const Registry& registry, int round, Rng& rng) {
    for (int attempt = 0; attempt < kMaxResampleAttempts; ++attempt) {
        Pair p;
        p.registry = registry.index;
        p.arrival_round = round;
        p.donor_bg = static_cast<BloodGroup>(rng.categorical(registry.donor_bg_distribution));
        p.recipient_bg =
            static_cast<BloodGroup>(rng.categorical(registry.recipient_bg_distribution));
        p.donor_hla.a1 = rng.uniform_int(0, config_.antigen_alphabet_a - 1);
        p.donor_hla.a2 = rng.uniform_int(0, config_.antigen_alphabet_a - 1);
        p.donor_hla.b1 = rng.uniform_int(0, config_.antigen_alphabet_b - 1);
        p.donor_hla.b2 = rng.uniform_int(0, config_.antigen_alphabet_b - 1);
        p.donor_hla.dr1 = rng.uniform_int(0, config_.antigen_alphabet_dr - 1);
        p.donor_hla.dr2 = rng.uniform_int(0, config_.antigen_alphabet_dr - 1);
        p.recipient_hla.a1 = rng.uniform_int(0, config_.antigen_alphabet_a - 1);
        p.recipient_hla.a2 = rng.uniform_int(0, config_.antigen_alphabet_a - 1);
        p.recipient_hla.b1 = rng.uniform_int(0, config_.antigen_alphabet_b - 1);
        p.recipient_hla.b2 = rng.uniform_int(0, config_.antigen_alphabet_b - 1);
        p.recipient_hla.dr1 = rng.uniform_int(0, config_.antigen_alphabet_dr - 1);
        p.recipient_hla.dr2 = rng.uniform_int(0, config_.antigen_alphabet_dr - 1);
        p.donor_age = rng.uniform_int(config_.age_min, config_.age_max);
        p.recipient_age = rng.uniform_int(config_.age_min, config_.age_max);

        bool crossmatch_positive = rng.bernoulli(config_.crossmatch_positive_probability);
        p.self_compatible =
            blood_compatible(p.donor_bg, p.recipient_bg) && !crossmatch_positive;
        if (p.self_compatible)
            p.own_match_score = edge_weight(p, p);

        if (!config_.include_compatible_pairs && p.self_compatible)
            continue;

        p.id = next_id_++;
        return p;
    }
    throw GenerationError(
        "could not draw an incompatible pair for registry '" + registry.name + "' after " +
        std::to_string(kMaxResampleAttempts) + " attempts; distribution is degenerate");
}

std::vector<Pair> PairGenerator::arrivals(const Registry& registry, int round, Rng& rng) {
    int n = rng.uniform_int(registry.arrival_low, registry.arrival_high);
    std::vector<Pair> batch;
    batch.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        batch.push_back(draw_pair(registry, round, rng));
    return batch;
}

Rng PairGenerator::arrival_stream(const Registry& registry, int round) const {
    return Rng::keyed(seed_, {kArrivalTag, static_cast<std::uint64_t>(registry.index),
                              static_cast<std::uint64_t>(round)});
}

} // namespace kex
