#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "kex/domain.hpp"
#include "kex/rng.hpp"

namespace kex {

// Tissue compatibility between the donor of one pair and the recipient of
// another. Returns true when the crossmatch is POSITIVE (incompatible).
using TissueSource = std::function<bool(const Pair& donor_side, const Pair& recipient_side)>;

// Crossmatch outcome as a pure function of (seed, donor pair id, recipient
// pair id): querying twice gives the same answer, so both simulated worlds
// see identical arc sets without any shared cache.
class KeyedCrossmatch {
public:
    KeyedCrossmatch(std::uint64_t seed, double positive_probability)
        : seed_(seed), probability_(positive_probability) {}

    bool operator()(const Pair& donor_side, const Pair& recipient_side) const {
        return Rng::keyed(seed_, {kTag, donor_side.id, recipient_side.id})
            .bernoulli(probability_);
    }

private:
    static constexpr std::uint64_t kTag = 0xC505;
    std::uint64_t seed_;
    double probability_;
};

// Arc (i,j) exists iff the donor of i is blood-compatible with the recipient
// of j, the crossmatch between them is negative, and (when j can already use
// its own donor) the exchange strictly beats j's own match score. The two
// builders return identical graphs; the parallel one distributes rows of the
// ordered-pair loop across threads.
CompatibilityGraph build_graph_serial(const std::vector<Pair>& pool,
                                      const TissueSource& cross_tissue);
CompatibilityGraph build_graph(const std::vector<Pair>& pool,
                               const TissueSource& cross_tissue);

} // namespace kex
