#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kex/domain.hpp"
#include "kex/graph_build.hpp"
#include "kex/solver.hpp"

namespace kex {

// A serialized pool for one-shot clearing: pairs, bounds, and either an
// explicit list of tissue-compatible ordered pairs or a seed for generated
// crossmatches. Line-oriented, whitespace-delimited, '#' comments:
//
//   registry <index> <name> <cycle_bound>
//   global_bound <b>
//   ir_floor auto | <f1> <f2> ...
//   seed <n>
//   crossmatch_p <p>
//   pair <id> <registry> <donor_bg> <recipient_bg> <6 donor antigens>
//        <6 recipient antigens> <donor_age> <recipient_age> <arrival_round>
//        <self_crossmatch: pos|neg>
//   arc <from_id> <to_id>
struct PoolFile {
    std::vector<Registry> registries;
    std::vector<Pair> pairs;
    // When present, exactly these ordered pairs are tissue-compatible.
    std::optional<std::vector<std::pair<PairId, PairId>>> negative_crossmatches;
    int global_bound = 0; // 0 = max registry bound
    bool ir_auto = false;
    std::optional<std::vector<int>> ir_floor;
    std::uint64_t seed = 1;
    double crossmatch_probability = 0.3;

    std::vector<int> registry_bounds() const;
    int effective_global_bound() const;
};

PoolFile load_pool_file(const std::string& path);

// Tissue source per the file: explicit arc list when given, otherwise
// crossmatches keyed on (seed, pair ids).
TissueSource pool_tissue_source(const PoolFile& pool);

CompatibilityGraph build_pool_graph(const PoolFile& pool);

} // namespace kex
