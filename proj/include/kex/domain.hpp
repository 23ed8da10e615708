#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "kex/errors.hpp"

namespace kex {

// Blood groups ordered O < A < B < AB for deterministic reporting.
enum class BloodGroup : int { O = 0, A = 1, B = 2, AB = 3 };

constexpr int kBloodGroupCount = 4;

const char* to_string(BloodGroup bg);
BloodGroup blood_group_from_string(const std::string& s);

// ABO donation rules: O donates to all, A to {A, AB}, B to {B, AB}, AB to AB.
bool blood_compatible(BloodGroup donor, BloodGroup recipient);

// Six antigens at loci A, B and DR. Identifiers are small non-negative
// integers drawn from per-locus alphabets.
struct HlaProfile {
    int a1 = 0, a2 = 0;
    int b1 = 0, b2 = 0;
    int dr1 = 0, dr2 = 0;

    bool operator==(const HlaProfile&) const = default;
};

using PairId = std::uint64_t;

// One donor-recipient pair enrolled in a registry. Immutable after
// construction; own_match_score is meaningful exactly when self_compatible.
struct Pair {
    PairId id = 0;
    int registry = 0;
    BloodGroup donor_bg = BloodGroup::O;
    BloodGroup recipient_bg = BloodGroup::O;
    HlaProfile donor_hla;
    HlaProfile recipient_hla;
    int donor_age = 18;
    int recipient_age = 18;
    int arrival_round = 0;
    bool self_compatible = false;
    double own_match_score = 0.0;
};

// Static description of one participating registry.
struct Registry {
    int index = 0;
    std::string name;
    int cycle_bound = 3; // B_k, >= 2
    int arrival_low = 5;
    int arrival_high = 10;
    std::vector<double> donor_bg_distribution{0.25, 0.25, 0.25, 0.25};
    std::vector<double> recipient_bg_distribution{0.25, 0.25, 0.25, 0.25};
    double dropout_probability = 0.2;

    // Throws ContractViolation when any invariant is broken.
    void validate() const;
};

struct Arc {
    int from = 0; // vertex index within the graph
    int to = 0;
    double weight = 0.0;
};

// Directed weighted compatibility graph over a pool of pairs. Vertices are
// ordered by ascending pair id, so vertex indices are a canonical ordering.
class CompatibilityGraph {
public:
    CompatibilityGraph() = default;

    // Takes the pool (copied, re-sorted by id) and the arc list expressed in
    // vertex indices. Validates: distinct ids, no self-loops, no duplicate
    // arcs, endpoints in range, positive weights.
    CompatibilityGraph(std::vector<Pair> pool, std::vector<Arc> arcs);

    int vertex_count() const { return static_cast<int>(pairs_.size()); }
    const std::vector<Pair>& pairs() const { return pairs_; }
    const Pair& pair(int v) const { return pairs_[static_cast<std::size_t>(v)]; }
    const std::vector<Arc>& arcs() const { return arcs_; }
    int registry_of(int v) const { return pairs_[static_cast<std::size_t>(v)].registry; }

    // Out-neighbour lists (head index, weight), heads ascending.
    const std::vector<std::vector<std::pair<int, double>>>& adjacency() const { return adj_; }

    // Index of an arc, or -1 when absent.
    int arc_index(int from, int to) const;
    bool has_arc(int from, int to) const { return arc_index(from, to) >= 0; }

    int index_of(PairId id) const; // -1 when the id is not a vertex
    int registry_count() const { return registry_count_; }

private:
    std::vector<Pair> pairs_;
    std::vector<Arc> arcs_;
    std::vector<std::vector<std::pair<int, double>>> adj_;
    std::unordered_map<PairId, int> id_to_index_;
    int registry_count_ = 0;
};

// A directed simple cycle in a given graph; the unit of transplantation.
class ExchangeCycle {
public:
    // Builds the cycle visiting `loop` in order (loop[i] -> loop[i+1],
    // last -> first). Every arc must exist in the graph and every vertex
    // must appear exactly once; length >= 2.
    ExchangeCycle(const CompatibilityGraph& graph, std::vector<int> loop);

    const std::vector<int>& vertices() const { return vertices_; }
    const std::vector<Arc>& arcs() const { return arcs_; }
    int length() const { return static_cast<int>(arcs_.size()); }
    double weight() const { return weight_; }
    // Count of arcs with both endpoints in registry k.
    const std::vector<int>& domestic_counts() const { return domestic_counts_; }

private:
    std::vector<int> vertices_;
    std::vector<Arc> arcs_;
    double weight_ = 0.0;
    std::vector<int> domestic_counts_;
};

// A vertex-disjoint set of exchange cycles.
class Solution {
public:
    Solution() = default;

    // Validates pairwise vertex-disjointness and computes the totals.
    // `registry_count` sizes matched_per_registry.
    Solution(const CompatibilityGraph& graph, std::vector<ExchangeCycle> cycles,
             int registry_count);

    const std::vector<ExchangeCycle>& cycles() const { return cycles_; }
    const std::vector<int>& matched_per_registry() const { return matched_per_registry_; }
    int total_transplants() const { return total_transplants_; }
    double total_score() const { return total_score_; }

    // Vertex indices matched by any cycle, ascending.
    std::vector<int> matched_vertices() const;

private:
    std::vector<ExchangeCycle> cycles_;
    std::vector<int> matched_per_registry_;
    int total_transplants_ = 0;
    double total_score_ = 0.0;
};

} // namespace kex
