#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "kex/domain.hpp"

namespace kex {

inline constexpr std::size_t kDefaultCycleCap = 5'000'000;

// Every directed simple cycle of length 2..max_len, each exactly once,
// canonicalized to start at its smallest vertex and emitted in a fixed
// deterministic order (ascending start vertex, then DFS order with
// ascending neighbours). The position in the returned list is the cycle's
// canonical identifier. Throws CapacityError past `cap` cycles.
//
// The parallel version splits the start vertices across threads and returns
// the same list in the same order.
std::vector<ExchangeCycle> enumerate_cycles_serial(const CompatibilityGraph& graph,
                                                   int max_len,
                                                   std::size_t cap = kDefaultCycleCap);
std::vector<ExchangeCycle> enumerate_cycles(const CompatibilityGraph& graph, int max_len,
                                            std::size_t cap = kDefaultCycleCap);

// One clearing request. Objective is lexicographic: maximize the transplant
// count first, then the total score; remaining ties go to the solution whose
// sorted canonical cycle-id list is smallest.
struct SolveSpec {
    const CompatibilityGraph& graph;
    std::vector<int> registry_bounds;            // B_k, indexed by registry
    int global_bound = 3;                        // b
    std::optional<std::vector<int>> ir_floor;    // IS_k, minimum exchange transplants
    std::size_t cycle_cap = kDefaultCycleCap;

    void validate() const;
};

// Exact branch-and-bound over the enumerated cycle set (set packing with
// individual-rationality side constraints).
Solution solve(const SolveSpec& spec);

// Solves each registry alone (global bound = that registry's own bound, no
// floors). The transplant counts are the IS_k fed to the merged solve.
std::vector<Solution> independent_solutions(const std::vector<CompatibilityGraph>& pools,
                                            const std::vector<int>& bounds);

// Exhaustive oracle for small instances (refuses more than 14 vertices):
// walks every vertex-disjoint subset of feasible cycles with no bounding.
Solution brute_force(const SolveSpec& spec);

struct CompactViolation {
    std::string constraint; // "flow", "vertex", "registry_bound", "global_bound", "ir", "binary", "copies"
    int index = -1;          // copy index l or registry k, when applicable
    std::string detail;
};

// Result of checking a solution against the replicated-copy formulation.
struct FormulationCheckReport {
    bool flow_conservation_ok = true;
    bool vertex_capacity_ok = true;
    bool registry_bound_ok = true;
    bool global_bound_ok = true;
    bool ir_ok = true;
    bool binary_ok = true;
    std::vector<CompactViolation> violations;

    bool all_ok() const {
        return flow_conservation_ok && vertex_capacity_ok && registry_bound_ok &&
               global_bound_ok && ir_ok && binary_ok;
    }
};

// Maps the solution onto M = ceil(|V|/2) graph copies, one cycle per copy,
// and checks: per-copy flow conservation, per-copy arc total <= b, per-copy
// domestic arcs <= B_k, one outgoing arc per vertex across copies, selected
// arc tails per registry >= IS_k, and that all selections are binary over
// arcs of the graph.
FormulationCheckReport verify_compact(const Solution& solution, const SolveSpec& spec);

} // namespace kex
