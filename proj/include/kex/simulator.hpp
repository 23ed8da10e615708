#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "kex/domain.hpp"
#include "kex/generator.hpp"
#include "kex/solver.hpp"

namespace kex {

// The two parallel worlds compared by every experiment. INDIVIDUAL clears
// each registry alone; MERGED clears the union under IR floors. Both see
// the same arrival stream but their pools diverge over time.
enum class World : int { Individual = 0, Merged = 1 };
inline constexpr int kWorldCount = 2;
const char* to_string(World w);

struct SimulationConfig {
    std::vector<Registry> registries;
    int global_bound = 3; // b, merged-cycle bound
    int rounds = 12;
    GeneratorConfig generator;
    bool verify_solutions = true; // run verify_compact on every solve

    void validate() const;
};

// Per-registry slice of one round, one world.
struct RegistryRoundStats {
    int arrivals = 0;
    int transplants = 0;
    double score = 0.0;
    int ir_floor = 0; // IS'_k bound used this round (own optimum in INDIVIDUAL)
    int dropouts = 0;
    int pool_after = 0;
    std::array<int, kBloodGroupCount> matched_by_bg{};
};

struct RoundRecord {
    int round = 0;
    std::array<std::vector<RegistryRoundStats>, kWorldCount> by_world;
};

// Monotone per-registry counters over a replication.
struct RegistryCumulative {
    long arrivals = 0;
    long transplants = 0;
    double score = 0.0;
    long dropouts = 0;
    long waiting_rounds = 0; // one per unmatched survivor per round
    long self_transplants = 0;
    double self_transplant_score = 0.0;
    std::array<long, kBloodGroupCount> matched_by_bg{};
};

struct PoolEntry {
    Pair pair;
    int waited = 0;
};

struct WorldState {
    World world = World::Individual;
    std::vector<std::vector<PoolEntry>> pools; // per registry
    std::vector<RegistryCumulative> cumulative;
};

struct ReplicationResult {
    std::uint64_t seed = 0;
    std::vector<RoundRecord> rounds;
    std::array<std::vector<RegistryCumulative>, kWorldCount> totals;
    std::array<std::vector<int>, kWorldCount> final_pool; // after self-transplant accounting
};

class Simulator {
public:
    explicit Simulator(SimulationConfig config);

    const SimulationConfig& config() const { return config_; }

    WorldState make_world(World w) const;

    // One round: shared arrivals, independent clearing per world, merged
    // clearing under IR floors, dropouts, waiting-time accrual.
    RoundRecord simulate_round(WorldState& individual, WorldState& merged, int round,
                               std::uint64_t seed, PairGenerator& generator) const;

    // Full multi-round run from empty pools; self-compatible pairs still
    // unmatched at the end are booked as self-transplants.
    ReplicationResult run_replication(std::uint64_t seed) const;

    // arrivals == matched + dropped + remaining + self-transplanted, per
    // registry. Throws on violation.
    void audit_conservation(const WorldState& state) const;

private:
    SimulationConfig config_;
};

// Per-round across-replication averages for the time-series outputs.
struct RoundTimePoint {
    int round = 0;
    // [world][registry]
    std::array<std::vector<double>, kWorldCount> transplants;
    std::array<std::vector<double>, kWorldCount> score;
    std::array<std::vector<double>, kWorldCount> cumulative_transplants;
    std::array<std::vector<double>, kWorldCount> cumulative_score;
    std::array<std::vector<double>, kWorldCount> pool_after;
    std::array<std::vector<double>, kWorldCount> dropouts;
};

struct RegistryAverages {
    double arrivals = 0;
    double transplants = 0;
    double score = 0;
    double dropouts = 0;
    double waiting_rounds = 0;
    double self_transplants = 0;
    double self_transplant_score = 0;
    double pool_remaining = 0;
    std::array<double, kBloodGroupCount> matched_by_bg{};
};

struct ExperimentSummary {
    SimulationConfig config;
    int replications = 0;
    std::uint64_t seed = 0;
    std::array<std::vector<RegistryAverages>, kWorldCount> averages; // [world][registry]
    // merged minus individual, averaged over replications
    double gain_transplants = 0;
    double gain_score = 0;
    std::vector<double> gain_transplants_per_registry;
    std::vector<double> gain_score_per_registry;
    std::vector<double> per_replication_gain_transplants;
    std::vector<double> per_replication_gain_score;
    double fraction_gain_nonnegative = 0;
    std::vector<RoundTimePoint> series;
};

struct ExperimentParams {
    SimulationConfig sim;
    int replications = 20;
    std::uint64_t seed = 1;
    int workers = 0; // 0 = use all available threads
};

// Runs replications with seeds seed+0 .. seed+R-1 (fanned out across
// threads; results are aggregated in replication order, so the summary is
// independent of the worker count) and averages every metric.
ExperimentSummary run_experiment(const ExperimentParams& params);

} // namespace kex
