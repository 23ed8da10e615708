#include "kex/simulator.hpp"

#include <algorithm>
#include <exception>
#include <omp.h>

#include "kex/graph_build.hpp"

namespace kex {

namespace {
constexpr std::uint64_t kDropoutTag = 0xD809;

std::vector<Pair> pool_pairs(const std::vector<PoolEntry>& pool) {
    std::vector<Pair> out;
    out.reserve(pool.size());
    for (const PoolEntry& e : pool) out.push_back(e.pair);
    return out;
}

} // namespace

const char* to_string(World w) {
    return w == World::Individual ? "individual" : "merged";
}

void SimulationConfig::validate() const {
    if (registries.empty()) throw ContractViolation("at least one registry is required");
    if (rounds < 1) throw ContractViolation("rounds must be >= 1");
    if (global_bound < 2) throw ContractViolation("global bound must be >= 2");
    for (std::size_t k = 0; k < registries.size(); ++k) {
        if (registries[k].index != static_cast<int>(k))
            throw ContractViolation("registry indices must be 0..K-1 in order");
        registries[k].validate();
        if (global_bound < registries[k].cycle_bound)
            throw ContractViolation(
                "global bound " + std::to_string(global_bound) +
                " is below the cycle bound of registry " + registries[k].name +
                "; per-round IR floors would not be guaranteed feasible");
    }
    generator.validate();
}

Simulator::Simulator(SimulationConfig config) : config_(std::move(config)) {
    config_.validate();
}

WorldState Simulator::make_world(World w) const {
    WorldState s;
    s.world = w;
    s.pools.assign(config_.registries.size(), {});
    s.cumulative.assign(config_.registries.size(), {});
    return s;
}

void Simulator::audit_conservation(const WorldState& state) const {
    for (std::size_t k = 0; k < config_.registries.size(); ++k) {
        const RegistryCumulative& c = state.cumulative[k];
        long remaining = static_cast<long>(state.pools[k].size());
        long accounted = c.transplants + c.dropouts + remaining + c.self_transplants;
        if (c.arrivals != accounted)
            throw std::logic_error(
                "conservation violated in " + std::string(to_string(state.world)) +
                " world, registry " + std::to_string(k + 1) + ": " +
                std::to_string(c.arrivals) + " arrivals vs " + std::to_string(accounted) +
                " accounted");
    }
}

RoundRecord Simulator::simulate_round(WorldState& individual, WorldState& merged, int round,
                                      std::uint64_t seed, PairGenerator& generator) const {
    const std::size_t K = config_.registries.size();
    std::vector<int> bounds;
    bounds.reserve(K);
    for (const Registry& r : config_.registries) bounds.push_back(r.cycle_bound);

    RoundRecord record;
    record.round = round;
    for (auto& v : record.by_world) v.assign(K, {});

    // 1. One shared arrival batch per registry, appended to both worlds.
    for (std::size_t k = 0; k < K; ++k) {
        Rng rng = generator.arrival_stream(config_.registries[k], round);
        std::vector<Pair> batch = generator.arrivals(config_.registries[k], round, rng);
        for (const Pair& p : batch) {
            individual.pools[k].push_back(PoolEntry{p, 0});
            merged.pools[k].push_back(PoolEntry{p, 0});
        }
        individual.cumulative[k].arrivals += static_cast<long>(batch.size());
        merged.cumulative[k].arrivals += static_cast<long>(batch.size());
        for (int w = 0; w < kWorldCount; ++w)
            record.by_world[static_cast<std::size_t>(w)][k].arrivals =
                static_cast<int>(batch.size());
    }

    KeyedCrossmatch cross(seed, config_.generator.crossmatch_positive_probability);

    auto credit_solution = [&](WorldState& state, const CompatibilityGraph& graph,
                               const Solution& sol, int world_idx) {
        auto& stats = record.by_world[static_cast<std::size_t>(world_idx)];
        for (const ExchangeCycle& cyc : sol.cycles()) {
            for (const Arc& a : cyc.arcs()) {
                int reg = graph.registry_of(a.to);
                stats[static_cast<std::size_t>(reg)].score += a.weight;
                state.cumulative[static_cast<std::size_t>(reg)].score += a.weight;
            }
        }
        for (int v : sol.matched_vertices()) {
            const Pair& p = graph.pair(v);
            auto k = static_cast<std::size_t>(p.registry);
            ++stats[k].transplants;
            ++state.cumulative[k].transplants;
            auto bg = static_cast<std::size_t>(p.recipient_bg);
            ++stats[k].matched_by_bg[bg];
            ++state.cumulative[k].matched_by_bg[bg];

            // Remove from the pool and check the waiting bookkeeping.
            auto& pool = state.pools[k];
            auto it = std::find_if(pool.begin(), pool.end(), [&](const PoolEntry& e) {
                return e.pair.id == p.id;
            });
            if (it == pool.end())
                throw std::logic_error("matched pair not found in its pool");
            if (it->waited != round - it->pair.arrival_round)
                throw std::logic_error("waiting-time bookkeeping out of step");
            pool.erase(it);
        }
    };

    auto maybe_verify = [&](const Solution& sol, const SolveSpec& spec, int world_idx) {
        if (!config_.verify_solutions) return;
        FormulationCheckReport rep = verify_compact(sol, spec);
        if (!rep.all_ok())
            throw std::logic_error("compact formulation check failed in round " +
                                   std::to_string(round) + ", " +
                                   to_string(static_cast<World>(world_idx)) + " world: " +
                                   rep.violations.front().detail);
    };

    // 2. INDIVIDUAL world: each registry clears alone.
    for (std::size_t k = 0; k < K; ++k) {
        CompatibilityGraph graph = build_graph(pool_pairs(individual.pools[k]), cross);
        SolveSpec spec{graph, bounds, bounds[k], std::nullopt};
        Solution sol = solve(spec);
        maybe_verify(sol, spec, static_cast<int>(World::Individual));
        auto& st = record.by_world[static_cast<std::size_t>(World::Individual)][k];
        st.ir_floor = sol.total_transplants();
        credit_solution(individual, graph, sol, static_cast<int>(World::Individual));
    }

    // 3. MERGED world: per-round floors from its own pools, then one
    // merged clearing under those floors.
    {
        std::vector<CompatibilityGraph> per_registry;
        per_registry.reserve(K);
        for (std::size_t k = 0; k < K; ++k)
            per_registry.push_back(build_graph(pool_pairs(merged.pools[k]), cross));
        std::vector<Solution> independent = independent_solutions(per_registry, bounds);
        std::vector<int> floors;
        floors.reserve(K);
        for (const Solution& s : independent) floors.push_back(s.total_transplants());

        std::vector<Pair> union_pool;
        for (std::size_t k = 0; k < K; ++k)
            for (const PoolEntry& e : merged.pools[k]) union_pool.push_back(e.pair);
        CompatibilityGraph graph = build_graph(union_pool, cross);
        SolveSpec spec{graph, bounds, config_.global_bound, floors};
        Solution sol = solve(spec);
        maybe_verify(sol, spec, static_cast<int>(World::Merged));

        auto& stats = record.by_world[static_cast<std::size_t>(World::Merged)];
        for (std::size_t k = 0; k < K; ++k) {
            stats[k].ir_floor = floors[k];
            if (sol.matched_per_registry()[k] < floors[k])
                throw std::logic_error("per-round IR violated in round " +
                                       std::to_string(round) + " for registry " +
                                       std::to_string(k + 1));
        }
        credit_solution(merged, graph, sol, static_cast<int>(World::Merged));
    }

    // 4. Dropouts and waiting-time accrual, keyed per (pair, world, round).
    for (WorldState* state : {&individual, &merged}) {
        auto world_idx = static_cast<std::uint64_t>(state->world);
        auto& stats = record.by_world[static_cast<std::size_t>(state->world)];
        for (std::size_t k = 0; k < K; ++k) {
            double dp = config_.registries[k].dropout_probability;
            auto& pool = state->pools[k];
            std::vector<PoolEntry> survivors;
            survivors.reserve(pool.size());
            for (PoolEntry& e : pool) {
                bool drops = Rng::keyed(seed, {kDropoutTag, e.pair.id, world_idx,
                                               static_cast<std::uint64_t>(round)})
                                 .bernoulli(dp);
                if (drops) {
                    ++stats[k].dropouts;
                    ++state->cumulative[k].dropouts;
                } else {
                    ++e.waited;
                    ++state->cumulative[k].waiting_rounds;
                    survivors.push_back(e);
                }
            }
            pool = std::move(survivors);
            stats[k].pool_after = static_cast<int>(pool.size());
        }
    }

    audit_conservation(individual);
    audit_conservation(merged);
    return record;
}

ReplicationResult Simulator::run_replication(std::uint64_t seed) const {
    PairGenerator generator(config_.generator, seed);
    WorldState individual = make_world(World::Individual);
    WorldState merged = make_world(World::Merged);

    ReplicationResult result;
    result.seed = seed;
    result.rounds.reserve(static_cast<std::size_t>(config_.rounds));
    for (int round = 0; round < config_.rounds; ++round)
        result.rounds.push_back(simulate_round(individual, merged, round, seed, generator));

    // Self-compatible pairs that never found a strictly better exchange are
    // booked as own-donor transplants, outside the exchange counters.
    for (WorldState* state : {&individual, &merged}) {
        for (std::size_t k = 0; k < state->pools.size(); ++k) {
            auto& pool = state->pools[k];
            std::vector<PoolEntry> rest;
            for (PoolEntry& e : pool) {
                if (e.pair.self_compatible) {
                    ++state->cumulative[k].self_transplants;
                    state->cumulative[k].self_transplant_score += e.pair.own_match_score;
                } else {
                    rest.push_back(e);
                }
            }
            pool = std::move(rest);
        }
        audit_conservation(*state);
        auto w = static_cast<std::size_t>(state->world);
        result.totals[w] = state->cumulative;
        for (const auto& pool : state->pools)
            result.final_pool[w].push_back(static_cast<int>(pool.size()));
    }
    return result;
}

ExperimentSummary run_experiment(const ExperimentParams& params) {
    if (params.replications < 1) throw ContractViolation("replications must be >= 1");
    Simulator sim(params.sim);
    const std::size_t K = sim.config().registries.size();
    const int R = params.replications;

    std::vector<ReplicationResult> results(static_cast<std::size_t>(R));
    std::vector<std::exception_ptr> failures(static_cast<std::size_t>(R));
    int threads = params.workers > 0 ? params.workers : omp_get_max_threads();

#pragma omp parallel for num_threads(threads) schedule(dynamic)
    for (int r = 0; r < R; ++r) {
        try {
            results[static_cast<std::size_t>(r)] =
                sim.run_replication(params.seed + static_cast<std::uint64_t>(r));
        } catch (...) {
            failures[static_cast<std::size_t>(r)] = std::current_exception();
        }
    }
    for (const auto& f : failures)
        if (f) std::rethrow_exception(f);

    ExperimentSummary summary;
    summary.config = sim.config();
    summary.replications = R;
    summary.seed = params.seed;
    for (auto& v : summary.averages) v.assign(K, {});
    summary.gain_transplants_per_registry.assign(K, 0.0);
    summary.gain_score_per_registry.assign(K, 0.0);

    const double invR = 1.0 / static_cast<double>(R);
    for (const ReplicationResult& rep : results) {
        double gain_t = 0.0, gain_s = 0.0;
        for (int w = 0; w < kWorldCount; ++w) {
            for (std::size_t k = 0; k < K; ++k) {
                const RegistryCumulative& c = rep.totals[static_cast<std::size_t>(w)][k];
                RegistryAverages& a = summary.averages[static_cast<std::size_t>(w)][k];
                a.arrivals += invR * static_cast<double>(c.arrivals);
                a.transplants += invR * static_cast<double>(c.transplants);
                a.score += invR * c.score;
                a.dropouts += invR * static_cast<double>(c.dropouts);
                a.waiting_rounds += invR * static_cast<double>(c.waiting_rounds);
                a.self_transplants += invR * static_cast<double>(c.self_transplants);
                a.self_transplant_score += invR * c.self_transplant_score;
                a.pool_remaining +=
                    invR * static_cast<double>(rep.final_pool[static_cast<std::size_t>(w)][k]);
                for (int bg = 0; bg < kBloodGroupCount; ++bg)
                    a.matched_by_bg[static_cast<std::size_t>(bg)] +=
                        invR * static_cast<double>(c.matched_by_bg[static_cast<std::size_t>(bg)]);
            }
        }
        for (std::size_t k = 0; k < K; ++k) {
            const auto& ind = rep.totals[static_cast<std::size_t>(World::Individual)][k];
            const auto& mrg = rep.totals[static_cast<std::size_t>(World::Merged)][k];
            double dt = static_cast<double>(mrg.transplants - ind.transplants);
            double ds = mrg.score - ind.score;
            gain_t += dt;
            gain_s += ds;
            summary.gain_transplants_per_registry[k] += invR * dt;
            summary.gain_score_per_registry[k] += invR * ds;
        }
        summary.per_replication_gain_transplants.push_back(gain_t);
        summary.per_replication_gain_score.push_back(gain_s);
        summary.gain_transplants += invR * gain_t;
        summary.gain_score += invR * gain_s;
        if (gain_t >= 0.0) summary.fraction_gain_nonnegative += invR;
    }

    // Across-replication averages per round, plus running cumulative lines.
    summary.series.resize(static_cast<std::size_t>(sim.config().rounds));
    for (int round = 0; round < sim.config().rounds; ++round) {
        RoundTimePoint& pt = summary.series[static_cast<std::size_t>(round)];
        pt.round = round;
        for (int w = 0; w < kWorldCount; ++w) {
            pt.transplants[static_cast<std::size_t>(w)].assign(K, 0.0);
            pt.score[static_cast<std::size_t>(w)].assign(K, 0.0);
            pt.cumulative_transplants[static_cast<std::size_t>(w)].assign(K, 0.0);
            pt.cumulative_score[static_cast<std::size_t>(w)].assign(K, 0.0);
            pt.pool_after[static_cast<std::size_t>(w)].assign(K, 0.0);
            pt.dropouts[static_cast<std::size_t>(w)].assign(K, 0.0);
        }
        for (const ReplicationResult& rep : results) {
            const RoundRecord& rec = rep.rounds[static_cast<std::size_t>(round)];
            for (int w = 0; w < kWorldCount; ++w) {
                for (std::size_t k = 0; k < K; ++k) {
                    const RegistryRoundStats& st = rec.by_world[static_cast<std::size_t>(w)][k];
                    pt.transplants[static_cast<std::size_t>(w)][k] +=
                        invR * static_cast<double>(st.transplants);
                    pt.score[static_cast<std::size_t>(w)][k] += invR * st.score;
                    pt.pool_after[static_cast<std::size_t>(w)][k] +=
                        invR * static_cast<double>(st.pool_after);
                    pt.dropouts[static_cast<std::size_t>(w)][k] +=
                        invR * static_cast<double>(st.dropouts);
                }
            }
        }
        for (int w = 0; w < kWorldCount; ++w) {
            for (std::size_t k = 0; k < K; ++k) {
                double prev_t = round == 0 ? 0.0
                                           : summary.series[static_cast<std::size_t>(round - 1)]
                                                 .cumulative_transplants[static_cast<std::size_t>(w)][k];
                double prev_s = round == 0 ? 0.0
                                           : summary.series[static_cast<std::size_t>(round - 1)]
                                                 .cumulative_score[static_cast<std::size_t>(w)][k];
                pt.cumulative_transplants[static_cast<std::size_t>(w)][k] =
                    prev_t + pt.transplants[static_cast<std::size_t>(w)][k];
                pt.cumulative_score[static_cast<std::size_t>(w)][k] =
                    prev_s + pt.score[static_cast<std::size_t>(w)][k];
            }
        }
    }
    return summary;
}

} // namespace kex
