#pragma once

#include <algorithm>
#include <filesystem>
#include <string>
#include <vector>

#include "kex/domain.hpp"
#include "kex/rng.hpp"

namespace kextest {

// Random instance in the spirit of the solver checks: |V| vertices spread
// over `registries` registries, arc probability `density`, weights random
// multiples of 0.25 in [10, 150].
inline kex::CompatibilityGraph random_graph(std::uint64_t seed, int vertices, double density,
                                            int registries) {
    kex::Rng rng(kex::Rng::mix(seed));
    std::vector<kex::Pair> pool;
    for (int v = 0; v < vertices; ++v) {
        kex::Pair p;
        p.id = static_cast<kex::PairId>(v);
        p.registry = rng.uniform_int(0, registries - 1);
        pool.push_back(p);
    }
    std::vector<kex::Arc> arcs;
    for (int i = 0; i < vertices; ++i) {
        for (int j = 0; j < vertices; ++j) {
            if (i == j || !rng.bernoulli(density)) continue;
            double w = 10.0 + 0.25 * static_cast<double>(rng.uniform_int(0, 560));
            arcs.push_back(kex::Arc{i, j, w});
        }
    }
    return kex::CompatibilityGraph(std::move(pool), std::move(arcs));
}

// Induced subgraph on the vertices of one registry (domestic arcs only).
inline kex::CompatibilityGraph registry_subgraph(const kex::CompatibilityGraph& g, int k) {
    std::vector<kex::Pair> pool;
    std::vector<int> new_index(static_cast<std::size_t>(g.vertex_count()), -1);
    for (int v = 0; v < g.vertex_count(); ++v) {
        if (g.registry_of(v) == k) {
            new_index[static_cast<std::size_t>(v)] = static_cast<int>(pool.size());
            pool.push_back(g.pair(v));
        }
    }
    std::vector<kex::Arc> arcs;
    for (const kex::Arc& a : g.arcs()) {
        int f = new_index[static_cast<std::size_t>(a.from)];
        int t = new_index[static_cast<std::size_t>(a.to)];
        if (f >= 0 && t >= 0) arcs.push_back(kex::Arc{f, t, a.weight});
    }
    return kex::CompatibilityGraph(std::move(pool), std::move(arcs));
}

// Canonical form of a solution: sorted list of sorted cycle vertex-id lists.
inline std::vector<std::vector<kex::PairId>> canonical_cycles(const kex::Solution& sol,
                                                              const kex::CompatibilityGraph& g) {
    std::vector<std::vector<kex::PairId>> out;
    for (const kex::ExchangeCycle& c : sol.cycles()) {
        std::vector<kex::PairId> ids;
        for (int v : c.vertices()) ids.push_back(g.pair(v).id);
        std::sort(ids.begin(), ids.end());
        out.push_back(ids);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Scratch directory under the system temp root, wiped on construction and
// destruction.
class TempDir {
public:
    explicit TempDir(const std::string& name)
        : path_(std::filesystem::temp_directory_path() / ("kex_test_" + name)) {
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }
    std::string str() const { return path_.string(); }

private:
    std::filesystem::path path_;
};

inline std::string fixture_path(const std::string& name) {
    return std::string(KEX_FIXTURE_DIR) + "/" + name;
}

} // namespace kextest
