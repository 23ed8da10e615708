#include "kex/graph_build.hpp"

#include <algorithm>

#include "kex/scoring.hpp"

namespace kex {

namespace {

std::vector<Pair> sorted_by_id(std::vector<Pair> pool) {
    std::sort(pool.begin(), pool.end(),
              [](const Pair& a, const Pair& b) { return a.id < b.id; });
    return pool;
}

// Candidate arc i -> j, or weight 0 when the arc is filtered out.
double arc_weight_or_zero(const Pair& i, const Pair& j, const TissueSource& cross_tissue) {
    if (!blood_compatible(i.donor_bg, j.recipient_bg)) return 0.0;
    if (cross_tissue(i, j)) return 0.0;
    double w = edge_weight(i, j);
    if (j.self_compatible && !(w > j.own_match_score)) return 0.0;
    return w;
}

} // namespace

CompatibilityGraph build_graph_serial(const std::vector<Pair>& pool,
                                      const TissueSource& cross_tissue) {
    std::vector<Pair> pairs = sorted_by_id(pool);
    const int n = static_cast<int>(pairs.size());
    std::vector<Arc> arcs;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            double w = arc_weight_or_zero(pairs[static_cast<std::size_t>(i)],
                                          pairs[static_cast<std::size_t>(j)], cross_tissue);
            if (w > 0.0) arcs.push_back(Arc{i, j, w});
        }
    }
    return CompatibilityGraph(std::move(pairs), std::move(arcs));
}

CompatibilityGraph build_graph(const std::vector<Pair>& pool,
                               const TissueSource& cross_tissue) {
    std::vector<Pair> pairs = sorted_by_id(pool);
    const int n = static_cast<int>(pairs.size());
    std::vector<std::vector<Arc>> rows(static_cast<std::size_t>(n));

#pragma omp parallel for schedule(dynamic, 8)
    for (int i = 0; i < n; ++i) {
        auto& row = rows[static_cast<std::size_t>(i)];
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            double w = arc_weight_or_zero(pairs[static_cast<std::size_t>(i)],
                                          pairs[static_cast<std::size_t>(j)], cross_tissue);
            if (w > 0.0) row.push_back(Arc{i, j, w});
        }
    }

    std::vector<Arc> arcs;
    for (auto& row : rows)
        arcs.insert(arcs.end(), row.begin(), row.end());
    return CompatibilityGraph(std::move(pairs), std::move(arcs));
}

} // namespace kex
