#include <atomic>

#include "kex/errors.hpp"
#include "kex/solver.hpp"

namespace kex {

namespace {

// Path-extension DFS from `root` visiting only vertices with a larger index,
// so every cycle is found exactly once, rooted at its smallest vertex.
// Recursion depth is bounded by max_len. Returns false once the shared
// budget runs out.
bool extend_path(const CompatibilityGraph& graph, int root, int max_len,
                 std::vector<int>& path, std::vector<char>& on_path,
                 std::atomic<std::size_t>& found, std::size_t cap,
                 std::vector<ExchangeCycle>& out) {
    const auto& next = graph.adjacency()[static_cast<std::size_t>(path.back())];
    for (const auto& [u, w] : next) {
        (void)w;
        if (u == root && path.size() >= 2) {
            if (found.fetch_add(1) + 1 > cap) return false;
            out.emplace_back(graph, path);
            continue;
        }
        if (u <= root || on_path[static_cast<std::size_t>(u)]) continue;
        if (static_cast<int>(path.size()) >= max_len) continue;
        path.push_back(u);
        on_path[static_cast<std::size_t>(u)] = 1;
        bool ok = extend_path(graph, root, max_len, path, on_path, found, cap, out);
        on_path[static_cast<std::size_t>(u)] = 0;
        path.pop_back();
        if (!ok) return false;
    }
    return true;
}

bool dfs_from_root(const CompatibilityGraph& graph, int root, int max_len,
                   std::atomic<std::size_t>& found, std::size_t cap,
                   std::vector<ExchangeCycle>& out) {
    std::vector<int> path{root};
    std::vector<char> on_path(static_cast<std::size_t>(graph.vertex_count()), 0);
    on_path[static_cast<std::size_t>(root)] = 1;
    return extend_path(graph, root, max_len, path, on_path, found, cap, out);
}

[[noreturn]] void throw_cap(std::size_t cap) {
    throw CapacityError("cycle enumeration exceeded the configured cap of " +
                        std::to_string(cap) + " cycles");
}

} // namespace

std::vector<ExchangeCycle> enumerate_cycles_serial(const CompatibilityGraph& graph,
                                                   int max_len, std::size_t cap) {
    if (max_len < 2) throw ContractViolation("max cycle length must be >= 2");
    std::atomic<std::size_t> found{0};
    std::vector<ExchangeCycle> out;
    for (int root = 0; root < graph.vertex_count(); ++root) {
        if (!dfs_from_root(graph, root, max_len, found, cap, out)) throw_cap(cap);
    }
    return out;
}

std::vector<ExchangeCycle> enumerate_cycles(const CompatibilityGraph& graph, int max_len,
                                            std::size_t cap) {
    if (max_len < 2) throw ContractViolation("max cycle length must be >= 2");
    const int n = graph.vertex_count();
    std::vector<std::vector<ExchangeCycle>> per_root(static_cast<std::size_t>(n));
    std::atomic<std::size_t> found{0};
    std::atomic<bool> over{false};

#pragma omp parallel for schedule(dynamic, 1)
    for (int root = 0; root < n; ++root) {
        if (over.load(std::memory_order_relaxed)) continue;
        if (!dfs_from_root(graph, root, max_len, found, cap,
                           per_root[static_cast<std::size_t>(root)]))
            over.store(true, std::memory_order_relaxed);
    }
    if (over.load()) throw_cap(cap);

    std::vector<ExchangeCycle> out;
    out.reserve(found.load());
    for (auto& bucket : per_root)
        for (auto& c : bucket) out.push_back(std::move(c));
    return out;
}

} // namespace kex
