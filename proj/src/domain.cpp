#include "kex/domain.hpp"

#include <algorithm>
#include <set>

namespace kex {

const char* to_string(BloodGroup bg) {
    switch (bg) {
    case BloodGroup::O: return "O";
    case BloodGroup::A: return "A";
    case BloodGroup::B: return "B";
    case BloodGroup::AB: return "AB";
    }
    return "?";
}

BloodGroup blood_group_from_string(const std::string& s) {
    if (s == "O") return BloodGroup::O;
    if (s == "A") return BloodGroup::A;
    if (s == "B") return BloodGroup::B;
    if (s == "AB") return BloodGroup::AB;
    throw ContractViolation("unknown blood group: '" + s + "'");
}

bool blood_compatible(BloodGroup donor, BloodGroup recipient) {
    switch (donor) {
    case BloodGroup::O: return true;
    case BloodGroup::A: return recipient == BloodGroup::A || recipient == BloodGroup::AB;
    case BloodGroup::B: return recipient == BloodGroup::B || recipient == BloodGroup::AB;
    case BloodGroup::AB: return recipient == BloodGroup::AB;
    }
    return false;
}

static void check_probability_vector(const std::vector<double>& v, const std::string& what) {
    if (v.size() != kBloodGroupCount)
        throw ContractViolation(what + ": expected 4 entries, got " + std::to_string(v.size()));
    double sum = 0.0;
    for (double p : v) {
        if (p < 0.0) throw ContractViolation(what + ": negative entry");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw ContractViolation(what + ": entries sum to " + std::to_string(sum) + ", expected 1");
}

void Registry::validate() const {
    if (cycle_bound < 2)
        throw ContractViolation("registry " + name + ": cycle_bound must be >= 2");
    if (arrival_low > arrival_high)
        throw ContractViolation("registry " + name + ": arrival_low > arrival_high");
    if (arrival_low < 0)
        throw ContractViolation("registry " + name + ": arrival_low must be >= 0");
    if (dropout_probability < 0.0 || dropout_probability > 1.0)
        throw ContractViolation("registry " + name + ": dropout_probability outside [0,1]");
    check_probability_vector(donor_bg_distribution, "registry " + name + " donor distribution");
    check_probability_vector(recipient_bg_distribution, "registry " + name + " recipient distribution");
}

CompatibilityGraph::CompatibilityGraph(std::vector<Pair> pool, std::vector<Arc> arcs)
    : pairs_(std::move(pool)), arcs_(std::move(arcs)) {
    std::sort(pairs_.begin(), pairs_.end(),
              [](const Pair& a, const Pair& b) { return a.id < b.id; });
    id_to_index_.reserve(pairs_.size());
    for (int v = 0; v < static_cast<int>(pairs_.size()); ++v) {
        const Pair& p = pairs_[static_cast<std::size_t>(v)];
        if (!id_to_index_.emplace(p.id, v).second)
            throw ContractViolation("duplicate pair id " + std::to_string(p.id));
        registry_count_ = std::max(registry_count_, p.registry + 1);
    }

    std::set<std::pair<int, int>> seen;
    for (const Arc& a : arcs_) {
        if (a.from < 0 || a.from >= vertex_count() || a.to < 0 || a.to >= vertex_count())
            throw ContractViolation("arc endpoint out of range");
        if (a.from == a.to)
            throw ContractViolation("self-loop arc at vertex " + std::to_string(a.from));
        if (!(a.weight > 0.0))
            throw ContractViolation("non-positive arc weight");
        if (!seen.emplace(a.from, a.to).second)
            throw ContractViolation("duplicate arc (" + std::to_string(a.from) + "," +
                                    std::to_string(a.to) + ")");
    }

    adj_.assign(pairs_.size(), {});
    for (const Arc& a : arcs_)
        adj_[static_cast<std::size_t>(a.from)].emplace_back(a.to, a.weight);
    for (auto& lst : adj_)
        std::sort(lst.begin(), lst.end());
}

int CompatibilityGraph::arc_index(int from, int to) const {
    for (int i = 0; i < static_cast<int>(arcs_.size()); ++i) {
        if (arcs_[static_cast<std::size_t>(i)].from == from &&
            arcs_[static_cast<std::size_t>(i)].to == to)
            return i;
    }
    return -1;
}

int CompatibilityGraph::index_of(PairId id) const {
    auto it = id_to_index_.find(id);
    return it == id_to_index_.end() ? -1 : it->second;
}

ExchangeCycle::ExchangeCycle(const CompatibilityGraph& graph, std::vector<int> loop)
    : vertices_(std::move(loop)) {
    if (vertices_.size() < 2)
        throw ContractViolation("exchange cycle needs at least 2 vertices");
    std::set<int> distinct(vertices_.begin(), vertices_.end());
    if (distinct.size() != vertices_.size())
        throw ContractViolation("exchange cycle repeats a vertex");

    domestic_counts_.assign(static_cast<std::size_t>(graph.registry_count()), 0);
    const auto& adj = graph.adjacency();
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        int from = vertices_[i];
        int to = vertices_[(i + 1) % vertices_.size()];
        const auto& lst = adj[static_cast<std::size_t>(from)];
        auto it = std::lower_bound(lst.begin(), lst.end(), std::make_pair(to, 0.0));
        if (it == lst.end() || it->first != to)
            throw ContractViolation("cycle uses arc absent from the graph: " +
                                    std::to_string(from) + "->" + std::to_string(to));
        arcs_.push_back(Arc{from, to, it->second});
        weight_ += it->second;
        if (graph.registry_of(from) == graph.registry_of(to))
            ++domestic_counts_[static_cast<std::size_t>(graph.registry_of(from))];
    }
}

Solution::Solution(const CompatibilityGraph& graph, std::vector<ExchangeCycle> cycles,
                   int registry_count)
    : cycles_(std::move(cycles)) {
    matched_per_registry_.assign(static_cast<std::size_t>(registry_count), 0);
    std::set<int> used;
    for (const ExchangeCycle& c : cycles_) {
        for (int v : c.vertices()) {
            if (!used.insert(v).second)
                throw ContractViolation("solution cycles share vertex " + std::to_string(v));
            ++matched_per_registry_[static_cast<std::size_t>(graph.registry_of(v))];
        }
        total_transplants_ += c.length();
        total_score_ += c.weight();
    }
}

std::vector<int> Solution::matched_vertices() const {
    std::vector<int> out;
    for (const ExchangeCycle& c : cycles_)
        out.insert(out.end(), c.vertices().begin(), c.vertices().end());
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace kex
