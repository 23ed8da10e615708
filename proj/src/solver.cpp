#include "kex/solver.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <set>

#include "kex/errors.hpp"

namespace kex {

namespace {

// Scores are exact multiples of 0.25, so two packings differ by at least
// 0.25 whenever they differ at all. Fractional greedy bounds are computed
// in floating point, though, so bound comparisons keep a margin well below
// that quantum.
constexpr double kScoreQuantum = 0.125;

struct CycleLite {
    std::vector<int> verts;
    std::vector<std::uint64_t> mask;
    double weight = 0.0;
    int length = 0;
    double density = 0.0; // weight / length
};

bool disjoint(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
    for (std::size_t w = 0; w < a.size(); ++w)
        if (a[w] & b[w]) return false;
    return true;
}

// Cycle-wise feasibility: length within the global bound, domestic arcs
// within each registry's own bound.
bool cycle_feasible(const ExchangeCycle& c, const SolveSpec& spec) {
    if (c.length() > spec.global_bound) return false;
    const auto& dom = c.domestic_counts();
    for (std::size_t k = 0; k < dom.size(); ++k)
        if (dom[k] > spec.registry_bounds[k]) return false;
    return true;
}

// Branch-and-bound over the cycle set in canonical id order. Branches
// include-first, so among selections tied on (count, score) the first one
// found is the one with the lexicographically smallest sorted id list;
// the incumbent is therefore only replaced on strict improvement.
class PackingSearch {
public:
    PackingSearch(const SolveSpec& spec, const std::vector<ExchangeCycle>& cycles,
                  bool use_bounds)
        : spec_(spec), use_bounds_(use_bounds),
          registry_count_(static_cast<int>(spec.registry_bounds.size())),
          words_((static_cast<std::size_t>(spec.graph.vertex_count()) + 63) / 64 + 1) {
        lite_.reserve(cycles.size());
        for (const ExchangeCycle& c : cycles) {
            CycleLite l;
            l.verts = c.vertices();
            l.weight = c.weight();
            l.length = c.length();
            l.density = l.weight / static_cast<double>(l.length);
            l.mask.assign(words_, 0);
            for (int v : l.verts)
                l.mask[static_cast<std::size_t>(v) / 64] |= 1ULL << (v % 64);
            lite_.push_back(std::move(l));
        }
        used_.assign(words_, 0);
        matched_.assign(static_cast<std::size_t>(registry_count_), 0);
        if (spec.ir_floor) floor_ = *spec.ir_floor;
        best_vertex_density_.assign(static_cast<std::size_t>(spec.graph.vertex_count()), 0.0);
        coverable_.assign(static_cast<std::size_t>(spec.graph.vertex_count()), 0);
    }

    // Chosen cycle ids, or nullopt when no selection meets the floors.
    std::optional<std::vector<int>> run() {
        descend(0);
        if (!has_incumbent_) return std::nullopt;
        return incumbent_ids_;
    }

    // Upper bound on matchable vertices per registry over all cycles; used
    // for the infeasibility diagnostic.
    std::vector<int> coverable_per_registry() const {
        std::vector<char> seen(static_cast<std::size_t>(spec_.graph.vertex_count()), 0);
        std::vector<int> per(static_cast<std::size_t>(registry_count_), 0);
        for (const CycleLite& c : lite_) {
            for (int v : c.verts) {
                if (!seen[static_cast<std::size_t>(v)]) {
                    seen[static_cast<std::size_t>(v)] = 1;
                    ++per[static_cast<std::size_t>(spec_.graph.registry_of(v))];
                }
            }
        }
        return per;
    }

private:
    bool floors_met() const {
        for (std::size_t k = 0; k < floor_.size(); ++k)
            if (matched_[k] < floor_[k]) return false;
        return true;
    }

    void consider_incumbent() {
        if (!floor_.empty() && !floors_met()) return;
        if (has_incumbent_ &&
            (count_ < incumbent_count_ ||
             (count_ == incumbent_count_ && score_ <= incumbent_score_)))
            return;
        has_incumbent_ = true;
        incumbent_count_ = count_;
        incumbent_score_ = score_;
        incumbent_ids_ = chosen_;
    }

    void descend(int pos) {
        consider_incumbent();

        // Fractional greedy relaxation over the still-placeable tail:
        // every usable vertex contributes one transplant and at most the
        // best weight density among remaining cycles through it.
        int coverable_count = 0;
        std::vector<int> coverable_per_reg(static_cast<std::size_t>(registry_count_), 0);
        std::vector<int> touched;
        for (int c = pos; c < static_cast<int>(lite_.size()); ++c) {
            const CycleLite& l = lite_[static_cast<std::size_t>(c)];
            if (!disjoint(l.mask, used_)) continue;
            for (int v : l.verts) {
                auto vi = static_cast<std::size_t>(v);
                if (!coverable_[vi]) {
                    coverable_[vi] = 1;
                    touched.push_back(v);
                    ++coverable_count;
                    ++coverable_per_reg[static_cast<std::size_t>(spec_.graph.registry_of(v))];
                }
                if (l.density > best_vertex_density_[vi]) best_vertex_density_[vi] = l.density;
            }
        }
        double score_bound = 0.0;
        for (int v : touched) score_bound += best_vertex_density_[static_cast<std::size_t>(v)];

        bool reachable = true;
        for (std::size_t k = 0; k < floor_.size(); ++k) {
            if (matched_[k] + coverable_per_reg[k] < floor_[k]) {
                reachable = false;
                break;
            }
        }
        bool beatable = true;
        if (use_bounds_ && has_incumbent_) {
            int count_bound = count_ + coverable_count;
            if (count_bound < incumbent_count_ ||
                (count_bound == incumbent_count_ &&
                 score_ + score_bound < incumbent_score_ + kScoreQuantum))
                beatable = false;
        }
        for (int v : touched) {
            coverable_[static_cast<std::size_t>(v)] = 0;
            best_vertex_density_[static_cast<std::size_t>(v)] = 0.0;
        }
        if (!reachable || !beatable) return;

        for (int c = pos; c < static_cast<int>(lite_.size()); ++c) {
            if (!disjoint(lite_[static_cast<std::size_t>(c)].mask, used_)) continue;
            include(c);
            descend(c + 1);
            exclude(c);
        }
    }

    void include(int c) {
        const CycleLite& l = lite_[static_cast<std::size_t>(c)];
        for (std::size_t w = 0; w < words_; ++w) used_[w] |= l.mask[w];
        for (int v : l.verts)
            ++matched_[static_cast<std::size_t>(spec_.graph.registry_of(v))];
        count_ += l.length;
        score_ += l.weight;
        chosen_.push_back(c);
    }

    void exclude(int c) {
        const CycleLite& l = lite_[static_cast<std::size_t>(c)];
        for (std::size_t w = 0; w < words_; ++w) used_[w] &= ~l.mask[w];
        for (int v : l.verts)
            --matched_[static_cast<std::size_t>(spec_.graph.registry_of(v))];
        count_ -= l.length;
        score_ -= l.weight;
        chosen_.pop_back();
    }

    const SolveSpec& spec_;
    bool use_bounds_;
    int registry_count_;
    std::size_t words_;
    std::vector<CycleLite> lite_;

    std::vector<std::uint64_t> used_;
    std::vector<int> matched_;
    std::vector<int> floor_;
    std::vector<int> chosen_;
    int count_ = 0;
    double score_ = 0.0;

    bool has_incumbent_ = false;
    int incumbent_count_ = 0;
    double incumbent_score_ = 0.0;
    std::vector<int> incumbent_ids_;

    // Scratch for the bound computation, zeroed again after each node.
    std::vector<double> best_vertex_density_;
    std::vector<char> coverable_;
};

std::vector<ExchangeCycle> feasible_cycles(const SolveSpec& spec) {
    std::vector<ExchangeCycle> all =
        enumerate_cycles(spec.graph, spec.global_bound, spec.cycle_cap);
    std::vector<ExchangeCycle> keep;
    keep.reserve(all.size());
    for (ExchangeCycle& c : all)
        if (cycle_feasible(c, spec)) keep.push_back(std::move(c));
    return keep;
}

Solution assemble(const SolveSpec& spec, const std::vector<ExchangeCycle>& cycles,
                  const std::vector<int>& chosen_ids) {
    std::vector<ExchangeCycle> picked;
    picked.reserve(chosen_ids.size());
    for (int id : chosen_ids) picked.push_back(cycles[static_cast<std::size_t>(id)]);
    Solution sol(spec.graph, std::move(picked),
                 static_cast<int>(spec.registry_bounds.size()));
    if (spec.ir_floor) {
        for (std::size_t k = 0; k < spec.ir_floor->size(); ++k) {
            if (sol.matched_per_registry()[k] < (*spec.ir_floor)[k])
                throw std::logic_error("internal: solution violates its own IR floor");
        }
    }
    return sol;
}

[[noreturn]] void throw_infeasible(const SolveSpec& spec, const PackingSearch& search) {
    const std::vector<int>& floors = *spec.ir_floor;
    std::vector<int> coverable = search.coverable_per_registry();
    std::string msg = "no solution satisfies the individual-rationality floors;";
    bool named = false;
    for (std::size_t k = 0; k < floors.size(); ++k) {
        if (floors[k] > coverable[k]) {
            msg += " registry " + std::to_string(k + 1) + " floor " +
                   std::to_string(floors[k]) + " > " + std::to_string(coverable[k]) +
                   " matchable;";
            named = true;
        }
    }
    if (!named) {
        msg += " floors (";
        for (std::size_t k = 0; k < floors.size(); ++k)
            msg += (k ? "," : "") + std::to_string(floors[k]);
        msg += ") are jointly unsatisfiable";
    }
    throw InfeasibleError(msg);
}

} // namespace

void SolveSpec::validate() const {
    if (static_cast<int>(registry_bounds.size()) < graph.registry_count())
        throw ContractViolation("registry_bounds does not cover every registry in the graph");
    for (std::size_t k = 0; k < registry_bounds.size(); ++k)
        if (registry_bounds[k] < 2)
            throw ContractViolation("registry bound B_" + std::to_string(k + 1) +
                                    " must be >= 2");
    if (global_bound < 2) throw ContractViolation("global bound must be >= 2");
    if (ir_floor) {
        if (ir_floor->size() != registry_bounds.size())
            throw ContractViolation("ir_floor size differs from registry_bounds size");
        std::vector<char> participating(registry_bounds.size(), 0);
        for (const Pair& p : graph.pairs())
            participating[static_cast<std::size_t>(p.registry)] = 1;
        for (std::size_t k = 0; k < ir_floor->size(); ++k) {
            if ((*ir_floor)[k] < 0)
                throw ContractViolation("ir_floor entries must be >= 0");
            if (participating[k] && global_bound < registry_bounds[k])
                throw ContractViolation(
                    "global bound " + std::to_string(global_bound) +
                    " is below the cycle bound of participating registry " +
                    std::to_string(k + 1) + "; the IR floors are not guaranteed feasible");
        }
    }
}

Solution solve(const SolveSpec& spec) {
    spec.validate();
    std::vector<ExchangeCycle> cycles = feasible_cycles(spec);
    PackingSearch search(spec, cycles, /*use_bounds=*/true);
    auto chosen = search.run();
    if (!chosen) throw_infeasible(spec, search);
    return assemble(spec, cycles, *chosen);
}

// Deliberately naive and separate from PackingSearch: no bounds, no bitmask
// tricks, explicit three-way comparison. Results are compared against solve
// in tests, so the two paths must not share search logic.
Solution brute_force(const SolveSpec& spec) {
    if (spec.graph.vertex_count() > 14)
        throw ContractViolation("brute_force refuses instances with more than 14 vertices");
    spec.validate();
    const CompatibilityGraph& g = spec.graph;
    const int registry_count = static_cast<int>(spec.registry_bounds.size());

    // Re-derive cycle feasibility straight from the graph instead of
    // trusting the precomputed domestic counts.
    std::vector<ExchangeCycle> all =
        enumerate_cycles_serial(g, spec.global_bound, spec.cycle_cap);
    std::vector<ExchangeCycle> feasible;
    for (ExchangeCycle& c : all) {
        const auto& vs = c.vertices();
        if (static_cast<int>(vs.size()) > spec.global_bound) continue;
        std::vector<int> domestic(static_cast<std::size_t>(registry_count), 0);
        for (std::size_t i = 0; i < vs.size(); ++i) {
            int from = vs[i];
            int to = vs[(i + 1) % vs.size()];
            if (g.registry_of(from) == g.registry_of(to))
                ++domestic[static_cast<std::size_t>(g.registry_of(from))];
        }
        bool ok = true;
        for (int k = 0; k < registry_count; ++k)
            if (domestic[static_cast<std::size_t>(k)] >
                spec.registry_bounds[static_cast<std::size_t>(k)])
                ok = false;
        if (ok) feasible.push_back(std::move(c));
    }

    const int total = static_cast<int>(feasible.size());
    std::vector<char> used(static_cast<std::size_t>(g.vertex_count()), 0);
    std::vector<int> current;
    bool have_best = false;
    int best_count = 0;
    double best_score = 0.0;
    std::vector<int> best_ids;

    auto evaluate = [&]() {
        int count = 0;
        double score = 0.0;
        std::vector<int> matched(static_cast<std::size_t>(registry_count), 0);
        for (int id : current) {
            const ExchangeCycle& c = feasible[static_cast<std::size_t>(id)];
            count += c.length();
            score += c.weight();
            for (int v : c.vertices())
                ++matched[static_cast<std::size_t>(g.registry_of(v))];
        }
        if (spec.ir_floor) {
            for (std::size_t k = 0; k < spec.ir_floor->size(); ++k)
                if (matched[k] < (*spec.ir_floor)[k]) return;
        }
        bool better;
        if (!have_best) {
            better = true;
        } else if (count != best_count) {
            better = count > best_count;
        } else if (score != best_score) {
            better = score > best_score;
        } else {
            better = std::lexicographical_compare(current.begin(), current.end(),
                                                  best_ids.begin(), best_ids.end());
        }
        if (better) {
            have_best = true;
            best_count = count;
            best_score = score;
            best_ids = current;
        }
    };

    std::function<void(int)> walk = [&](int idx) {
        if (idx == total) {
            evaluate();
            return;
        }
        const ExchangeCycle& c = feasible[static_cast<std::size_t>(idx)];
        bool free = true;
        for (int v : c.vertices())
            if (used[static_cast<std::size_t>(v)]) free = false;
        if (free) {
            for (int v : c.vertices()) used[static_cast<std::size_t>(v)] = 1;
            current.push_back(idx);
            walk(idx + 1);
            current.pop_back();
            for (int v : c.vertices()) used[static_cast<std::size_t>(v)] = 0;
        }
        walk(idx + 1);
    };
    walk(0);

    if (!have_best) {
        PackingSearch search(spec, feasible, /*use_bounds=*/false);
        throw_infeasible(spec, search);
    }

    std::vector<ExchangeCycle> picked;
    for (int id : best_ids) picked.push_back(feasible[static_cast<std::size_t>(id)]);
    return Solution(g, std::move(picked), registry_count);
}

std::vector<Solution> independent_solutions(const std::vector<CompatibilityGraph>& pools,
                                            const std::vector<int>& bounds) {
    if (pools.size() != bounds.size())
        throw ContractViolation("independent_solutions: one graph per registry required");
    std::vector<Solution> out;
    out.reserve(pools.size());
    for (std::size_t k = 0; k < pools.size(); ++k) {
        SolveSpec spec{pools[k], bounds, bounds[k], std::nullopt};
        out.push_back(solve(spec));
    }
    return out;
}

FormulationCheckReport verify_compact(const Solution& solution, const SolveSpec& spec) {
    FormulationCheckReport report;
    const CompatibilityGraph& g = spec.graph;
    const int n = g.vertex_count();
    const int registry_count = static_cast<int>(spec.registry_bounds.size());
    const int copies = (n + 1) / 2; // M, ceiling of |V|/2

    auto add = [&report](bool& flag, const std::string& constraint, int index,
                         const std::string& detail) {
        flag = false;
        report.violations.push_back(CompactViolation{constraint, index, detail});
    };

    const auto& cycles = solution.cycles();
    if (static_cast<int>(cycles.size()) > copies) {
        // A cycle beyond copy M would need variables the model does not have.
        add(report.binary_ok, "copies", static_cast<int>(cycles.size()) - 1,
            "solution uses " + std::to_string(cycles.size()) + " copies but only M=" +
                std::to_string(copies) + " exist");
    }

    // Selected arcs per copy; x_{ij}^l implied 1 for each entry.
    std::vector<int> out_degree_total(static_cast<std::size_t>(n), 0);
    std::vector<int> tails_per_registry(static_cast<std::size_t>(registry_count), 0);

    for (std::size_t l = 0; l < cycles.size(); ++l) {
        const ExchangeCycle& cyc = cycles[l];
        std::set<std::pair<int, int>> seen_arcs;
        std::vector<int> in_deg(static_cast<std::size_t>(n), 0);
        std::vector<int> out_deg(static_cast<std::size_t>(n), 0);
        std::vector<int> domestic(static_cast<std::size_t>(registry_count), 0);
        int arc_count = 0;

        for (const Arc& a : cyc.arcs()) {
            if (!g.has_arc(a.from, a.to))
                add(report.binary_ok, "binary", static_cast<int>(l),
                    "selected arc (" + std::to_string(a.from) + "," + std::to_string(a.to) +
                        ") is not a model variable");
            if (!seen_arcs.emplace(a.from, a.to).second)
                add(report.binary_ok, "binary", static_cast<int>(l),
                    "arc selected twice in one copy; x would exceed 1");
            ++arc_count;
            ++out_deg[static_cast<std::size_t>(a.from)];
            ++in_deg[static_cast<std::size_t>(a.to)];
            ++out_degree_total[static_cast<std::size_t>(a.from)];
            ++tails_per_registry[static_cast<std::size_t>(g.registry_of(a.from))];
            if (g.registry_of(a.from) == g.registry_of(a.to))
                ++domestic[static_cast<std::size_t>(g.registry_of(a.from))];
        }

        for (int v = 0; v < n; ++v) {
            if (in_deg[static_cast<std::size_t>(v)] != out_deg[static_cast<std::size_t>(v)])
                add(report.flow_conservation_ok, "flow", static_cast<int>(l),
                    "vertex " + std::to_string(v) + " has in-degree " +
                        std::to_string(in_deg[static_cast<std::size_t>(v)]) +
                        " but out-degree " +
                        std::to_string(out_deg[static_cast<std::size_t>(v)]));
        }
        if (arc_count > spec.global_bound)
            add(report.global_bound_ok, "global_bound", static_cast<int>(l),
                "copy selects " + std::to_string(arc_count) + " arcs, global bound is " +
                    std::to_string(spec.global_bound));
        for (int k = 0; k < registry_count; ++k) {
            if (domestic[static_cast<std::size_t>(k)] > spec.registry_bounds[static_cast<std::size_t>(k)])
                add(report.registry_bound_ok, "registry_bound", k,
                    "copy " + std::to_string(l) + " selects " +
                        std::to_string(domestic[static_cast<std::size_t>(k)]) +
                        " domestic arcs in registry " + std::to_string(k + 1) +
                        ", bound is " +
                        std::to_string(spec.registry_bounds[static_cast<std::size_t>(k)]));
        }
    }

    for (int v = 0; v < n; ++v) {
        if (out_degree_total[static_cast<std::size_t>(v)] > 1)
            add(report.vertex_capacity_ok, "vertex", v,
                "vertex " + std::to_string(v) + " donates " +
                    std::to_string(out_degree_total[static_cast<std::size_t>(v)]) +
                    " times across copies");
    }

    if (spec.ir_floor) {
        for (int k = 0; k < registry_count; ++k) {
            int floor_k = (*spec.ir_floor)[static_cast<std::size_t>(k)];
            if (tails_per_registry[static_cast<std::size_t>(k)] < floor_k)
                add(report.ir_ok, "ir", k,
                    "registry " + std::to_string(k + 1) + " receives " +
                        std::to_string(tails_per_registry[static_cast<std::size_t>(k)]) +
                        " transplants, floor is " + std::to_string(floor_k));
        }
    }

    return report;
}

} // namespace kex
