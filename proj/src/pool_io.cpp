#include "kex/pool_io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "kex/scoring.hpp"

namespace kex {

namespace {

[[noreturn]] void fail(const std::string& path, int line, const std::string& msg) {
    throw IoError(path + ":" + std::to_string(line) + ": " + msg);
}

int parse_int(const std::string& tok, const std::string& path, int line) {
    try {
        std::size_t used = 0;
        int v = std::stoi(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        fail(path, line, "expected an integer, got '" + tok + "'");
    }
}

} // namespace

std::vector<int> PoolFile::registry_bounds() const {
    std::vector<int> bounds;
    for (const Registry& r : registries) bounds.push_back(r.cycle_bound);
    return bounds;
}

int PoolFile::effective_global_bound() const {
    if (global_bound > 0) return global_bound;
    int b = 2;
    for (const Registry& r : registries) b = std::max(b, r.cycle_bound);
    return b;
}

PoolFile load_pool_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open pool file: " + path);

    PoolFile pool;
    std::map<int, Registry> registries;
    std::vector<std::pair<PairId, PairId>> arcs;
    bool has_arcs = false;

    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw.substr(0, raw.find('#'));
        std::istringstream ss(line);
        std::vector<std::string> tok;
        for (std::string t; ss >> t;) tok.push_back(t);
        if (tok.empty()) continue;

        const std::string& kind = tok[0];
        if (kind == "registry") {
            if (tok.size() != 4) fail(path, line_no, "registry needs: index name cycle_bound");
            Registry r;
            r.index = parse_int(tok[1], path, line_no);
            r.name = tok[2];
            r.cycle_bound = parse_int(tok[3], path, line_no);
            if (!registries.emplace(r.index, r).second)
                fail(path, line_no, "registry " + tok[1] + " declared twice");
        } else if (kind == "global_bound") {
            if (tok.size() != 2) fail(path, line_no, "global_bound needs one value");
            pool.global_bound = parse_int(tok[1], path, line_no);
        } else if (kind == "seed") {
            if (tok.size() != 2) fail(path, line_no, "seed needs one value");
            pool.seed = static_cast<std::uint64_t>(std::stoull(tok[1]));
        } else if (kind == "crossmatch_p") {
            if (tok.size() != 2) fail(path, line_no, "crossmatch_p needs one value");
            pool.crossmatch_probability = std::stod(tok[1]);
            if (pool.crossmatch_probability < 0.0 || pool.crossmatch_probability > 1.0)
                fail(path, line_no, "crossmatch_p must be in [0,1]");
        } else if (kind == "ir_floor") {
            if (tok.size() == 2 && tok[1] == "auto") {
                pool.ir_auto = true;
            } else if (tok.size() >= 2) {
                std::vector<int> floors;
                for (std::size_t i = 1; i < tok.size(); ++i)
                    floors.push_back(parse_int(tok[i], path, line_no));
                pool.ir_floor = floors;
            } else {
                fail(path, line_no, "ir_floor needs 'auto' or one value per registry");
            }
        } else if (kind == "pair") {
            if (tok.size() != 21)
                fail(path, line_no,
                     "pair needs 20 fields: id registry donor_bg recipient_bg 6 donor "
                     "antigens, 6 recipient antigens, donor_age recipient_age arrival_round "
                     "self_crossmatch");
            Pair p;
            p.id = static_cast<PairId>(std::stoull(tok[1]));
            p.registry = parse_int(tok[2], path, line_no);
            try {
                p.donor_bg = blood_group_from_string(tok[3]);
                p.recipient_bg = blood_group_from_string(tok[4]);
            } catch (const ContractViolation& e) {
                fail(path, line_no, e.what());
            }
            int h[12];
            for (int i = 0; i < 12; ++i) h[i] = parse_int(tok[static_cast<std::size_t>(5 + i)], path, line_no);
            p.donor_hla = HlaProfile{h[0], h[1], h[2], h[3], h[4], h[5]};
            p.recipient_hla = HlaProfile{h[6], h[7], h[8], h[9], h[10], h[11]};
            p.donor_age = parse_int(tok[17], path, line_no);
            p.recipient_age = parse_int(tok[18], path, line_no);
            p.arrival_round = parse_int(tok[19], path, line_no);
            bool self_negative;
            if (tok[20] == "neg") self_negative = true;
            else if (tok[20] == "pos") self_negative = false;
            else {
                fail(path, line_no, "self_crossmatch must be 'pos' or 'neg'");
            }
            p.self_compatible = self_negative && blood_compatible(p.donor_bg, p.recipient_bg);
            if (p.self_compatible) p.own_match_score = edge_weight(p, p);
            pool.pairs.push_back(p);
        } else if (kind == "arc") {
            if (tok.size() != 3) fail(path, line_no, "arc needs: from_id to_id");
            has_arcs = true;
            arcs.emplace_back(static_cast<PairId>(std::stoull(tok[1])),
                              static_cast<PairId>(std::stoull(tok[2])));
        } else {
            fail(path, line_no, "unknown record '" + kind + "'");
        }
    }

    if (pool.pairs.empty()) throw IoError(path + ": pool file declares no pairs");

    // Registries referenced by pairs but not declared get defaults.
    int max_reg = 0;
    for (const Pair& p : pool.pairs) {
        if (p.registry < 0) throw IoError(path + ": negative registry index");
        max_reg = std::max(max_reg, p.registry);
    }
    for (const auto& [idx, reg] : registries) max_reg = std::max(max_reg, idx);
    for (int k = 0; k <= max_reg; ++k) {
        auto it = registries.find(k);
        if (it != registries.end()) {
            pool.registries.push_back(it->second);
        } else {
            Registry r;
            r.index = k;
            r.name = "Registry " + std::to_string(k + 1);
            pool.registries.push_back(r);
        }
    }

    std::set<PairId> ids;
    for (const Pair& p : pool.pairs)
        if (!ids.insert(p.id).second)
            throw IoError(path + ": duplicate pair id " + std::to_string(p.id));
    if (has_arcs) {
        for (const auto& [from, to] : arcs) {
            if (!ids.count(from) || !ids.count(to))
                throw IoError(path + ": arc references unknown pair id");
            if (from == to) throw IoError(path + ": arc cannot be a self-loop");
        }
        pool.negative_crossmatches = std::move(arcs);
    }
    if (pool.ir_floor && pool.ir_floor->size() != pool.registries.size())
        throw IoError(path + ": ir_floor needs one value per registry");
    return pool;
}

TissueSource pool_tissue_source(const PoolFile& pool) {
    if (pool.negative_crossmatches) {
        std::set<std::pair<PairId, PairId>> negatives(pool.negative_crossmatches->begin(),
                                                      pool.negative_crossmatches->end());
        return [negatives](const Pair& i, const Pair& j) {
            return negatives.count({i.id, j.id}) == 0; // absent = positive crossmatch
        };
    }
    return KeyedCrossmatch(pool.seed, pool.crossmatch_probability);
}

CompatibilityGraph build_pool_graph(const PoolFile& pool) {
    return build_graph(pool.pairs, pool_tissue_source(pool));
}

} // namespace kex
