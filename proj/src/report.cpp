#include "kex/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "kex/errors.hpp"

namespace kex {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string fmt1(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.1f", x);
    return buf;
}

// Shortest round-trip representation, same as the JSON serializer uses.
std::string fmt_full(double x) {
    return json(x).dump();
}

// One decimal, with the loss marker the tables use for merged deficits.
std::string merged_cell(double merged, double individual) {
    std::string s = fmt1(merged);
    if (merged < individual - 1e-9) s += "*";
    return s;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

void write_csv(const Table& table, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    for (const auto& row : table) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << csv_escape(row[i]);
        }
        out << '\n';
    }
}

const RegistryAverages& avg(const ExperimentSummary& s, World w, std::size_t k) {
    return s.averages[static_cast<std::size_t>(w)][k];
}

} // namespace

Table comparison_table(const ExperimentSummary& summary) {
    Table t;
    t.push_back({"registry", "arrival", "dropout_probability", "cycle_bound",
                 "transplants_mkep", "transplants_independent", "score_mkep",
                 "score_independent", "gain_transplants", "gain_score"});
    const auto& regs = summary.config.registries;
    double tm = 0, ti = 0, sm = 0, si = 0;
    for (std::size_t k = 0; k < regs.size(); ++k) {
        const RegistryAverages& m = avg(summary, World::Merged, k);
        const RegistryAverages& i = avg(summary, World::Individual, k);
        tm += m.transplants;
        ti += i.transplants;
        sm += m.score;
        si += i.score;
        t.push_back({regs[k].name,
                     "U(" + std::to_string(regs[k].arrival_low) + "," +
                         std::to_string(regs[k].arrival_high) + ")",
                     fmt_full(regs[k].dropout_probability),
                     std::to_string(regs[k].cycle_bound),
                     merged_cell(m.transplants, i.transplants), fmt1(i.transplants),
                     merged_cell(m.score, i.score), fmt1(i.score),
                     fmt1(summary.gain_transplants_per_registry[k]),
                     fmt1(summary.gain_score_per_registry[k])});
    }
    t.push_back({"total", "", "", std::to_string(summary.config.global_bound),
                 merged_cell(tm, ti), fmt1(ti), merged_cell(sm, si), fmt1(si),
                 fmt1(summary.gain_transplants), fmt1(summary.gain_score)});
    return t;
}

Table blood_group_table(const ExperimentSummary& summary) {
    Table t;
    t.push_back({"registry", "blood_group", "matched_mkep", "matched_independent"});
    const auto& regs = summary.config.registries;
    for (std::size_t k = 0; k < regs.size(); ++k) {
        const RegistryAverages& m = avg(summary, World::Merged, k);
        const RegistryAverages& i = avg(summary, World::Individual, k);
        for (int bg = 0; bg < kBloodGroupCount; ++bg) {
            auto b = static_cast<std::size_t>(bg);
            t.push_back({regs[k].name, to_string(static_cast<BloodGroup>(bg)),
                         merged_cell(m.matched_by_bg[b], i.matched_by_bg[b]),
                         fmt1(i.matched_by_bg[b])});
        }
    }
    return t;
}

Table rounds_table(const ExperimentSummary& summary) {
    Table t;
    t.push_back({"round", "world", "registry", "transplants", "score",
                 "cumulative_transplants", "cumulative_score", "pool_after", "dropouts"});
    const auto& regs = summary.config.registries;
    for (const RoundTimePoint& pt : summary.series) {
        for (int w = 0; w < kWorldCount; ++w) {
            auto wi = static_cast<std::size_t>(w);
            for (std::size_t k = 0; k < regs.size(); ++k) {
                t.push_back({std::to_string(pt.round + 1), to_string(static_cast<World>(w)),
                             regs[k].name, fmt_full(pt.transplants[wi][k]),
                             fmt_full(pt.score[wi][k]),
                             fmt_full(pt.cumulative_transplants[wi][k]),
                             fmt_full(pt.cumulative_score[wi][k]),
                             fmt_full(pt.pool_after[wi][k]), fmt_full(pt.dropouts[wi][k])});
            }
        }
    }
    return t;
}

nlohmann::json summary_to_json(const ExperimentSummary& summary) {
    const auto& cfg = summary.config;
    json experiment;
    experiment["rounds"] = cfg.rounds;
    experiment["replications"] = summary.replications;
    experiment["seed"] = summary.seed;
    experiment["global_bound"] = cfg.global_bound;
    json regs = json::array();
    for (const Registry& r : cfg.registries) {
        regs.push_back({{"name", r.name},
                        {"cycle_bound", r.cycle_bound},
                        {"arrival_low", r.arrival_low},
                        {"arrival_high", r.arrival_high},
                        {"dropout_probability", r.dropout_probability}});
    }
    experiment["registries"] = regs;

    auto registry_block = [&](World w) {
        json arr = json::array();
        for (std::size_t k = 0; k < cfg.registries.size(); ++k) {
            const RegistryAverages& a = avg(summary, w, k);
            json rec;
            rec["registry"] = cfg.registries[k].name;
            rec["arrivals"] = a.arrivals;
            rec["transplants"] = a.transplants;
            rec["score"] = a.score;
            rec["dropouts"] = a.dropouts;
            rec["waiting_rounds"] = a.waiting_rounds;
            rec["self_transplants"] = a.self_transplants;
            rec["self_transplant_score"] = a.self_transplant_score;
            rec["pool_remaining"] = a.pool_remaining;
            json bg;
            for (int b = 0; b < kBloodGroupCount; ++b)
                bg[to_string(static_cast<BloodGroup>(b))] =
                    a.matched_by_bg[static_cast<std::size_t>(b)];
            rec["matched_by_blood_group"] = bg;
            arr.push_back(rec);
        }
        return arr;
    };

    json doc;
    doc["experiment"] = experiment;
    doc["averages"] = {{"individual", registry_block(World::Individual)},
                       {"merged", registry_block(World::Merged)}};
    doc["relative_gain"] = {
        {"transplants", summary.gain_transplants},
        {"score", summary.gain_score},
        {"per_registry_transplants", summary.gain_transplants_per_registry},
        {"per_registry_score", summary.gain_score_per_registry},
    };
    doc["per_replication"] = {
        {"gain_transplants", summary.per_replication_gain_transplants},
        {"gain_score", summary.per_replication_gain_score},
    };
    doc["fraction_gain_nonnegative"] = summary.fraction_gain_nonnegative;

    json series = json::array();
    for (const RoundTimePoint& pt : summary.series) {
        json rec;
        rec["round"] = pt.round + 1;
        for (int w = 0; w < kWorldCount; ++w) {
            auto wi = static_cast<std::size_t>(w);
            json side;
            side["transplants"] = pt.transplants[wi];
            side["score"] = pt.score[wi];
            side["cumulative_transplants"] = pt.cumulative_transplants[wi];
            side["cumulative_score"] = pt.cumulative_score[wi];
            side["pool_after"] = pt.pool_after[wi];
            side["dropouts"] = pt.dropouts[wi];
            rec[to_string(static_cast<World>(w))] = side;
        }
        series.push_back(rec);
    }
    doc["series"] = series;

    doc["tables"] = {{"comparison", comparison_table(summary)},
                     {"blood_groups", blood_group_table(summary)},
                     {"rounds", rounds_table(summary)}};
    return doc;
}

ReportFiles emit_report(const ExperimentSummary& summary, const std::string& out_dir,
                        bool write_csv_files, bool write_json_file) {
    fs::path dir(out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + out_dir + ": " + ec.message());

    ReportFiles files;
    if (write_csv_files) {
        write_csv(comparison_table(summary), dir / "comparison.csv");
        files.written.push_back((dir / "comparison.csv").string());
        write_csv(blood_group_table(summary), dir / "blood_groups.csv");
        files.written.push_back((dir / "blood_groups.csv").string());
        write_csv(rounds_table(summary), dir / "rounds.csv");
        files.written.push_back((dir / "rounds.csv").string());
    }
    if (write_json_file) {
        fs::path p = dir / "summary.json";
        std::ofstream out(p);
        if (!out) throw IoError("cannot write " + p.string());
        out << summary_to_json(summary).dump(2) << '\n';
        files.written.push_back(p.string());
    }
    return files;
}

} // namespace kex
