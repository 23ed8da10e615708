#include "kex/config.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "kex/errors.hpp"

namespace kex {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct Collector {
    std::vector<std::string> errors;

    void add(const std::string& path, const std::string& msg) {
        errors.push_back(path + ": " + msg);
    }
    void finish() const {
        if (errors.empty()) return;
        std::string msg = "configuration invalid:";
        for (const std::string& e : errors) msg += "\n  " + e;
        throw ConfigError(msg);
    }
};

void check_keys(const json& obj, const std::string& path,
                const std::set<std::string>& allowed, Collector& errs) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key())) errs.add(path + "." + it.key(), "unknown key");
    }
}

template <typename T>
T read_or(const json& obj, const std::string& path, const std::string& key, T fallback,
          Collector& errs) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        errs.add(path + "." + key, std::string("wrong type (") + e.what() + ")");
        return fallback;
    }
}

std::vector<double> read_probability_vector(const json& value, const std::string& path,
                                            Collector& errs) {
    std::vector<double> v;
    try {
        v = value.get<std::vector<double>>();
    } catch (const json::exception&) {
        errs.add(path, "expected an array of 4 numbers (order O, A, B, AB)");
        return {0.25, 0.25, 0.25, 0.25};
    }
    if (v.size() != 4) {
        errs.add(path, "expected 4 entries (order O, A, B, AB), got " +
                           std::to_string(v.size()));
        return {0.25, 0.25, 0.25, 0.25};
    }
    double sum = 0.0;
    for (double p : v) {
        if (p < 0.0) errs.add(path, "negative probability entry");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        errs.add(path, "entries sum to " + std::to_string(sum) + ", expected 1");
    return v;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    try {
        return json::parse(in, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::exception& e) {
        throw ConfigError(path + ": malformed JSON: " + e.what());
    }
}

// Fixture files hold one donor and one recipient distribution; the _note
// field documents provenance.
void load_fixture_distribution(const std::string& name, const std::string& base_dir,
                               const std::string& path, Registry& reg, Collector& errs) {
    std::vector<fs::path> candidates;
    fs::path given(name);
    if (given.is_absolute()) {
        candidates.push_back(given);
    } else {
        candidates.push_back(fs::path(base_dir) / given);
        candidates.push_back(fs::path(base_dir) / (name + ".json"));
        candidates.push_back(fs::path(base_dir) / "fixtures" / (name + ".json"));
        candidates.push_back(fs::path("fixtures") / (name + ".json"));
        candidates.push_back(given);
    }
    for (const fs::path& c : candidates) {
        std::error_code ec;
        if (!fs::exists(c, ec)) continue;
        json doc;
        try {
            doc = load_json_file(c.string());
        } catch (const ConfigError& e) {
            errs.add(path, e.what());
            return;
        }
        if (!doc.is_object() || !doc.contains("donor") || !doc.contains("recipient")) {
            errs.add(path, "fixture " + c.string() + " must contain donor and recipient arrays");
            return;
        }
        reg.donor_bg_distribution =
            read_probability_vector(doc.at("donor"), path + ".donor", errs);
        reg.recipient_bg_distribution =
            read_probability_vector(doc.at("recipient"), path + ".recipient", errs);
        return;
    }
    std::string tried;
    for (const fs::path& c : candidates) tried += (tried.empty() ? "" : ", ") + c.string();
    errs.add(path, "fixture '" + name + "' not found (tried: " + tried + ")");
}

Registry parse_registry(const json& obj, int index, const std::string& path,
                        const std::string& base_dir, Collector& errs) {
    Registry reg;
    reg.index = index;
    reg.name = "Registry " + std::to_string(index + 1);
    if (!obj.is_object()) {
        errs.add(path, "expected an object");
        return reg;
    }
    check_keys(obj, path,
               {"name", "cycle_bound", "arrival_low", "arrival_high", "dropout_probability",
                "bg_distribution"},
               errs);
    reg.name = read_or<std::string>(obj, path, "name", reg.name, errs);
    reg.cycle_bound = read_or<int>(obj, path, "cycle_bound", reg.cycle_bound, errs);
    reg.arrival_low = read_or<int>(obj, path, "arrival_low", reg.arrival_low, errs);
    reg.arrival_high = read_or<int>(obj, path, "arrival_high", reg.arrival_high, errs);
    reg.dropout_probability =
        read_or<double>(obj, path, "dropout_probability", reg.dropout_probability, errs);

    if (reg.cycle_bound < 2) errs.add(path + ".cycle_bound", "must be >= 2");
    if (reg.arrival_low < 0) errs.add(path + ".arrival_low", "must be >= 0");
    if (reg.arrival_low > reg.arrival_high)
        errs.add(path + ".arrival_low", "exceeds arrival_high");
    if (reg.dropout_probability < 0.0 || reg.dropout_probability > 1.0)
        errs.add(path + ".dropout_probability", "must be in [0,1]");

    if (obj.contains("bg_distribution")) {
        const json& bg = obj.at("bg_distribution");
        std::string bgp = path + ".bg_distribution";
        if (!bg.is_object()) {
            errs.add(bgp, "expected an object with fixture or donor/recipient");
        } else if (bg.contains("fixture")) {
            check_keys(bg, bgp, {"fixture"}, errs);
            std::string name = read_or<std::string>(bg, bgp, "fixture", "", errs);
            if (!name.empty()) load_fixture_distribution(name, base_dir, bgp, reg, errs);
        } else {
            check_keys(bg, bgp, {"donor", "recipient"}, errs);
            if (bg.contains("donor"))
                reg.donor_bg_distribution =
                    read_probability_vector(bg.at("donor"), bgp + ".donor", errs);
            else
                errs.add(bgp + ".donor", "missing");
            if (bg.contains("recipient"))
                reg.recipient_bg_distribution =
                    read_probability_vector(bg.at("recipient"), bgp + ".recipient", errs);
            else
                errs.add(bgp + ".recipient", "missing");
        }
    }
    return reg;
}

GeneratorConfig parse_generator(const json& obj, const std::string& path, Collector& errs) {
    GeneratorConfig gen;
    if (!obj.is_object()) {
        errs.add(path, "expected an object");
        return gen;
    }
    check_keys(obj, path,
               {"crossmatch_positive_probability", "include_compatible_pairs", "age_min",
                "age_max", "antigen_alphabet_a", "antigen_alphabet_b", "antigen_alphabet_dr"},
               errs);
    gen.crossmatch_positive_probability = read_or<double>(
        obj, path, "crossmatch_positive_probability", gen.crossmatch_positive_probability, errs);
    gen.include_compatible_pairs =
        read_or<bool>(obj, path, "include_compatible_pairs", gen.include_compatible_pairs, errs);
    gen.age_min = read_or<int>(obj, path, "age_min", gen.age_min, errs);
    gen.age_max = read_or<int>(obj, path, "age_max", gen.age_max, errs);
    gen.antigen_alphabet_a =
        read_or<int>(obj, path, "antigen_alphabet_a", gen.antigen_alphabet_a, errs);
    gen.antigen_alphabet_b =
        read_or<int>(obj, path, "antigen_alphabet_b", gen.antigen_alphabet_b, errs);
    gen.antigen_alphabet_dr =
        read_or<int>(obj, path, "antigen_alphabet_dr", gen.antigen_alphabet_dr, errs);

    if (gen.crossmatch_positive_probability < 0.0 || gen.crossmatch_positive_probability > 1.0)
        errs.add(path + ".crossmatch_positive_probability", "must be in [0,1]");
    if (gen.age_min < 18) errs.add(path + ".age_min", "must be >= 18");
    if (gen.age_max > 75) errs.add(path + ".age_max", "must be <= 75");
    if (gen.age_min > gen.age_max) errs.add(path + ".age_min", "exceeds age_max");
    if (gen.antigen_alphabet_a < 1) errs.add(path + ".antigen_alphabet_a", "must be >= 1");
    if (gen.antigen_alphabet_b < 1) errs.add(path + ".antigen_alphabet_b", "must be >= 1");
    if (gen.antigen_alphabet_dr < 1) errs.add(path + ".antigen_alphabet_dr", "must be >= 1");
    return gen;
}

} // namespace

ExperimentConfig parse_config_json(const json& doc, const std::string& base_dir) {
    Collector errs;
    ExperimentConfig cfg;
    if (!doc.is_object()) {
        errs.add("$", "top level must be an object");
        errs.finish();
    }
    check_keys(doc, "$",
               {"seed", "rounds", "replications", "global_bound", "workers", "output_dir",
                "report_formats", "verify_solutions", "generator", "registries"},
               errs);

    cfg.params.seed = read_or<std::uint64_t>(doc, "$", "seed", 1, errs);
    cfg.params.sim.rounds = read_or<int>(doc, "$", "rounds", 12, errs);
    cfg.params.replications = read_or<int>(doc, "$", "replications", 20, errs);
    cfg.params.workers = read_or<int>(doc, "$", "workers", 0, errs);
    cfg.params.sim.verify_solutions = read_or<bool>(doc, "$", "verify_solutions", true, errs);
    cfg.output_dir = read_or<std::string>(doc, "$", "output_dir", "out", errs);

    if (cfg.params.sim.rounds < 1) errs.add("$.rounds", "must be >= 1");
    if (cfg.params.replications < 1) errs.add("$.replications", "must be >= 1");
    if (cfg.params.workers < 0) errs.add("$.workers", "must be >= 0");

    if (doc.contains("report_formats")) {
        cfg.write_csv = cfg.write_json = false;
        std::vector<std::string> formats =
            read_or<std::vector<std::string>>(doc, "$", "report_formats", {}, errs);
        for (const std::string& f : formats) {
            if (f == "csv") cfg.write_csv = true;
            else if (f == "json") cfg.write_json = true;
            else errs.add("$.report_formats", "unknown format '" + f + "' (csv, json)");
        }
        if (!cfg.write_csv && !cfg.write_json)
            errs.add("$.report_formats", "at least one format required");
    }

    if (doc.contains("generator"))
        cfg.params.sim.generator = parse_generator(doc.at("generator"), "$.generator", errs);

    if (!doc.contains("registries") || !doc.at("registries").is_array() ||
        doc.at("registries").empty()) {
        errs.add("$.registries", "at least one registry is required");
    } else {
        const json& regs = doc.at("registries");
        for (std::size_t k = 0; k < regs.size(); ++k)
            cfg.params.sim.registries.push_back(
                parse_registry(regs[k], static_cast<int>(k),
                               "$.registries[" + std::to_string(k) + "]", base_dir, errs));
    }

    int max_bound = 2;
    for (const Registry& r : cfg.params.sim.registries)
        max_bound = std::max(max_bound, r.cycle_bound);
    cfg.params.sim.global_bound = read_or<int>(doc, "$", "global_bound", max_bound, errs);
    if (cfg.params.sim.global_bound < max_bound)
        errs.add("$.global_bound",
                 "global bound " + std::to_string(cfg.params.sim.global_bound) +
                     " is below the largest registry cycle bound " + std::to_string(max_bound) +
                     "; merged-round IR floors would not be guaranteed feasible");

    errs.finish();
    // Backstop: the domain-level validators must agree.
    cfg.params.sim.validate();
    return cfg;
}

ExperimentConfig parse_config(const std::string& path) {
    json doc = load_json_file(path);
    std::string base = fs::path(path).parent_path().string();
    if (base.empty()) base = ".";
    return parse_config_json(doc, base);
}

json config_to_json(const ExperimentConfig& config) {
    json doc;
    doc["seed"] = config.params.seed;
    doc["rounds"] = config.params.sim.rounds;
    doc["replications"] = config.params.replications;
    doc["workers"] = config.params.workers;
    doc["global_bound"] = config.params.sim.global_bound;
    doc["output_dir"] = config.output_dir;
    doc["verify_solutions"] = config.params.sim.verify_solutions;
    json formats = json::array();
    if (config.write_csv) formats.push_back("csv");
    if (config.write_json) formats.push_back("json");
    doc["report_formats"] = formats;

    const GeneratorConfig& g = config.params.sim.generator;
    doc["generator"] = {
        {"crossmatch_positive_probability", g.crossmatch_positive_probability},
        {"include_compatible_pairs", g.include_compatible_pairs},
        {"age_min", g.age_min},
        {"age_max", g.age_max},
        {"antigen_alphabet_a", g.antigen_alphabet_a},
        {"antigen_alphabet_b", g.antigen_alphabet_b},
        {"antigen_alphabet_dr", g.antigen_alphabet_dr},
    };

    json regs = json::array();
    for (const Registry& r : config.params.sim.registries) {
        regs.push_back({
            {"name", r.name},
            {"cycle_bound", r.cycle_bound},
            {"arrival_low", r.arrival_low},
            {"arrival_high", r.arrival_high},
            {"dropout_probability", r.dropout_probability},
            {"bg_distribution",
             {{"donor", r.donor_bg_distribution}, {"recipient", r.recipient_bg_distribution}}},
        });
    }
    doc["registries"] = regs;
    return doc;
}

} // namespace kex
