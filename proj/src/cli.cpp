#include "kex/cli.hpp"

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kex/config.hpp"
#include "kex/errors.hpp"
#include "kex/pool_io.hpp"
#include "kex/report.hpp"

namespace kex {

namespace {

void print_table(const Table& table, std::ostream& os) {
    std::vector<std::size_t> width;
    for (const auto& row : table) {
        if (width.size() < row.size()) width.resize(row.size(), 0);
        for (std::size_t i = 0; i < row.size(); ++i)
            width[i] = std::max(width[i], row[i].size());
    }
    for (const auto& row : table) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            os << row[i];
            if (i + 1 < row.size())
                os << std::string(width[i] - row[i].size() + 2, ' ');
        }
        os << '\n';
    }
}

void print_solution(const Solution& sol, const CompatibilityGraph& graph,
                    const std::vector<Registry>& registries, std::ostream& os) {
    os << "solution: " << sol.cycles().size() << " cycle(s), " << sol.total_transplants()
       << " transplants, total score " << sol.total_score() << "\n";
    int idx = 0;
    for (const ExchangeCycle& c : sol.cycles()) {
        os << "  cycle " << ++idx << " (length " << c.length() << ", weight " << c.weight()
           << "): ";
        for (int v : c.vertices()) os << graph.pair(v).id << " -> ";
        os << graph.pair(c.vertices().front()).id << "\n";
    }
    os << "matched per registry:";
    for (std::size_t k = 0; k < sol.matched_per_registry().size(); ++k)
        os << " " << registries[k].name << "=" << sol.matched_per_registry()[k];
    os << "\n";
}

void print_check(const FormulationCheckReport& rep, std::ostream& os) {
    auto word = [](bool ok) { return ok ? "ok" : "VIOLATED"; };
    os << "compact check: flow=" << word(rep.flow_conservation_ok)
       << " vertex=" << word(rep.vertex_capacity_ok)
       << " registry_bound=" << word(rep.registry_bound_ok)
       << " global_bound=" << word(rep.global_bound_ok) << " ir=" << word(rep.ir_ok)
       << " binary=" << word(rep.binary_ok) << "\n";
    for (const CompactViolation& v : rep.violations)
        os << "  violation [" << v.constraint << "] " << v.detail << "\n";
}

struct PoolSolveInputs {
    PoolFile pool;
    CompatibilityGraph graph;
    std::vector<int> bounds;
    int global_bound = 0;
    std::optional<std::vector<int>> floors;
};

PoolSolveInputs prepare_pool(const std::string& path) {
    PoolSolveInputs in{load_pool_file(path), {}, {}, 0, std::nullopt};
    in.graph = build_pool_graph(in.pool);
    in.bounds = in.pool.registry_bounds();
    in.global_bound = in.pool.effective_global_bound();
    if (in.pool.ir_auto) {
        TissueSource tissue = pool_tissue_source(in.pool);
        std::vector<CompatibilityGraph> per_registry;
        for (std::size_t k = 0; k < in.pool.registries.size(); ++k) {
            std::vector<Pair> sub;
            for (const Pair& p : in.pool.pairs)
                if (p.registry == static_cast<int>(k)) sub.push_back(p);
            per_registry.push_back(build_graph(sub, tissue));
        }
        std::vector<Solution> independent = independent_solutions(per_registry, in.bounds);
        std::vector<int> floors;
        for (const Solution& s : independent) floors.push_back(s.total_transplants());
        in.floors = floors;
    } else if (in.pool.ir_floor) {
        in.floors = in.pool.ir_floor;
    }
    return in;
}

int cmd_run(const std::string& config_path, const std::optional<std::uint64_t>& seed,
            const std::optional<int>& replications, const std::optional<int>& workers,
            const std::optional<std::string>& format) {
    ExperimentConfig cfg = parse_config(config_path);
    if (seed) cfg.params.seed = *seed;
    if (replications) {
        if (*replications < 1) throw ConfigError("--replications must be >= 1");
        cfg.params.replications = *replications;
    }
    if (workers) {
        if (*workers < 0) throw ConfigError("--workers must be >= 0");
        cfg.params.workers = *workers;
    }
    if (format) {
        if (*format == "csv") { cfg.write_csv = true; cfg.write_json = false; }
        else if (*format == "json") { cfg.write_csv = false; cfg.write_json = true; }
        else if (*format == "both") { cfg.write_csv = true; cfg.write_json = true; }
        else throw ConfigError("--format must be csv, json or both");
    }

    ExperimentSummary summary = run_experiment(cfg.params);
    ReportFiles files = emit_report(summary, cfg.output_dir, cfg.write_csv, cfg.write_json);

    print_table(comparison_table(summary), std::cout);
    std::cout << "relative gain: " << summary.gain_transplants << " transplants, "
              << summary.gain_score << " score ("
              << summary.fraction_gain_nonnegative * 100.0
              << "% of replications non-negative)\n";
    for (const std::string& f : files.written) std::cout << "wrote " << f << "\n";
    return 0;
}

int cmd_validate(const std::string& config_path) {
    ExperimentConfig cfg = parse_config(config_path);
    std::cout << "config OK: " << cfg.params.sim.registries.size() << " registries, "
              << cfg.params.sim.rounds << " rounds, " << cfg.params.replications
              << " replications, global bound " << cfg.params.sim.global_bound << ", seed "
              << cfg.params.seed << "\n";
    return 0;
}

int cmd_solve(const std::string& pool_path) {
    PoolSolveInputs in = prepare_pool(pool_path);
    std::cout << "pool: " << in.pool.pairs.size() << " pairs, " << in.pool.registries.size()
              << " registries, " << in.graph.arcs().size() << " arcs\n";
    std::cout << "bounds: B = [";
    for (std::size_t k = 0; k < in.bounds.size(); ++k)
        std::cout << (k ? "," : "") << in.bounds[k];
    std::cout << "], b = " << in.global_bound << "\n";
    if (in.floors) {
        std::cout << "ir floors: [";
        for (std::size_t k = 0; k < in.floors->size(); ++k)
            std::cout << (k ? "," : "") << (*in.floors)[k];
        std::cout << "]" << (in.pool.ir_auto ? " (auto)" : "") << "\n";
    }
    SolveSpec spec{in.graph, in.bounds, in.global_bound, in.floors};
    Solution sol = solve(spec);
    print_solution(sol, in.graph, in.pool.registries, std::cout);
    FormulationCheckReport rep = verify_compact(sol, spec);
    print_check(rep, std::cout);
    return rep.all_ok() ? 0 : 1;
}

int cmd_oracle(const std::string& pool_path) {
    PoolSolveInputs in = prepare_pool(pool_path);
    SolveSpec spec{in.graph, in.bounds, in.global_bound, in.floors};
    Solution sol = brute_force(spec);
    print_solution(sol, in.graph, in.pool.registries, std::cout);
    return 0;
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"multi-registry kidney exchange clearing and simulation"};
    app.require_subcommand(1);

    std::string config_path, pool_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> replications, workers;
    std::optional<std::string> format;

    CLI::App* run = app.add_subcommand("run", "run a full experiment from a config file");
    run->add_option("config", config_path, "experiment config (JSON)")->required();
    run->add_option("--seed", seed, "override the config seed");
    run->add_option("--replications", replications, "override the replication count");
    run->add_option("--workers", workers, "replication worker threads (0 = all)");
    run->add_option("--format", format, "report formats: csv, json or both");

    CLI::App* validate = app.add_subcommand("validate", "parse and validate a config file");
    validate->add_option("config", config_path, "experiment config (JSON)")->required();

    CLI::App* solve_cmd = app.add_subcommand("solve", "clear one serialized pool");
    solve_cmd->add_option("pool", pool_path, "pool file")->required();

    CLI::App* oracle = app.add_subcommand("oracle", "brute-force clearing for small pools");
    oracle->add_option("pool", pool_path, "pool file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (run->parsed()) return cmd_run(config_path, seed, replications, workers, format);
        if (validate->parsed()) return cmd_validate(config_path);
        if (solve_cmd->parsed()) return cmd_solve(pool_path);
        if (oracle->parsed()) return cmd_oracle(pool_path);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}

} // namespace kex
