// qpcut: command-line front end for the MaxCut quadratic-program library.

#include <qpcut/qpcut.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace qpcut;

struct SolverFlags {
    QpConfig cfg;
    double step = 0.0;
    bool backtracking = false;
    double shrink = 0.5;
    double init = 1.0;
    bool equality = false;

    void attach(CLI::App& app) {
        app.add_option("--alpha", cfg.alpha, "Box scale: 0 <= x_v <= alpha*deg(v)")->capture_default_str();
        app.add_option("--beta", cfg.beta, "Mass floor: sum x >= beta*|E|")->capture_default_str();
        app.add_option("--restarts", cfg.restarts, "Random starts beyond the deterministic one")
            ->capture_default_str();
        app.add_option("--max-iterations", cfg.max_iterations)->capture_default_str();
        app.add_option("--tolerance", cfg.tolerance)->capture_default_str();
        app.add_option("--step", step, "Fixed step length (0 = degree-based default)")->capture_default_str();
        app.add_flag("--backtracking", backtracking, "Use the backtracking step rule");
        app.add_option("--shrink", shrink, "Backtracking shrink factor")->capture_default_str();
        app.add_option("--init", init, "Backtracking initial step")->capture_default_str();
        app.add_flag("--equality", equality, "Use sum x == beta*|E| instead of >=");
    }

    QpConfig resolve(std::uint64_t seed, unsigned threads) const {
        QpConfig out = cfg;
        out.step_rule = backtracking ? StepRule::backtracking(shrink, init) : StepRule::fixed(step);
        out.sum_constraint = equality ? SumConstraint::equal : SumConstraint::at_least;
        out.seed = seed;
        out.threads = threads;
        out.validate();
        return out;
    }
};

struct InputFlags {
    std::string path;
    bool dimacs = false;

    void attach(CLI::App& app) {
        app.add_option("graph", path, "Graph file (edge list, 0-indexed)")->required();
        app.add_flag("--dimacs", dimacs, "Read DIMACS 'p edge' / 'e u v' format instead");
    }

    Graph load() const { return load_graph(path, dimacs ? GraphFormat::dimacs : GraphFormat::edge_list); }
};

std::vector<original_id> original_members(const Graph& g, const Cut& cut, bool side) {
    std::vector<original_id> out;
    for (std::size_t v = 0; v < cut.side.size(); ++v) {
        if (cut.side[v] == side) out.push_back(g.original(static_cast<vertex_id>(v)));
    }
    return out;
}

void print_ids(std::ostream& out, const std::vector<original_id>& ids) {
    for (std::size_t i = 0; i < ids.size(); ++i) out << (i ? " " : "") << ids[i];
}

int cmd_gen(std::size_t n, double p, std::uint64_t seed, const std::string& out_path) {
    const Graph g = gen_erdos_renyi(n, p, seed);
    if (out_path.empty() || out_path == "-") {
        write_edge_list(std::cout, g);
        return 0;
    }
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
    write_edge_list(out, g);
    if (!out) throw std::runtime_error("write to '" + out_path + "' failed");
    return 0;
}

int cmd_solve(const Graph& g, const QpConfig& cfg, std::vector<double> etas, std::uint64_t seed, bool json) {
    if (etas.empty()) etas = default_etas();
    const QpSolution sol = solve_qp(g, cfg);
    const RoundingReport rounding = round_all(g, sol.point.values, etas, seed);
    const Cut& best = rounding.best();
    const double ambiguity = ambiguity_fraction(g, sol.point.values);

    if (json) {
        nlohmann::ordered_json j;
        j["vertices"] = g.vertex_count();
        j["edges"] = g.edge_count();
        j["objective"] = sol.objective;
        j["status"] = to_string(sol.status);
        j["iterations"] = sol.iterations_used;
        j["start_index"] = sol.start_index;
        j["baseline_cut"] = rounding.baseline.cut_size;
        j["threshold_cuts"] = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < etas.size(); ++i) {
            j["threshold_cuts"].push_back({{"eta", etas[i]}, {"cut", rounding.threshold_cuts[i].cut_size}});
        }
        j["best_cut"] = best.cut_size;
        j["ambiguity_fraction"] = ambiguity;
        j["side_c"] = original_members(g, best, true);
        j["side_rest"] = original_members(g, best, false);
        std::cout << j.dump(2) << '\n';
        return 0;
    }
    std::cout << "vertices: " << g.vertex_count() << "\nedges: " << g.edge_count() << '\n';
    std::printf("objective: %.10g\n", sol.objective);
    std::cout << "status: " << to_string(sol.status) << " (start " << sol.start_index << ", "
              << sol.iterations_used << " iterations)\n";
    std::cout << "baseline cut: " << rounding.baseline.cut_size << '\n';
    for (std::size_t i = 0; i < etas.size(); ++i) {
        std::printf("threshold cut (eta=%.6g): %zu\n", etas[i], rounding.threshold_cuts[i].cut_size);
    }
    std::cout << "best cut: " << best.cut_size << '\n';
    std::printf("ambiguity fraction: %.6g\n", ambiguity);
    std::cout << "side C: ";
    print_ids(std::cout, original_members(g, best, true));
    std::cout << "\nside V\\C: ";
    print_ids(std::cout, original_members(g, best, false));
    std::cout << '\n';
    return 0;
}

int cmd_exact(const Graph& g, unsigned threads, bool json) {
    const auto exact = brute_force_maxcut(g, threads);
    if (json) {
        nlohmann::ordered_json j;
        j["maxcut"] = exact.value;
        j["edges"] = g.edge_count();
        j["side_c"] = original_members(g, exact.cut, true);
        j["side_rest"] = original_members(g, exact.cut, false);
        std::cout << j.dump(2) << '\n';
    } else {
        std::cout << exact.value << '\n';
    }
    return 0;
}

int cmd_verify(const Graph& g, const QpConfig& cfg, double eta, std::uint64_t seed, unsigned threads) {
    const TheoremReport report = verify_theorem_chain(g, cfg, eta, seed, threads);
    std::cout << to_json(report).dump(2) << '\n';
    return report.passed() ? 0 : 2;
}

int cmd_bench(const std::string& spec_path, const std::string& out_path, const std::string& format,
              std::optional<std::size_t> trials, unsigned threads) {
    ExperimentSpec spec;
    if (spec_path.empty()) {
        spec = default_experiment_spec();
    } else {
        std::ifstream in(spec_path);
        if (!in) throw std::runtime_error("cannot open '" + spec_path + "'");
        spec = spec_from_json(nlohmann::json::parse(in));
    }
    if (trials) {
        for (auto& c : spec.cells) c.trials = *trials;
    }
    const auto table = emit_table(run_experiment(spec, threads),
                                  format == "json" ? TableFormat::json : TableFormat::csv);
    if (out_path.empty() || out_path == "-") {
        std::cout << table;
        return 0;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
    out << table;
    if (!out) throw std::runtime_error("write to '" + out_path + "' failed");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"MaxCut via a degree-normalized quadratic program"};
    app.require_subcommand(1, 1);

    std::uint64_t seed = 0;
    unsigned threads = 1;

    auto* gen = app.add_subcommand("gen", "Write a G(n, p) random graph as an edge list");
    std::size_t gen_n = 0;
    double gen_p = 0.0;
    std::string gen_out;
    gen->add_option("--n", gen_n, "Vertex count")->required();
    gen->add_option("--p", gen_p, "Edge probability")->required();
    gen->add_option("--seed", seed)->capture_default_str();
    gen->add_option("--out", gen_out, "Output path ('-' for stdout)");

    auto* solve = app.add_subcommand("solve", "Solve the quadratic program and round it to a cut");
    InputFlags solve_in;
    SolverFlags solve_flags;
    std::vector<double> solve_etas;
    bool solve_json = false;
    solve_in.attach(*solve);
    solve_flags.attach(*solve);
    solve->add_option("--eta", solve_etas, "Rounding threshold(s); default eta* and 1/2");
    solve->add_option("--seed", seed)->capture_default_str();
    solve->add_option("--threads", threads)->capture_default_str();
    solve->add_flag("--json", solve_json, "Print JSON");

    auto* exact = app.add_subcommand("exact", "Exact MaxCut by enumeration (n <= 26)");
    InputFlags exact_in;
    bool exact_json = false;
    exact_in.attach(*exact);
    exact->add_option("--threads", threads)->capture_default_str();
    exact->add_flag("--json", exact_json, "Print JSON");

    auto* verify = app.add_subcommand("verify", "Check the guarantee chain on one graph (n <= 26)");
    InputFlags verify_in;
    SolverFlags verify_flags;
    double verify_eta = theorem_constants().eta_star;
    verify_in.attach(*verify);
    verify_flags.attach(*verify);
    verify->add_option("--eta", verify_eta, "Threshold used for the set C")->capture_default_str();
    verify->add_option("--seed", seed)->capture_default_str();
    verify->add_option("--threads", threads)->capture_default_str();

    auto* bench = app.add_subcommand("bench", "Run a G(n, p) benchmark and emit a table");
    std::string bench_spec;
    std::string bench_out;
    std::string bench_format = "csv";
    std::optional<std::size_t> bench_trials;
    bool bench_full = false;
    bench->add_option("spec", bench_spec, "Experiment spec JSON (default: the five reference cells)");
    bench->add_option("--out", bench_out, "Output path ('-' for stdout)");
    bench->add_option("--format", bench_format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    bench->add_option("--trials", bench_trials, "Override trials for every cell");
    bench->add_flag("--full", bench_full, "Run 1000 trials per cell");
    bench->add_option("--threads", threads)->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_gen(gen_n, gen_p, seed, gen_out);
        if (solve->parsed()) {
            return cmd_solve(solve_in.load(), solve_flags.resolve(seed, threads), solve_etas, seed, solve_json);
        }
        if (exact->parsed()) return cmd_exact(exact_in.load(), threads, exact_json);
        if (verify->parsed()) {
            return cmd_verify(verify_in.load(), verify_flags.resolve(seed, threads), verify_eta, seed, threads);
        }
        if (bench->parsed()) {
            if (bench_full && !bench_trials) bench_trials = 1000;
            return cmd_bench(bench_spec, bench_out, bench_format, bench_trials, threads);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
