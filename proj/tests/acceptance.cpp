// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <qpcut/qpcut.hpp>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace qpcut;
using clock_type = std::chrono::steady_clock;

constexpr double ratio_floor = 0.50268;

int failures = 0;

void report(int id, const std::string& title, bool ok, const std::string& detail) {
    std::printf("[%s] AC%d %s: %s\n", ok ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

std::size_t ceil_half(std::size_t m) { return (m + 1) / 2; }

// ---------------------------------------------------------------------------
// Graphs on <= 7 vertices up to isomorphism. A graph is a bitmask over the
// pairs (i < j); the canonical form is the smallest mask over all relabelings.

constexpr int max_small_n = 7;

int pair_bit(int i, int j) {
    if (i > j) std::swap(i, j);
    return j * (j - 1) / 2 + i;
}

std::uint32_t canonical(std::uint32_t mask, int n, const std::vector<std::array<int, max_small_n>>& perms) {
    std::vector<std::pair<int, int>> edges;
    for (int j = 1; j < n; ++j) {
        for (int i = 0; i < j; ++i) {
            if (mask >> pair_bit(i, j) & 1U) edges.emplace_back(i, j);
        }
    }
    std::uint32_t best = mask;
    for (const auto& perm : perms) {
        std::uint32_t m = 0;
        for (const auto& [i, j] : edges) m |= 1U << pair_bit(perm[i], perm[j]);
        best = std::min(best, m);
    }
    return best;
}

bool connected(std::uint32_t mask, int n) {
    std::uint32_t seen = 1;
    for (bool grew = true; grew;) {
        grew = false;
        for (int j = 1; j < n; ++j) {
            for (int i = 0; i < j; ++i) {
                if (!(mask >> pair_bit(i, j) & 1U)) continue;
                const bool a = seen >> i & 1U;
                const bool b = seen >> j & 1U;
                if (a != b) {
                    seen |= (1U << i) | (1U << j);
                    grew = true;
                }
            }
        }
    }
    return seen == (1U << n) - 1;
}

std::vector<Graph> connected_graphs_up_to_iso(std::vector<std::size_t>& counts_all,
                                              std::vector<std::size_t>& counts_connected) {
    std::vector<Graph> out;
    std::set<std::uint32_t> previous{0}; // the single-vertex graph
    counts_all = {0, 1};
    counts_connected = {0, 1};
    for (int n = 2; n <= max_small_n; ++n) {
        std::vector<std::array<int, max_small_n>> perms;
        std::array<int, max_small_n> p{};
        std::iota(p.begin(), p.begin() + n, 0);
        do {
            perms.push_back(p);
        } while (std::next_permutation(p.begin(), p.begin() + n));

        std::set<std::uint32_t> current;
        for (const std::uint32_t g : previous) {
            for (std::uint32_t nb = 0; nb < (1U << (n - 1)); ++nb) {
                std::uint32_t mask = g;
                for (int i = 0; i < n - 1; ++i) {
                    if (nb >> i & 1U) mask |= 1U << pair_bit(i, n - 1);
                }
                current.insert(canonical(mask, n, perms));
            }
        }
        counts_all.push_back(current.size());
        std::size_t conn = 0;
        for (const std::uint32_t mask : current) {
            if (!connected(mask, n)) continue;
            ++conn;
            std::vector<std::pair<original_id, original_id>> pairs;
            for (int j = 1; j < n; ++j) {
                for (int i = 0; i < j; ++i) {
                    if (mask >> pair_bit(i, j) & 1U) pairs.emplace_back(i, j);
                }
            }
            out.push_back(Graph::from_edges(pairs));
        }
        counts_connected.push_back(conn);
        previous = std::move(current);
    }
    return out;
}

std::vector<Graph> seeded_random_graphs(std::size_t count, std::uint64_t seed) {
    std::vector<Graph> out;
    detail::engine rng(seed);
    while (out.size() < count) {
        const std::size_t n = 8 + detail::uniform_below(rng, 9);
        const double p = 0.15 + 0.75 * detail::uniform01(rng);
        try {
            out.push_back(gen_erdos_renyi(n, p, rng()));
        } catch (const empty_graph_error&) {
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

struct FloorLedger {
    std::size_t graphs = 0;
    std::size_t violations = 0;

    void check(const Graph& g, const Cut& baseline) {
        ++graphs;
        if (baseline.cut_size < ceil_half(g.edge_count())) ++violations;
    }
};

void criteria_one_and_two(const std::vector<Graph>& corpus, const std::string& corpus_desc, FloorLedger& floor) {
    const auto t0 = clock_type::now();
    const double eta = theorem_constants().eta_star;
    std::size_t theorem_violations = 0;
    std::size_t chain_flags = 0;
    double worst_ratio = 1.0;
    std::size_t identity_violations = 0;
    std::size_t bound_violations = 0;

    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const Graph& g = corpus[i];
        const auto r = verify_theorem_chain(g, QpConfig{}, eta, i);
        if (r.achieved_ratio < ratio_floor) ++theorem_violations;
        if (!r.passed()) ++chain_flags;
        worst_ratio = std::min(worst_ratio, r.achieved_ratio);
        floor.check(g, half_cut_baseline(g, i));
        floor.check(g, half_cut_baseline(g));

        // Step-2 witness identity for the optimal cut: integer-exact form via
        // the degree reciprocals cancelling on U.
        const auto exact = brute_force_maxcut(g);
        const auto y = witness_vector(g, exact.cut);
        std::size_t internal_u = 0;
        for (const auto& e : g.edges()) internal_u += y.values[e.u] > 0.0 && y.values[e.v] > 0.0;
        const double form = quadratic_form(g, y.values);
        if (std::abs(form - 2.0 * static_cast<double>(internal_u)) > 1e-12) ++identity_violations;
        const double eps = 1.0 - static_cast<double>(exact.value) / static_cast<double>(g.edge_count());
        if (form > 2.0 * eps * static_cast<double>(g.edge_count()) + 1e-12) ++bound_violations;
    }
    const double elapsed = seconds_since(t0);
    report(1, "theorem floor (best-of cut >= 0.50268 * MaxCut, witness injected)",
           theorem_violations == 0 && elapsed <= 600.0,
           fmt("%zu graphs (%s), %zu violations, %zu chain flags, worst ratio %.4f, %.1fs (limit 600s)",
               corpus.size(), corpus_desc.c_str(), theorem_violations, chain_flags, worst_ratio, elapsed));
    report(2, "witness identity (form == 2 #E(U,U), form <= 2 eps |E|)",
           identity_violations == 0 && bound_violations == 0,
           fmt("%zu graphs, %zu identity violations, %zu bound violations", corpus.size(), identity_violations,
               bound_violations));
}

void criterion_three(FloorLedger& floor) {
    detail::engine rng(3003);
    const double etas[] = {0.1, theorem_constants().eta_star, 0.4};
    std::size_t mass_violations = 0;
    std::size_t internal_violations = 0;
    std::size_t infeasible = 0;
    for (int k = 0; k < 1000; ++k) {
        const std::size_t n = 2 + detail::uniform_below(rng, 49);
        const double p = 0.05 + 0.9 * detail::uniform01(rng);
        Graph g;
        try {
            g = gen_erdos_renyi(n, p, rng());
        } catch (const empty_graph_error&) {
            --k;
            continue;
        }
        floor.check(g, half_cut_baseline(g));
        // Alternate between uniform random starts and solver outputs.
        ChargeVector x = initial_point(g, 1.0, 1.0, StartKind::random, rng());
        if (k % 2 == 1) {
            QpConfig cfg;
            cfg.restarts = 1;
            cfg.seed = rng();
            x = solve_qp(g, cfg).point;
        }
        if (!is_feasible(g, x.values, 1.0, 1.0)) ++infeasible;
        const double q = quadratic_form(g, x.values);
        const double m = static_cast<double>(g.edge_count());
        const double slack = feasibility_tolerance * m;
        for (const double eta : etas) {
            const Cut c = threshold_cut(g, x.values, eta);
            double mass = 0.0;
            for (const vertex_id v : c.members()) mass += static_cast<double>(g.degree(v));
            if (mass < degree_mass_fraction(eta) * m - slack) ++mass_violations;
            if (static_cast<double>(c.internal_c) > q / (2.0 * eta * eta) + slack) ++internal_violations;
        }
    }
    report(3, "step-3 inequalities (degree mass, #E(C,C) <= q/(2 eta^2))",
           mass_violations == 0 && internal_violations == 0 && infeasible == 0,
           fmt("1000 points x 3 etas, %zu mass violations, %zu internal-edge violations, %zu infeasible points",
               mass_violations, internal_violations, infeasible));
}

void criterion_four() {
    const auto c = theorem_constants();
    auto branch_max = [&](double eps) { return guarantee_ratio(eps, c.eta_star); };
    // Dense scan then golden-section refinement around the scan minimum.
    double best_eps = 0.0;
    for (int i = 0; i <= 200000; ++i) {
        const double e = 0.5 * i / 200000.0;
        if (branch_max(e) < branch_max(best_eps)) best_eps = e;
    }
    double lo = std::max(0.0, best_eps - 5e-6);
    double hi = std::min(0.5, best_eps + 5e-6);
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int it = 0; it < 200; ++it) {
        const double a = hi - phi * (hi - lo);
        const double b = lo + phi * (hi - lo);
        if (branch_max(a) < branch_max(b)) {
            hi = b;
        } else {
            lo = a;
        }
    }
    const double minimum = branch_max(0.5 * (lo + hi));
    const bool eta_ok = std::abs(c.eta_star - 0.2324) < 5e-5;
    const bool ratio_ok = std::abs(c.ratio_star - 0.5026) < 1e-4;
    const bool min_ok = std::abs(minimum - c.ratio_star) <= 1e-6;
    report(4, "constants", eta_ok && ratio_ok && min_ok,
           fmt("eta* = %.8f (0.2324), ratio* = %.8f (0.5026), min_eps guarantee = %.10f at eps = %.6f, "
               "|diff| = %.2e (limit 1e-6)",
               c.eta_star, c.ratio_star, minimum, 0.5 * (lo + hi), std::abs(minimum - c.ratio_star)));
}

void criterion_five() {
    detail::engine rng(5005);
    std::size_t grad_fail = 0;
    double worst_rel = 0.0;
    for (int k = 0; k < 100; ++k) {
        Graph g;
        try {
            g = gen_erdos_renyi(2 + detail::uniform_below(rng, 19), 0.2 + 0.6 * detail::uniform01(rng), rng());
        } catch (const empty_graph_error&) {
            --k;
            continue;
        }
        const auto x = initial_point(g, 1.0, 1.0, StartKind::random, rng());
        const auto grad = gradient(g, x.values);
        bool ok = true;
        for (std::size_t v = 0; v < x.size(); ++v) {
            auto plus = x.values;
            auto minus = x.values;
            plus[v] += 1e-6;
            minus[v] -= 1e-6;
            const double fd = (quadratic_form(g, plus) - quadratic_form(g, minus)) / 2e-6;
            const double rel = std::abs(fd - grad[v]) / std::max(1.0, std::abs(grad[v]));
            worst_rel = std::max(worst_rel, rel);
            if (rel > 1e-5) ok = false;
        }
        if (!ok) ++grad_fail;
    }

    std::size_t proj_fail = 0;
    std::size_t idem_fail = 0;
    for (int k = 0; k < 100; ++k) {
        Graph g;
        try {
            g = gen_erdos_renyi(2 + detail::uniform_below(rng, 9), 0.3 + 0.5 * detail::uniform01(rng), rng());
        } catch (const empty_graph_error&) {
            --k;
            continue;
        }
        std::vector<double> p(g.vertex_count());
        for (std::size_t v = 0; v < p.size(); ++v) {
            p[v] = (3.0 * detail::uniform01(rng) - 1.5) * static_cast<double>(g.degree(static_cast<vertex_id>(v)));
        }
        const auto x = project_feasible(g, p);
        auto dist = [&](std::span<const double> z) {
            double s = 0.0;
            for (std::size_t v = 0; v < z.size(); ++v) s += (z[v] - p[v]) * (z[v] - p[v]);
            return std::sqrt(s);
        };
        const double dx = dist(x.values);
        bool beaten = !is_feasible(g, x.values, 1.0, 1.0);
        for (int c = 0; c < 10000 && !beaten; ++c) {
            // Competitors: uniform box samples that already satisfy the mass floor.
            std::vector<double> z(p.size());
            double total = 0.0;
            for (std::size_t v = 0; v < z.size(); ++v) {
                z[v] = detail::uniform01(rng) * static_cast<double>(g.degree(static_cast<vertex_id>(v)));
                total += z[v];
            }
            if (total < static_cast<double>(g.edge_count())) {
                for (std::size_t v = 0; v < z.size(); ++v) {
                    z[v] = static_cast<double>(g.degree(static_cast<vertex_id>(v))) - z[v];
                }
            }
            if (dist(z) < dx - 1e-12) beaten = true;
        }
        if (beaten) ++proj_fail;
        if (project_feasible(g, x.values).values != x.values) ++idem_fail;
    }
    report(5, "gradient and projection numerics", grad_fail == 0 && proj_fail == 0 && idem_fail == 0,
           fmt("gradient: 100 cases, %zu failures, worst rel err %.2e (limit 1e-5); projection: 100 cases x 1e4 "
               "competitors, %zu beaten, %zu non-idempotent",
               grad_fail, worst_rel, proj_fail, idem_fail));
}

void criterion_six(FloorLedger& floor) {
    const auto t0 = clock_type::now();
    ExperimentSpec spec;
    spec.cells = {{50, 0.3, 100}};
    const auto res = run_experiment(spec, detail::default_threads());
    const auto& c = res.per_cell.front();
    for (const auto& r : c.records) {
        ++floor.graphs;
        if (r.failed || 2 * r.baseline_cut < r.edges) ++floor.violations;
    }
    const double elapsed = seconds_since(t0);
    const bool ok = c.failed_trials == 0 && c.mean_cut >= 228.0 && c.mean_cut <= 244.0 &&
                    c.mean_cut >= c.mean_baseline_cut && elapsed <= 900.0;
    report(6, "G(50, 0.3) regression (mean best-of cut in [228, 244])", ok,
           fmt("100 trials, mean cut %.2f (sd %.2f), mean baseline %.2f, mean edges %.2f, %zu failed, %.1fs "
               "(limit 900s)",
               c.mean_cut, c.std_cut, c.mean_baseline_cut, c.mean_edges, c.failed_trials, elapsed));
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

void criterion_eight() {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "qpcut_acceptance";
    fs::create_directories(dir);
    const fs::path spec = dir / "spec.json";
    std::ofstream(spec) << R"({"cells": [{"n": 50, "p": 0.3, "trials": 20}, {"n": 30, "p": 0.2, "trials": 20}],
 "base_seed": 8, "compare_exact": false})";
    auto bench = [&](const std::string& out, const std::string& extra) {
        const std::string cmd = std::string(QPCUT_CLI_PATH) + " bench " + spec.string() + " --out " +
                                (dir / out).string() + extra;
        return std::system(cmd.c_str());
    };
    const int a = bench("a.csv", "");
    const int b = bench("b.csv", "");
    const int c = bench("c.csv", " --threads 4");
    const auto ta = slurp(dir / "a.csv");
    const bool same = a == 0 && b == 0 && c == 0 && !ta.empty() && ta == slurp(dir / "b.csv") &&
                      ta == slurp(dir / "c.csv");
    fs::remove_all(dir);
    report(8, "bench reproducibility (byte-identical CSV)", same,
           fmt("two identical runs plus a 4-thread run, %zu bytes each, identical = %s", ta.size(),
               same ? "yes" : "no"));
}

} // namespace

int main() {
    std::vector<std::size_t> counts_all;
    std::vector<std::size_t> counts_connected;
    auto corpus = connected_graphs_up_to_iso(counts_all, counts_connected);
    const std::vector<std::size_t> expected_all{0, 1, 2, 4, 11, 34, 156, 1044};
    const std::vector<std::size_t> expected_connected{0, 1, 1, 2, 6, 21, 112, 853};
    if (counts_all != expected_all || counts_connected != expected_connected) {
        std::printf("graph enumeration produced unexpected isomorphism-class counts\n");
        return 2;
    }
    const std::size_t small = corpus.size();
    for (auto& g : seeded_random_graphs(500, 1001)) corpus.push_back(std::move(g));

    FloorLedger floor;
    criteria_one_and_two(corpus, fmt("%zu connected graphs n<=7 up to isomorphism + 500 random 8<=n<=16", small),
                         floor);
    criterion_three(floor);
    criterion_four();
    criterion_five();
    criterion_six(floor);
    report(7, "baseline floor (half_cut_baseline >= ceil(|E|/2))", floor.violations == 0,
           fmt("%zu baseline cuts across suites 1, 3 and 6, %zu violations", floor.graphs, floor.violations));
    criterion_eight();

    std::printf("%s: %d criteria failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
    return failures == 0 ? 0 : 1;
}
