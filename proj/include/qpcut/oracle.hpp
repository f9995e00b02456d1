#pragma once

// Exact small-instance ground truth and an executable check of the chain of
// inequalities behind the approximation guarantee.

#include <qpcut/detail/parallel.hpp>
#include <qpcut/errors.hpp>
#include <qpcut/graph.hpp>
#include <qpcut/qp.hpp>
#include <qpcut/rounding.hpp>

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace qpcut {

inline constexpr std::size_t brute_force_cap = 26;

struct ExactMaxCut {
    Cut cut;
    std::size_t value = 0;
};

namespace detail {

struct ChunkBest {
    std::size_t value = 0;
    std::uint64_t encoding = ~std::uint64_t{0};
};

// Enumerates Gray-code indices [first, last) over vertices 1..n-1 (vertex 0
// stays on side false). Encoding bit i is side(v_i).
inline ChunkBest enumerate_chunk(const Graph& g, std::uint64_t first, std::uint64_t last) {
    const std::size_t n = g.vertex_count();
    auto gray = [](std::uint64_t k) { return k ^ (k >> 1); };

    std::uint64_t code = gray(first) << 1;
    std::vector<bool> side(n);
    for (std::size_t v = 0; v < n; ++v) side[v] = (code >> v) & 1U;
    std::size_t cut = 0;
    for (const auto& e : g.edges()) cut += side[e.u] != side[e.v];

    ChunkBest best{cut, code};
    for (std::uint64_t k = first + 1; k < last; ++k) {
        const auto v = static_cast<vertex_id>(std::countr_zero(k) + 1);
        // Flipping v toggles the crossing status of each incident edge.
        std::size_t same = 0;
        for (const vertex_id u : g.neighbors(v)) same += side[u] == side[v];
        cut = cut + same - (g.degree(v) - same);
        side[v] = !side[v];
        code ^= std::uint64_t{1} << v;
        if (cut > best.value || (cut == best.value && code < best.encoding)) best = {cut, code};
    }
    return best;
}

} // namespace detail

/// Exhaustive MaxCut over the 2^(n-1) bipartitions with vertex 0 on side
/// false. Among maximizers the smallest side encoding (bit v = side(v)) wins.
inline ExactMaxCut brute_force_maxcut(const Graph& g, unsigned threads = 1) {
    const std::size_t n = g.vertex_count();
    if (n > brute_force_cap) {
        throw size_error("exact MaxCut is limited to " + std::to_string(brute_force_cap) +
                         " vertices, graph has " + std::to_string(n));
    }
    const std::uint64_t space = std::uint64_t{1} << (n - 1);
    const std::uint64_t chunk = std::max<std::uint64_t>(std::uint64_t{1} << 16, space / 64);
    const std::size_t chunks = static_cast<std::size_t>((space + chunk - 1) / chunk);

    std::vector<detail::ChunkBest> partial(chunks);
    detail::parallel_for(chunks, threads, [&](std::size_t c) {
        const std::uint64_t first = c * chunk;
        partial[c] = detail::enumerate_chunk(g, first, std::min(space, first + chunk));
    });
    detail::ChunkBest best = partial.front();
    for (const auto& p : partial) {
        if (p.value > best.value || (p.value == best.value && p.encoding < best.encoding)) best = p;
    }
    std::vector<bool> side(n);
    for (std::size_t v = 0; v < n; ++v) side[v] = (best.encoding >> v) & 1U;
    ExactMaxCut out{cut_from_side(g, std::move(side)), best.value};
    return out;
}

/// y_v = deg(v) on the side U of `cut` whose degree sum is at least |E|
/// (the side holding vertex 0 if both sums equal |E|), 0 elsewhere.
inline ChargeVector witness_vector(const Graph& g, const Cut& cut) {
    detail::check_dimension(g, cut.side.size());
    const std::size_t m = g.edge_count();
    std::size_t mass_true = 0;
    for (std::size_t v = 0; v < cut.side.size(); ++v) {
        if (cut.side[v]) mass_true += g.degree(static_cast<vertex_id>(v));
    }
    const std::size_t mass_false = 2 * m - mass_true;
    bool u_side;
    if (mass_true == m && mass_false == m) {
        u_side = cut.side[0];
    } else {
        u_side = mass_true >= m;
    }
    ChargeVector y{std::vector<double>(g.vertex_count(), 0.0)};
    for (std::size_t v = 0; v < cut.side.size(); ++v) {
        if (cut.side[v] == u_side) y.values[v] = static_cast<double>(g.degree(static_cast<vertex_id>(v)));
    }
    return y;
}

struct TheoremReport {
    std::size_t maxcut_exact = 0;
    double eps = 0.0;
    double witness_objective = 0.0;
    double qp_objective = 0.0;
    double eta_used = 0.0;
    double degree_mass_c = 0.0;
    std::size_t internal_c = 0;
    std::size_t cut_c = 0;
    double guarantee = 0.0;
    double achieved_ratio = 0.0;

    std::size_t edge_count = 0;
    std::size_t best_cut = 0;
    std::vector<std::string> violations;

    bool passed() const { return violations.empty(); }
};

inline nlohmann::ordered_json to_json(const TheoremReport& r) {
    nlohmann::ordered_json j;
    j["maxcut_exact"] = r.maxcut_exact;
    j["eps"] = r.eps;
    j["witness_objective"] = r.witness_objective;
    j["qp_objective"] = r.qp_objective;
    j["eta_used"] = r.eta_used;
    j["degree_mass_c"] = r.degree_mass_c;
    j["internal_c"] = r.internal_c;
    j["cut_c"] = r.cut_c;
    j["guarantee"] = r.guarantee;
    j["achieved_ratio"] = r.achieved_ratio;
    j["edges"] = r.edge_count;
    j["best_cut"] = r.best_cut;
    j["passed"] = r.passed();
    j["violations"] = r.violations;
    return j;
}

/**
 * Runs the full chain on one graph: exact MaxCut and eps, the witness built
 * from the optimal cut, the solver with that witness injected as an extra
 * start, the threshold set C at `eta`, and the best-of cut over the baseline
 * and thresholds {eta, 1/2}. Every inequality of the chain is checked and a
 * failure is recorded in `violations` instead of thrown.
 */
inline TheoremReport verify_theorem_chain(const Graph& g, const QpConfig& cfg, double eta,
                                          std::uint64_t rounding_seed = 0, unsigned threads = 1) {
    RoundingConfig{eta}.validate();
    const auto exact = brute_force_maxcut(g, threads);
    const std::size_t m = g.edge_count();
    const double md = static_cast<double>(m);

    TheoremReport r;
    r.edge_count = m;
    r.maxcut_exact = exact.value;
    r.eps = 1.0 - static_cast<double>(exact.value) / md;
    r.eta_used = eta;

    const ChargeVector witness = witness_vector(g, exact.cut);
    r.witness_objective = quadratic_form(g, witness.values);

    const QpSolution sol = solve_qp(g, cfg, std::span(&witness, 1));
    r.qp_objective = sol.objective;

    const Cut c = threshold_cut(g, sol.point.values, eta);
    for (std::size_t v = 0; v < c.side.size(); ++v) {
        if (c.side[v]) r.degree_mass_c += static_cast<double>(g.degree(static_cast<vertex_id>(v)));
    }
    r.internal_c = c.internal_c;
    r.cut_c = c.cut_size;
    r.guarantee = guarantee_ratio(std::clamp(r.eps, 0.0, 0.5), eta);

    std::vector<double> etas{eta};
    if (eta != 0.5) etas.push_back(0.5);
    const Cut best = best_cut(g, sol, etas, rounding_seed);
    r.best_cut = best.cut_size;
    r.achieved_ratio = static_cast<double>(best.cut_size) / static_cast<double>(exact.value);

    auto flag = [&](bool ok, std::string what) {
        if (!ok) r.violations.push_back(std::move(what));
    };
    const double slack = feasibility_tolerance * std::max(1.0, md);
    const double a = degree_mass_fraction(eta);
    flag(r.eps >= 0.0 && r.eps <= 0.5, "eps outside [0, 1/2]");
    flag(r.witness_objective <= 2.0 * r.eps * md + slack, "witness objective exceeds 2 eps |E|");
    flag(r.qp_objective <= r.witness_objective + slack, "solver objective exceeds witness objective");
    flag(is_feasible(g, sol.point.values, cfg.alpha, cfg.beta, cfg.sum_constraint), "solver point infeasible");
    if (cfg.alpha == 1.0 && cfg.beta == 1.0) {
        flag(r.degree_mass_c >= a * md - slack, "degree mass of C below (1 - 2 eta)/(1 - eta) |E|");
        flag(static_cast<double>(r.internal_c) <= r.qp_objective / (2.0 * eta * eta) + slack,
             "#E(C,C) exceeds q / (2 eta^2)");
        flag(static_cast<double>(r.cut_c) >= a * md - 2.0 * static_cast<double>(r.internal_c) - slack,
             "cut of C below (1 - 2 eta)/(1 - eta) |E| - 2 #E(C,C)");
        flag(static_cast<double>(best.cut_size) >= r.guarantee * static_cast<double>(exact.value) - slack,
             "best cut below guarantee_ratio(eps, eta) * MaxCut");
    }
    flag(r.achieved_ratio >= theorem_constants().ratio_star, "best cut below ratio* * MaxCut");
    flag(2 * best.cut_size >= m, "best cut below |E| / 2");
    return r;
}

} // namespace qpcut
