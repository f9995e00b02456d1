#pragma once

#include <qpcut/detail/random.hpp>
#include <qpcut/errors.hpp>
#include <qpcut/graph.hpp>
#include <qpcut/qp.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace qpcut {

/// Optimal threshold (5 - sqrt 13) / 6 and the resulting approximation ratio.
struct TheoremConstants {
    double eta_star;
    double ratio_star;
    double eps_star;
};

/// (1 - 2 eta) / (1 - eta): lower bound on the degree mass of the threshold
/// set, in units of |E|.
inline double degree_mass_fraction(double eta) { return (1.0 - 2.0 * eta) / (1.0 - eta); }

inline TheoremConstants theorem_constants() {
    const double root13 = std::sqrt(13.0);
    const double eta = (5.0 - root13) / 6.0;
    const double a = degree_mass_fraction(eta);
    const double b = 2.0 / (eta * eta);
    // Branches meet where 1/(2 - 2e) = (a - b e)/(1 - e), i.e. the smaller
    // root of 2b e^2 - (2b + 2a - 1) e + (2a - 1) = 0 (the other root is 1).
    const double qa = 2.0 * b;
    const double qb = -(2.0 * b + 2.0 * a - 1.0);
    const double qc = 2.0 * a - 1.0;
    const double disc = std::sqrt(qb * qb - 4.0 * qa * qc);
    // Citardauq form avoids cancellation for the small root.
    const double eps = (2.0 * qc) / (-qb + disc);
    return {eta, (23.0 + 13.0 * root13) / 139.0, eps};
}

/// max{ 1/(2 - 2 eps), (a(eta) - 2 eps / eta^2) / (1 - eps) }.
inline double guarantee_ratio(double eps, double eta) {
    if (!(eps >= 0.0 && eps <= 0.5)) {
        throw std::invalid_argument("eps must lie in [0, 1/2], got " + std::to_string(eps));
    }
    if (!(eta > 0.0 && eta < 0.5)) {
        throw std::invalid_argument("eta must lie in (0, 1/2), got " + std::to_string(eta));
    }
    const double trivial = 1.0 / (2.0 - 2.0 * eps);
    const double threshold = (degree_mass_fraction(eta) - 2.0 * eps / (eta * eta)) / (1.0 - eps);
    return std::max(trivial, threshold);
}

struct RoundingConfig {
    double eta = theorem_constants().eta_star;

    void validate() const {
        if (!(eta > 0.0 && eta < 0.5)) {
            throw std::invalid_argument("rounding threshold eta must lie in (0, 1/2)");
        }
    }
};

/// C = { v : x_v >= eta * deg(v) }. Vertices exactly on the threshold join C.
inline Cut threshold_cut(const Graph& g, std::span<const double> x, double eta) {
    detail::check_dimension(g, x.size());
    std::vector<bool> side(x.size());
    for (std::size_t v = 0; v < x.size(); ++v) {
        side[v] = x[v] >= eta * static_cast<double>(g.degree(static_cast<vertex_id>(v)));
    }
    return cut_from_side(g, std::move(side));
}

namespace detail {

inline Cut greedy_half_cut(const Graph& g, std::span<const vertex_id> order) {
    const std::size_t n = g.vertex_count();
    std::vector<bool> side(n, false);
    std::vector<bool> placed(n, false);
    for (const vertex_id v : order) {
        std::size_t on_true = 0;
        std::size_t on_false = 0;
        for (const vertex_id u : g.neighbors(v)) {
            if (!placed[u]) continue;
            (side[u] ? on_true : on_false)++;
        }
        side[v] = on_true < on_false;
        placed[v] = true;
    }
    return cut_from_side(g, std::move(side));
}

} // namespace detail

/// Greedy derandomization of the random half cut: vertices are placed one by
/// one on the side holding fewer already-placed neighbors (ties to false), so
/// at least ceil(k/2) of the k edges back to placed vertices are cut and the
/// total is at least ceil(|E|/2).
inline Cut half_cut_baseline(const Graph& g) {
    std::vector<vertex_id> order(g.vertex_count());
    std::iota(order.begin(), order.end(), vertex_id{0});
    return detail::greedy_half_cut(g, order);
}

/// Same greedy with the visit order shuffled by `seed`.
inline Cut half_cut_baseline(const Graph& g, std::uint64_t seed) {
    std::vector<vertex_id> order(g.vertex_count());
    std::iota(order.begin(), order.end(), vertex_id{0});
    detail::engine rng(seed);
    for (std::size_t i = order.size(); i > 1; --i) {
        std::swap(order[i - 1], order[detail::uniform_below(rng, i)]);
    }
    return detail::greedy_half_cut(g, order);
}

/// Fraction of vertices whose fractional charge x_v / deg(v) lies in [0.1, 0.9].
inline double ambiguity_fraction(const Graph& g, std::span<const double> x) {
    detail::check_dimension(g, x.size());
    std::size_t count = 0;
    for (std::size_t v = 0; v < x.size(); ++v) {
        const double p = x[v] / static_cast<double>(g.degree(static_cast<vertex_id>(v)));
        if (p >= 0.1 && p <= 0.9) ++count;
    }
    return x.empty() ? 0.0 : static_cast<double>(count) / static_cast<double>(x.size());
}

inline std::vector<double> default_etas() { return {theorem_constants().eta_star, 0.5}; }

/// Every candidate cut considered by best_cut, in producer order: the
/// baseline first, then one threshold cut per eta.
struct RoundingReport {
    Cut baseline;
    std::vector<double> etas;
    std::vector<Cut> threshold_cuts;
    std::size_t best_index = 0; // 0 = baseline, i = threshold_cuts[i - 1]

    const Cut& best() const { return best_index == 0 ? baseline : threshold_cuts[best_index - 1]; }
};

inline RoundingReport round_all(const Graph& g, std::span<const double> x, std::span<const double> etas,
                                std::uint64_t seed) {
    if (etas.empty()) throw std::invalid_argument("at least one rounding threshold is required");
    for (const double eta : etas) {
        if (!(eta > 0.0 && eta <= 0.5)) {
            throw std::invalid_argument("rounding thresholds must lie in (0, 1/2], got " + std::to_string(eta));
        }
    }
    detail::check_dimension(g, x.size());
    RoundingReport report;
    report.baseline = half_cut_baseline(g, seed);
    report.etas.assign(etas.begin(), etas.end());
    std::size_t best_size = report.baseline.cut_size;
    for (const double eta : etas) {
        report.threshold_cuts.push_back(threshold_cut(g, x, eta));
        if (report.threshold_cuts.back().cut_size > best_size) {
            best_size = report.threshold_cuts.back().cut_size;
            report.best_index = report.threshold_cuts.size();
        }
    }
    return report;
}

/// Largest of the baseline cut and the threshold cuts of sol.point; the
/// earliest producer wins ties.
inline Cut best_cut(const Graph& g, const QpSolution& sol, std::span<const double> etas,
                    std::uint64_t seed) {
    auto report = round_all(g, sol.point.values, etas, seed);
    return report.best_index == 0 ? std::move(report.baseline)
                                  : std::move(report.threshold_cuts[report.best_index - 1]);
}

} // namespace qpcut
