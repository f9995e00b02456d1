#pragma once

// The MaxCut quadratic program
//
//     minimize    <x, D^-1 A D^-1 x>
//     subject to  0 <= x_v <= alpha * deg(v)
//                 sum_v x_v >= beta * |E|      (or == beta * |E|)
//
// and a multistart projected-gradient solver for it. The program is not
// convex; the solver returns the best local minimizer it reaches.

#include <qpcut/detail/parallel.hpp>
#include <qpcut/detail/random.hpp>
#include <qpcut/errors.hpp>
#include <qpcut/graph.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace qpcut {

/// A point of the program: x_v is the charge held by vertex v, at most
/// alpha * deg(v). normalized() gives the fractional charges x_v / deg(v).
struct ChargeVector {
    std::vector<double> values;

    std::size_t size() const noexcept { return values.size(); }
    double operator[](std::size_t v) const { return values[v]; }
    operator std::span<const double>() const noexcept { return values; }

    std::vector<double> normalized(const Graph& g) const {
        std::vector<double> p(values.size());
        for (std::size_t v = 0; v < values.size(); ++v) {
            p[v] = values[v] / static_cast<double>(g.degree(static_cast<vertex_id>(v)));
        }
        return p;
    }

    friend bool operator==(const ChargeVector&, const ChargeVector&) = default;
};

enum class SumConstraint { at_least, equal };

inline constexpr double feasibility_tolerance = 1e-9;

namespace detail {

inline void check_dimension(const Graph& g, std::size_t length) {
    if (length != g.vertex_count()) {
        throw dimension_error("vector has length " + std::to_string(length) + ", graph has " +
                              std::to_string(g.vertex_count()) + " vertices");
    }
}

inline void check_scales(double alpha, double beta) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw infeasible_error("alpha must lie in (0, 1], got " + std::to_string(alpha));
    }
    if (!(beta > 0.0 && beta <= 2.0 * alpha)) {
        throw infeasible_error("beta must lie in (0, 2 * alpha] for a nonempty feasible set, got beta = " +
                               std::to_string(beta) + ", alpha = " + std::to_string(alpha));
    }
}

inline double sum_slack(const Graph& g) {
    return feasibility_tolerance * static_cast<double>(g.edge_count());
}

} // namespace detail

/// <x, D^-1 A D^-1 x> = 2 * sum over edges {u,v} of (x_u/deg u)(x_v/deg v).
inline double quadratic_form(const Graph& g, std::span<const double> x) {
    detail::check_dimension(g, x.size());
    const auto deg = g.degrees();
    double sum = 0.0;
    for (const auto& e : g.edges()) {
        sum += (x[e.u] / static_cast<double>(deg[e.u])) * (x[e.v] / static_cast<double>(deg[e.v]));
    }
    return 2.0 * sum;
}

/// grad_v = (2 / deg v) * sum over neighbors u of x_u / deg u.
inline void gradient_into(const Graph& g, std::span<const double> x, std::span<double> out) {
    detail::check_dimension(g, x.size());
    detail::check_dimension(g, out.size());
    const auto deg = g.degrees();
    std::fill(out.begin(), out.end(), 0.0);
    for (const auto& e : g.edges()) {
        out[e.u] += x[e.v] / static_cast<double>(deg[e.v]);
        out[e.v] += x[e.u] / static_cast<double>(deg[e.u]);
    }
    for (std::size_t v = 0; v < out.size(); ++v) out[v] *= 2.0 / static_cast<double>(deg[v]);
}

inline std::vector<double> gradient(const Graph& g, std::span<const double> x) {
    std::vector<double> out(x.size());
    gradient_into(g, x, out);
    return out;
}

/// Membership in the feasible set, with box bounds relaxed by
/// 1e-9 * max(1, deg) and the sum bound by 1e-9 * |E|.
inline bool is_feasible(const Graph& g, std::span<const double> x, double alpha, double beta,
                        SumConstraint mode = SumConstraint::at_least) {
    detail::check_dimension(g, x.size());
    double total = 0.0;
    for (std::size_t v = 0; v < x.size(); ++v) {
        const double deg = static_cast<double>(g.degree(static_cast<vertex_id>(v)));
        const double slack = feasibility_tolerance * std::max(1.0, deg);
        if (!(x[v] >= -slack && x[v] <= alpha * deg + slack)) return false;
        total += x[v];
    }
    const double target = beta * static_cast<double>(g.edge_count());
    if (mode == SumConstraint::equal) return std::abs(total - target) <= detail::sum_slack(g);
    return total >= target - detail::sum_slack(g);
}

/// Euclidean projection onto the feasible set. The result is clip(p + lambda)
/// where lambda = 0 if the clipped point already meets the sum bound, and
/// otherwise is found exactly by sweeping the sorted breakpoints of the
/// piecewise-linear map lambda -> sum clip(p + lambda).
inline void project_feasible_into(const Graph& g, std::span<const double> p, double alpha,
                                  double beta, SumConstraint mode, std::span<double> out,
                                  std::vector<std::pair<double, int>>& events) {
    detail::check_scales(alpha, beta);
    detail::check_dimension(g, p.size());
    detail::check_dimension(g, out.size());
    const std::size_t n = p.size();
    const auto deg = g.degrees();
    const double target = beta * static_cast<double>(g.edge_count());

    auto upper = [&](std::size_t v) { return alpha * static_cast<double>(deg[v]); };
    auto clip_sum = [&](double lambda) {
        double total = 0.0;
        for (std::size_t v = 0; v < n; ++v) {
            out[v] = std::clamp(p[v] + lambda, 0.0, upper(v));
            total += out[v];
        }
        return total;
    };

    const double clipped = clip_sum(0.0);
    const double gap = clipped - target;
    if (mode == SumConstraint::at_least ? gap >= -detail::sum_slack(g)
                                        : std::abs(gap) <= detail::sum_slack(g)) {
        return;
    }

    // Coordinate v is free on [-p_v, upper_v - p_v]; +1 opens, -1 closes.
    events.clear();
    events.reserve(2 * n);
    for (std::size_t v = 0; v < n; ++v) {
        events.emplace_back(-p[v], +1);
        events.emplace_back(upper(v) - p[v], -1);
    }
    std::sort(events.begin(), events.end());

    double lambda = events.front().first;
    double value = 0.0;
    int slope = 0;
    bool found = false;
    for (const auto& [at, kind] : events) {
        const double next_value = value + slope * (at - lambda);
        if (slope > 0 && next_value >= target) {
            lambda += (target - value) / slope;
            found = true;
            break;
        }
        value = next_value;
        lambda = at;
        slope += kind;
    }
    if (!found) lambda = events.back().first;

    double total = clip_sum(lambda);
    // One correction over the free coordinates absorbs sweep rounding.
    std::size_t free_count = 0;
    for (std::size_t v = 0; v < n; ++v) {
        if (out[v] > 0.0 && out[v] < upper(v)) ++free_count;
    }
    if (free_count > 0 && total != target) {
        lambda += (target - total) / static_cast<double>(free_count);
        total = clip_sum(lambda);
    }
}

inline ChargeVector project_feasible(const Graph& g, std::span<const double> p, double alpha = 1.0,
                                     double beta = 1.0,
                                     SumConstraint mode = SumConstraint::at_least) {
    ChargeVector x{std::vector<double>(p.size())};
    std::vector<std::pair<double, int>> events;
    project_feasible_into(g, p, alpha, beta, mode, x.values, events);
    return x;
}

enum class StartKind { deterministic, random };

/// deterministic: (beta/2) * deg, which sums to beta * |E| by the handshake
/// lemma. random: projection of a uniform sample of the box.
inline ChargeVector initial_point(const Graph& g, double alpha, double beta, StartKind kind,
                                  std::uint64_t seed = 0,
                                  SumConstraint mode = SumConstraint::at_least) {
    detail::check_scales(alpha, beta);
    const std::size_t n = g.vertex_count();
    std::vector<double> x(n);
    if (kind == StartKind::deterministic) {
        for (std::size_t v = 0; v < n; ++v) {
            x[v] = 0.5 * beta * static_cast<double>(g.degree(static_cast<vertex_id>(v)));
        }
        return ChargeVector{std::move(x)};
    }
    detail::engine rng(seed);
    for (std::size_t v = 0; v < n; ++v) {
        x[v] = detail::uniform01(rng) * alpha * static_cast<double>(g.degree(static_cast<vertex_id>(v)));
    }
    return project_feasible(g, x, alpha, beta, mode);
}

struct StepRule {
    enum class Kind { fixed, backtracking };

    Kind kind = Kind::fixed;
    /// Fixed step length; 0 selects 0.9 * min_deg^2 / (2 * max_deg).
    double step = 0.0;
    double shrink = 0.5;
    double init = 1.0;

    static StepRule automatic() { return {}; }
    static StepRule fixed(double step) { return {Kind::fixed, step, 0.5, 1.0}; }
    static StepRule backtracking(double shrink, double init) {
        return {Kind::backtracking, 0.0, shrink, init};
    }
};

struct QpConfig {
    double alpha = 1.0;
    double beta = 1.0;
    std::size_t max_iterations = 5000;
    StepRule step_rule;
    double tolerance = 1e-8;
    std::size_t restarts = 8;
    std::uint64_t seed = 0;
    SumConstraint sum_constraint = SumConstraint::at_least;
    unsigned threads = 1;

    void validate() const {
        detail::check_scales(alpha, beta);
        if (max_iterations == 0) throw std::invalid_argument("max_iterations must be positive");
        if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
        if (step_rule.kind == StepRule::Kind::fixed && !(step_rule.step >= 0.0)) {
            throw std::invalid_argument("fixed step must be positive (0 selects the default)");
        }
        if (step_rule.kind == StepRule::Kind::backtracking) {
            if (!(step_rule.shrink > 0.0 && step_rule.shrink < 1.0)) {
                throw std::invalid_argument("backtracking shrink must lie in (0, 1)");
            }
            if (!(step_rule.init > 0.0)) throw std::invalid_argument("backtracking init must be positive");
        }
    }
};

enum class SolveStatus { converged, iteration_limit };

inline const char* to_string(SolveStatus s) {
    return s == SolveStatus::converged ? "converged" : "iteration_limit";
}

struct DescentResult {
    ChargeVector point;
    double objective = 0.0;
    std::size_t iterations = 0;
    SolveStatus status = SolveStatus::iteration_limit;
};

struct QpSolution {
    ChargeVector point;
    double objective = 0.0;
    std::size_t iterations_used = 0;
    SolveStatus status = SolveStatus::iteration_limit;
    std::size_t start_index = 0;
    std::vector<double> start_objectives;
};

inline double default_step(const Graph& g) {
    const double lo = static_cast<double>(g.min_degree());
    const double hi = static_cast<double>(g.max_degree());
    return 0.9 * lo * lo / (2.0 * hi);
}

/// Projected gradient descent from one start. A trial step s is accepted when
/// f(y) <= f(x) + <grad, y - x> + |y - x|^2 / (2 s) and f(y) <= f(x);
/// otherwise s shrinks. Accepted objectives never increase. `trace`, when
/// given, receives the objective after every accepted step (and the start).
inline DescentResult descend(const Graph& g, const QpConfig& cfg, ChargeVector start,
                             std::vector<double>* trace = nullptr) {
    detail::check_dimension(g, start.size());
    const std::size_t n = g.vertex_count();
    const double base_step = cfg.step_rule.kind == StepRule::Kind::backtracking
                                 ? cfg.step_rule.init
                                 : (cfg.step_rule.step > 0.0 ? cfg.step_rule.step : default_step(g));
    const double shrink = cfg.step_rule.shrink;

    std::vector<std::pair<double, int>> events;
    std::vector<double> x = std::move(start.values);
    std::vector<double> grad(n), trial(n), y(n);
    project_feasible_into(g, std::vector<double>(x), cfg.alpha, cfg.beta, cfg.sum_constraint, x, events);
    double f = quadratic_form(g, x);
    if (trace) trace->push_back(f);

    DescentResult result;
    result.status = SolveStatus::iteration_limit;
    std::size_t it = 0;
    while (it < cfg.max_iterations) {
        ++it;
        gradient_into(g, x, grad);
        double step = base_step;
        double fy = f;
        double displacement = 0.0;
        bool accepted = false;
        while (step >= base_step * 1e-16) {
            for (std::size_t v = 0; v < n; ++v) trial[v] = x[v] - step * grad[v];
            project_feasible_into(g, trial, cfg.alpha, cfg.beta, cfg.sum_constraint, y, events);
            double linear = 0.0;
            double sq = 0.0;
            for (std::size_t v = 0; v < n; ++v) {
                const double d = y[v] - x[v];
                linear += grad[v] * d;
                sq += d * d;
            }
            fy = quadratic_form(g, y);
            if (fy <= f + linear + sq / (2.0 * step) && fy <= f) {
                displacement = std::sqrt(sq);
                accepted = true;
                break;
            }
            step *= shrink;
        }
        if (!accepted) {
            // No descent along the projected arc: stationary to working precision.
            result.status = SolveStatus::converged;
            break;
        }
        const double decrease = f - fy;
        std::swap(x, y);
        const double previous = f;
        f = fy;
        if (trace) trace->push_back(f);
        if (displacement < cfg.tolerance || decrease <= cfg.tolerance * std::max(1.0, previous)) {
            result.status = SolveStatus::converged;
            break;
        }
    }
    result.point = ChargeVector{std::move(x)};
    result.objective = f;
    result.iterations = it;
    return result;
}

/// Multistart solve. Start 0 is the deterministic point, starts 1..restarts
/// are random (seeds derived from cfg.seed), and `extra_starts` follow in
/// order. The lowest terminal objective wins, ties to the lowest start index.
inline QpSolution solve_qp(const Graph& g, const QpConfig& cfg,
                           std::span<const ChargeVector> extra_starts = {}) {
    cfg.validate();
    for (const auto& s : extra_starts) detail::check_dimension(g, s.size());
    const std::size_t total = 1 + cfg.restarts + extra_starts.size();

    std::vector<DescentResult> results(total);
    detail::parallel_for(total, cfg.threads, [&](std::size_t i) {
        ChargeVector start;
        if (i == 0) {
            start = initial_point(g, cfg.alpha, cfg.beta, StartKind::deterministic, 0, cfg.sum_constraint);
        } else if (i <= cfg.restarts) {
            start = initial_point(g, cfg.alpha, cfg.beta, StartKind::random,
                                  detail::derive_seed(cfg.seed, i), cfg.sum_constraint);
        } else {
            start = extra_starts[i - 1 - cfg.restarts];
        }
        results[i] = descend(g, cfg, std::move(start));
    });

    std::size_t best = 0;
    for (std::size_t i = 1; i < total; ++i) {
        if (results[i].objective < results[best].objective) best = i;
    }
    QpSolution sol;
    sol.start_objectives.reserve(total);
    for (const auto& r : results) sol.start_objectives.push_back(r.objective);
    sol.point = std::move(results[best].point);
    sol.objective = results[best].objective;
    sol.iterations_used = results[best].iterations;
    sol.status = results[best].status;
    sol.start_index = best;
    return sol;
}

} // namespace qpcut
