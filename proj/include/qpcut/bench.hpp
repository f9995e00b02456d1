#pragma once

// Erdos-Renyi benchmark protocol: generate, solve, round, aggregate.

#include <qpcut/detail/parallel.hpp>
#include <qpcut/detail/random.hpp>
#include <qpcut/graph.hpp>
#include <qpcut/oracle.hpp>
#include <qpcut/qp.hpp>
#include <qpcut/rounding.hpp>

#include <json.hpp>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace qpcut {

struct CellSpec {
    std::size_t n = 0;
    double p = 0.0;
    std::size_t trials = 1;
};

struct ExperimentSpec {
    std::vector<CellSpec> cells;
    QpConfig qp_config;
    std::vector<double> etas = default_etas();
    std::uint64_t base_seed = 0;
    bool compare_exact = false;

    void validate() const {
        for (const auto& c : cells) {
            if (c.trials == 0) throw std::invalid_argument("every cell needs trials >= 1");
            if (c.n < 2) throw std::invalid_argument("every cell needs n >= 2");
            if (!(c.p >= 0.0 && c.p <= 1.0)) throw std::invalid_argument("every cell needs 0 <= p <= 1");
        }
        if (etas.empty()) throw std::invalid_argument("at least one rounding threshold is required");
        qp_config.validate();
    }
};

/// The five G(n, p) cells of the reference table at a desk-scale trial count.
inline ExperimentSpec default_experiment_spec(std::size_t trials = 100) {
    ExperimentSpec spec;
    spec.cells = {{50, 0.3, trials}, {50, 0.5, trials}, {100, 0.1, trials}, {100, 0.5, trials}, {200, 0.1, trials}};
    return spec;
}

struct TrialRecord {
    bool failed = false;
    std::size_t edges = 0;
    std::size_t best_cut = 0;
    std::size_t baseline_cut = 0;
    double objective = 0.0;
    double ambiguity = 0.0;
    std::optional<double> ratio_vs_exact;
};

struct CellResult {
    std::size_t n = 0;
    double p = 0.0;
    std::size_t trials = 0;
    double mean_cut = 0.0;
    double std_cut = 0.0;
    double mean_edges = 0.0;
    double mean_baseline_cut = 0.0;
    std::optional<double> mean_ratio_vs_exact;
    double mean_objective = 0.0;
    double ambiguity_fraction = 0.0;
    std::size_t failed_trials = 0;

    /// Per-trial detail; not part of the emitted table.
    std::vector<TrialRecord> records;
};

struct ExperimentResult {
    std::vector<CellResult> per_cell;
};

/// Seed of trial t in cell c: two rounds of SplitMix64 over the golden-ratio
/// increment 0x9E3779B97F4A7C15.
constexpr std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t cell, std::uint64_t trial) {
    return detail::derive_seed(detail::derive_seed(base_seed, cell), trial);
}

inline TrialRecord run_trial(const ExperimentSpec& spec, const CellSpec& cell, std::uint64_t seed) {
    TrialRecord rec;
    const Graph g = gen_erdos_renyi(cell.n, cell.p, seed);
    QpConfig cfg = spec.qp_config;
    cfg.seed = detail::derive_seed(seed, 1);
    cfg.threads = 1;
    const QpSolution sol = solve_qp(g, cfg);
    const RoundingReport rounding = round_all(g, sol.point.values, spec.etas, detail::derive_seed(seed, 2));
    rec.edges = g.edge_count();
    rec.best_cut = rounding.best().cut_size;
    rec.baseline_cut = rounding.baseline.cut_size;
    rec.objective = sol.objective;
    rec.ambiguity = ambiguity_fraction(g, sol.point.values);
    if (spec.compare_exact && g.vertex_count() <= brute_force_cap) {
        const auto exact = brute_force_maxcut(g);
        rec.ratio_vs_exact = static_cast<double>(rec.best_cut) / static_cast<double>(exact.value);
    }
    return rec;
}

/// Runs every trial of every cell on `threads` workers. Per-trial results are
/// stored by index and reduced in index order, so the output is bit-identical
/// for any thread count. A trial that throws is counted in failed_trials and
/// left out of the means.
inline ExperimentResult run_experiment(const ExperimentSpec& spec, unsigned threads = 1) {
    spec.validate();
    struct Job {
        std::size_t cell;
        std::size_t trial;
    };
    std::vector<Job> jobs;
    ExperimentResult res;
    for (std::size_t c = 0; c < spec.cells.size(); ++c) {
        for (std::size_t t = 0; t < spec.cells[c].trials; ++t) jobs.push_back({c, t});
        CellResult cell;
        cell.n = spec.cells[c].n;
        cell.p = spec.cells[c].p;
        cell.trials = spec.cells[c].trials;
        cell.records.resize(cell.trials);
        res.per_cell.push_back(std::move(cell));
    }

    detail::parallel_for(jobs.size(), threads, [&](std::size_t j) {
        const auto [c, t] = jobs[j];
        TrialRecord& rec = res.per_cell[c].records[t];
        try {
            rec = run_trial(spec, spec.cells[c], trial_seed(spec.base_seed, c, t));
        } catch (const std::exception&) {
            rec = TrialRecord{};
            rec.failed = true;
        }
    });

    for (auto& cell : res.per_cell) {
        double cut = 0, cut_sq = 0, edges = 0, baseline = 0, objective = 0, ambiguity = 0, ratio = 0;
        std::size_t ok = 0, ratios = 0;
        for (const auto& r : cell.records) {
            if (r.failed) {
                ++cell.failed_trials;
                continue;
            }
            ++ok;
            cut += static_cast<double>(r.best_cut);
            edges += static_cast<double>(r.edges);
            baseline += static_cast<double>(r.baseline_cut);
            objective += r.objective;
            ambiguity += r.ambiguity;
            if (r.ratio_vs_exact) {
                ratio += *r.ratio_vs_exact;
                ++ratios;
            }
        }
        const double nan = std::numeric_limits<double>::quiet_NaN();
        const double k = static_cast<double>(ok);
        cell.mean_cut = ok ? cut / k : nan;
        cell.mean_edges = ok ? edges / k : nan;
        cell.mean_baseline_cut = ok ? baseline / k : nan;
        cell.mean_objective = ok ? objective / k : nan;
        cell.ambiguity_fraction = ok ? ambiguity / k : nan;
        if (ratios) cell.mean_ratio_vs_exact = ratio / static_cast<double>(ratios);
        for (const auto& r : cell.records) {
            if (r.failed) continue;
            const double d = static_cast<double>(r.best_cut) - cell.mean_cut;
            cut_sq += d * d;
        }
        cell.std_cut = ok > 1 ? std::sqrt(cut_sq / (k - 1.0)) : (ok ? 0.0 : nan);
    }
    return res;
}

// ---------------------------------------------------------------------------
// Tables

enum class TableFormat { csv, json };

inline constexpr const char* table_header =
    "n,p,trials,mean_cut,std_cut,mean_edges,mean_baseline_cut,mean_ratio_vs_exact,mean_objective,"
    "ambiguity_fraction,failed_trials";

namespace detail {

inline std::string format6(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

inline double round6(double v) { return std::isnan(v) ? v : std::stod(format6(v)); }

inline nlohmann::ordered_json number6(double v) {
    if (std::isnan(v)) return nullptr;
    return round6(v);
}

inline double number_or_nan(const nlohmann::json& j) {
    return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

} // namespace detail

inline std::string emit_table(const ExperimentResult& res, TableFormat format) {
    if (format == TableFormat::csv) {
        std::ostringstream out;
        out << table_header << '\n';
        for (const auto& c : res.per_cell) {
            out << c.n << ',' << detail::format6(c.p) << ',' << c.trials << ',' << detail::format6(c.mean_cut)
                << ',' << detail::format6(c.std_cut) << ',' << detail::format6(c.mean_edges) << ','
                << detail::format6(c.mean_baseline_cut) << ','
                << (c.mean_ratio_vs_exact ? detail::format6(*c.mean_ratio_vs_exact) : std::string()) << ','
                << detail::format6(c.mean_objective) << ',' << detail::format6(c.ambiguity_fraction) << ','
                << c.failed_trials << '\n';
        }
        return out.str();
    }
    nlohmann::ordered_json cells = nlohmann::ordered_json::array();
    for (const auto& c : res.per_cell) {
        nlohmann::ordered_json j;
        j["n"] = c.n;
        j["p"] = detail::number6(c.p);
        j["trials"] = c.trials;
        j["mean_cut"] = detail::number6(c.mean_cut);
        j["std_cut"] = detail::number6(c.std_cut);
        j["mean_edges"] = detail::number6(c.mean_edges);
        j["mean_baseline_cut"] = detail::number6(c.mean_baseline_cut);
        j["mean_ratio_vs_exact"] = c.mean_ratio_vs_exact ? detail::number6(*c.mean_ratio_vs_exact) : nullptr;
        j["mean_objective"] = detail::number6(c.mean_objective);
        j["ambiguity_fraction"] = detail::number6(c.ambiguity_fraction);
        j["failed_trials"] = c.failed_trials;
        cells.push_back(std::move(j));
    }
    nlohmann::ordered_json doc;
    doc["per_cell"] = std::move(cells);
    return doc.dump(2) + "\n";
}

inline ExperimentResult parse_table_json(const std::string& text) {
    const auto doc = nlohmann::json::parse(text);
    ExperimentResult res;
    for (const auto& j : doc.at("per_cell")) {
        CellResult c;
        c.n = j.at("n").get<std::size_t>();
        c.p = detail::number_or_nan(j.at("p"));
        c.trials = j.at("trials").get<std::size_t>();
        c.mean_cut = detail::number_or_nan(j.at("mean_cut"));
        c.std_cut = detail::number_or_nan(j.at("std_cut"));
        c.mean_edges = detail::number_or_nan(j.at("mean_edges"));
        c.mean_baseline_cut = detail::number_or_nan(j.at("mean_baseline_cut"));
        if (!j.at("mean_ratio_vs_exact").is_null()) c.mean_ratio_vs_exact = j.at("mean_ratio_vs_exact").get<double>();
        c.mean_objective = detail::number_or_nan(j.at("mean_objective"));
        c.ambiguity_fraction = detail::number_or_nan(j.at("ambiguity_fraction"));
        c.failed_trials = j.at("failed_trials").get<std::size_t>();
        res.per_cell.push_back(std::move(c));
    }
    return res;
}

inline ExperimentResult parse_table_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || detail::trim(line) != table_header) {
        throw parse_error("missing or unexpected table header", 1);
    }
    ExperimentResult res;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        std::vector<std::string> fields;
        std::stringstream row(std::string(detail::trim(line)));
        std::string field;
        while (std::getline(row, field, ',')) fields.push_back(field);
        if (fields.size() != 11) throw parse_error("expected 11 fields", line_no);
        auto real = [](const std::string& s) {
            return s == "nan" ? std::numeric_limits<double>::quiet_NaN() : std::stod(s);
        };
        CellResult c;
        c.n = std::stoull(fields[0]);
        c.p = real(fields[1]);
        c.trials = std::stoull(fields[2]);
        c.mean_cut = real(fields[3]);
        c.std_cut = real(fields[4]);
        c.mean_edges = real(fields[5]);
        c.mean_baseline_cut = real(fields[6]);
        if (!fields[7].empty()) c.mean_ratio_vs_exact = real(fields[7]);
        c.mean_objective = real(fields[8]);
        c.ambiguity_fraction = real(fields[9]);
        c.failed_trials = std::stoull(fields[10]);
        res.per_cell.push_back(std::move(c));
    }
    return res;
}

inline ExperimentResult parse_table_csv(const std::string& text) {
    std::istringstream in(text);
    return parse_table_csv(in);
}

// ---------------------------------------------------------------------------
// Spec files

namespace detail {

inline void reject_unknown(const nlohmann::json& j, std::initializer_list<const char*> known,
                           const std::string& where) {
    const std::set<std::string> names(known.begin(), known.end());
    for (const auto& [key, _] : j.items()) {
        if (!names.count(key)) throw std::invalid_argument("unknown field '" + key + "' in " + where);
    }
}

} // namespace detail

inline QpConfig qp_config_from_json(const nlohmann::json& j) {
    detail::reject_unknown(j,
                           {"alpha", "beta", "max_iterations", "step_rule", "tolerance", "restarts", "seed",
                            "sum_constraint"},
                           "qp_config");
    QpConfig cfg;
    cfg.alpha = j.value("alpha", cfg.alpha);
    cfg.beta = j.value("beta", cfg.beta);
    cfg.max_iterations = j.value("max_iterations", cfg.max_iterations);
    cfg.tolerance = j.value("tolerance", cfg.tolerance);
    cfg.restarts = j.value("restarts", cfg.restarts);
    cfg.seed = j.value("seed", cfg.seed);
    if (j.contains("sum_constraint")) {
        const auto s = j.at("sum_constraint").get<std::string>();
        if (s == "at_least") {
            cfg.sum_constraint = SumConstraint::at_least;
        } else if (s == "equal") {
            cfg.sum_constraint = SumConstraint::equal;
        } else {
            throw std::invalid_argument("sum_constraint must be 'at_least' or 'equal'");
        }
    }
    if (j.contains("step_rule")) {
        const auto& s = j.at("step_rule");
        detail::reject_unknown(s, {"kind", "step", "shrink", "init"}, "step_rule");
        const auto kind = s.value("kind", std::string("fixed"));
        if (kind == "fixed") {
            cfg.step_rule = StepRule::fixed(s.value("step", 0.0));
        } else if (kind == "backtracking") {
            cfg.step_rule = StepRule::backtracking(s.value("shrink", 0.5), s.value("init", 1.0));
        } else {
            throw std::invalid_argument("step_rule.kind must be 'fixed' or 'backtracking'");
        }
    }
    return cfg;
}

inline nlohmann::ordered_json to_json(const QpConfig& cfg) {
    nlohmann::ordered_json j;
    j["alpha"] = cfg.alpha;
    j["beta"] = cfg.beta;
    j["max_iterations"] = cfg.max_iterations;
    if (cfg.step_rule.kind == StepRule::Kind::fixed) {
        j["step_rule"] = {{"kind", "fixed"}, {"step", cfg.step_rule.step}};
    } else {
        j["step_rule"] = {{"kind", "backtracking"}, {"shrink", cfg.step_rule.shrink}, {"init", cfg.step_rule.init}};
    }
    j["tolerance"] = cfg.tolerance;
    j["restarts"] = cfg.restarts;
    j["seed"] = cfg.seed;
    j["sum_constraint"] = cfg.sum_constraint == SumConstraint::equal ? "equal" : "at_least";
    return j;
}

inline ExperimentSpec spec_from_json(const nlohmann::json& j) {
    detail::reject_unknown(j, {"cells", "qp_config", "etas", "base_seed", "compare_exact"}, "experiment spec");
    ExperimentSpec spec;
    for (const auto& c : j.at("cells")) {
        detail::reject_unknown(c, {"n", "p", "trials"}, "cell");
        spec.cells.push_back({c.at("n").get<std::size_t>(), c.at("p").get<double>(),
                              c.at("trials").get<std::size_t>()});
    }
    if (j.contains("qp_config")) spec.qp_config = qp_config_from_json(j.at("qp_config"));
    if (j.contains("etas")) spec.etas = j.at("etas").get<std::vector<double>>();
    spec.base_seed = j.value("base_seed", spec.base_seed);
    spec.compare_exact = j.value("compare_exact", spec.compare_exact);
    spec.validate();
    return spec;
}

inline nlohmann::ordered_json to_json(const ExperimentSpec& spec) {
    nlohmann::ordered_json j;
    j["cells"] = nlohmann::ordered_json::array();
    for (const auto& c : spec.cells) j["cells"].push_back({{"n", c.n}, {"p", c.p}, {"trials", c.trials}});
    j["qp_config"] = to_json(spec.qp_config);
    j["etas"] = spec.etas;
    j["base_seed"] = spec.base_seed;
    j["compare_exact"] = spec.compare_exact;
    return j;
}

} // namespace qpcut
