#pragma once

#include <qpcut/detail/random.hpp>
#include <qpcut/errors.hpp>

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qpcut {

using vertex_id = std::uint32_t;
using original_id = std::uint64_t;

struct Edge {
    vertex_id u;
    vertex_id v;

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/**
 * Simple undirected graph without isolated vertices.
 *
 * Vertices are compacted to 0..n-1 in ascending order of the ids they had in
 * the input; `original_id(v)` maps back. Every edge is stored once with
 * u < v, edges are sorted, and neighbor lists are sorted. Immutable after
 * construction.
 */
class Graph {
public:
    Graph() = default;

    /// Builds a graph from pairs of input ids. Duplicate and reversed pairs
    /// collapse; self-loops throw std::invalid_argument; an empty edge set
    /// throws empty_graph_error. Ids that appear in no edge do not exist.
    static Graph from_edges(std::span<const std::pair<original_id, original_id>> pairs) {
        for (const auto& [a, b] : pairs) {
            if (a == b) {
                throw std::invalid_argument("self-loop on vertex " + std::to_string(a));
            }
        }
        if (pairs.empty()) throw empty_graph_error();

        Graph g;
        g.original_ids_.reserve(pairs.size() * 2);
        for (const auto& [a, b] : pairs) {
            g.original_ids_.push_back(a);
            g.original_ids_.push_back(b);
        }
        std::sort(g.original_ids_.begin(), g.original_ids_.end());
        g.original_ids_.erase(std::unique(g.original_ids_.begin(), g.original_ids_.end()),
                              g.original_ids_.end());

        auto compact = [&](original_id id) {
            const auto it = std::lower_bound(g.original_ids_.begin(), g.original_ids_.end(), id);
            return static_cast<vertex_id>(it - g.original_ids_.begin());
        };
        g.edges_.reserve(pairs.size());
        for (const auto& [a, b] : pairs) {
            vertex_id u = compact(a);
            vertex_id v = compact(b);
            if (u > v) std::swap(u, v);
            g.edges_.push_back({u, v});
        }
        std::sort(g.edges_.begin(), g.edges_.end());
        g.edges_.erase(std::unique(g.edges_.begin(), g.edges_.end()), g.edges_.end());
        g.build_adjacency();
        return g;
    }

    std::size_t vertex_count() const noexcept { return original_ids_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }

    std::span<const Edge> edges() const noexcept { return edges_; }
    std::span<const vertex_id> neighbors(vertex_id v) const {
        return std::span(targets_).subspan(offsets_[v], offsets_[v + 1] - offsets_[v]);
    }
    std::size_t degree(vertex_id v) const { return degrees_[v]; }
    std::span<const std::size_t> degrees() const noexcept { return degrees_; }
    std::size_t min_degree() const { return *std::min_element(degrees_.begin(), degrees_.end()); }
    std::size_t max_degree() const { return *std::max_element(degrees_.begin(), degrees_.end()); }

    original_id original(vertex_id v) const { return original_ids_[v]; }
    std::span<const original_id> original_ids() const noexcept { return original_ids_; }

    friend bool operator==(const Graph&, const Graph&) = default;

private:
    void build_adjacency() {
        const std::size_t n = original_ids_.size();
        degrees_.assign(n, 0);
        for (const auto& e : edges_) {
            ++degrees_[e.u];
            ++degrees_[e.v];
        }
        offsets_.assign(n + 1, 0);
        for (std::size_t v = 0; v < n; ++v) offsets_[v + 1] = offsets_[v] + degrees_[v];
        targets_.resize(offsets_[n]);
        std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
        // Edges are sorted by (u, v), so each list comes out sorted.
        for (const auto& e : edges_) targets_[fill[e.v]++] = e.u;
        for (const auto& e : edges_) targets_[fill[e.u]++] = e.v;
        for (std::size_t v = 0; v < n; ++v) {
            std::sort(targets_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]),
                      targets_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]));
        }
    }

    std::vector<original_id> original_ids_;
    std::vector<Edge> edges_;
    std::vector<std::size_t> degrees_;
    std::vector<std::size_t> offsets_;
    std::vector<vertex_id> targets_;
};

/// Vertex bipartition (C, V\C). side[v] is true iff v is in C.
struct Cut {
    std::vector<bool> side;
    std::size_t cut_size = 0;
    std::size_t internal_c = 0;
    std::size_t internal_rest = 0;

    std::vector<vertex_id> members() const {
        std::vector<vertex_id> out;
        for (std::size_t v = 0; v < side.size(); ++v) {
            if (side[v]) out.push_back(static_cast<vertex_id>(v));
        }
        return out;
    }

    friend bool operator==(const Cut&, const Cut&) = default;
};

inline Cut cut_from_side(const Graph& g, std::vector<bool> side) {
    if (side.size() != g.vertex_count()) {
        throw dimension_error("side vector has length " + std::to_string(side.size()) +
                              ", graph has " + std::to_string(g.vertex_count()) + " vertices");
    }
    Cut cut;
    for (const auto& e : g.edges()) {
        const bool a = side[e.u];
        const bool b = side[e.v];
        if (a != b) {
            ++cut.cut_size;
        } else if (a) {
            ++cut.internal_c;
        } else {
            ++cut.internal_rest;
        }
    }
    cut.side = std::move(side);
    return cut;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n\v\f");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n\v\f");
    return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::string_view(" \t\r\n\v\f").find(s[i]) != std::string_view::npos) ++i;
        const std::size_t start = i;
        while (i < s.size() && std::string_view(" \t\r\n\v\f").find(s[i]) == std::string_view::npos) ++i;
        if (i > start) out.push_back(s.substr(start, i - start));
    }
    return out;
}

inline original_id parse_id(std::string_view token, std::size_t line) {
    original_id value = 0;
    const auto* end = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(token.data(), end, value);
    if (ec != std::errc() || ptr != end) {
        throw parse_error("expected a nonnegative integer vertex id, got '" + std::string(token) + "'",
                          line);
    }
    return value;
}

} // namespace detail

/// Reads the canonical format: one `u v` pair of 0-indexed ids per line,
/// blank lines and `#` comment lines ignored.
inline Graph parse_edge_list(std::istream& in) {
    std::vector<std::pair<original_id, original_id>> pairs;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto text = detail::trim(raw);
        if (text.empty() || text.front() == '#') continue;
        const auto tokens = detail::split_ws(text);
        if (tokens.size() != 2) {
            throw parse_error("expected two vertex ids, got " + std::to_string(tokens.size()) +
                                  " tokens",
                              line);
        }
        const auto a = detail::parse_id(tokens[0], line);
        const auto b = detail::parse_id(tokens[1], line);
        if (a == b) throw parse_error("self-loop on vertex " + std::to_string(a), line);
        pairs.emplace_back(a, b);
    }
    return Graph::from_edges(pairs);
}

inline Graph parse_edge_list(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_edge_list(in);
}

/// DIMACS adapter: `c` comments, one `p edge n m` line, then `e u v` lines
/// with 1-indexed ids. Ids are shifted to the canonical 0-indexed form.
inline Graph parse_dimacs(std::istream& in) {
    std::vector<std::pair<original_id, original_id>> pairs;
    std::string raw;
    std::size_t line = 0;
    bool seen_problem = false;
    original_id declared_n = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto text = detail::trim(raw);
        if (text.empty() || text.front() == 'c' || text.front() == '#') continue;
        const auto tokens = detail::split_ws(text);
        if (tokens[0] == "p") {
            if (seen_problem) throw parse_error("duplicate problem line", line);
            if (tokens.size() != 4 || (tokens[1] != "edge" && tokens[1] != "col")) {
                throw parse_error("expected 'p edge <n> <m>'", line);
            }
            declared_n = detail::parse_id(tokens[2], line);
            detail::parse_id(tokens[3], line);
            seen_problem = true;
        } else if (tokens[0] == "e") {
            if (!seen_problem) throw parse_error("edge line before problem line", line);
            if (tokens.size() != 3) throw parse_error("expected 'e <u> <v>'", line);
            const auto a = detail::parse_id(tokens[1], line);
            const auto b = detail::parse_id(tokens[2], line);
            if (a == 0 || b == 0 || a > declared_n || b > declared_n) {
                throw parse_error("vertex id out of range 1.." + std::to_string(declared_n), line);
            }
            if (a == b) throw parse_error("self-loop on vertex " + std::to_string(a), line);
            pairs.emplace_back(a - 1, b - 1);
        } else {
            throw parse_error("unknown line type '" + std::string(tokens[0]) + "'", line);
        }
    }
    if (!seen_problem) throw parse_error("missing 'p edge' line", 0);
    return Graph::from_edges(pairs);
}

enum class GraphFormat { edge_list, dimacs };

inline Graph load_graph(const std::string& path, GraphFormat format = GraphFormat::edge_list) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return format == GraphFormat::dimacs ? parse_dimacs(in) : parse_edge_list(in);
}

/// Writes the canonical format using original ids.
inline void write_edge_list(std::ostream& out, const Graph& g) {
    for (const auto& e : g.edges()) out << g.original(e.u) << ' ' << g.original(e.v) << '\n';
}

inline std::string to_edge_list(const Graph& g) {
    std::ostringstream out;
    write_edge_list(out, g);
    return out.str();
}

/// G(n, p): every pair {i, j} of 0..n-1 is an edge independently with
/// probability p. Isolated vertices are stripped (their ids stay recoverable
/// through original()). Deterministic in `seed`.
inline Graph gen_erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("G(n, p) needs n >= 2");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("G(n, p) needs 0 <= p <= 1");
    detail::engine rng(seed);
    std::vector<std::pair<original_id, original_id>> pairs;
    for (original_id i = 0; i < n; ++i) {
        for (original_id j = i + 1; j < n; ++j) {
            if (detail::uniform01(rng) < p) pairs.emplace_back(i, j);
        }
    }
    return Graph::from_edges(pairs);
}

} // namespace qpcut
