#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qpcut {

/// Malformed graph input. `line()` is 1-based, 0 when not tied to a line.
class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& what, std::size_t line)
        : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Vector length does not match the graph's vertex count.
class dimension_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// (alpha, beta) pair with an empty feasible set, or an out-of-range parameter.
class infeasible_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Instance too large for an exhaustive routine.
class size_error : public std::length_error {
public:
    using std::length_error::length_error;
};

} // namespace qpcut

namespace qpcut {

/// A graph with no edges after loading or generation.
class empty_graph_error : public std::invalid_argument {
public:
    empty_graph_error() : std::invalid_argument("graph has no edges (at least one edge is required)") {}
};

} // namespace qpcut
