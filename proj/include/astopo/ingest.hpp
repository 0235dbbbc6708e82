#pragma once

#include <cstddef>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "astopo/graph.hpp"

namespace astopo {

/// One line of a relationship file "a|b|rel".
/// rel = -1: a is the provider of b; 0: peers; 1: siblings.
struct EdgeRecord {
    std::string a;
    std::string b;
    int rel = 0;

    friend bool operator==(const EdgeRecord&, const EdgeRecord&) = default;
};

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class EmptyGraphError : public std::runtime_error {
public:
    EmptyGraphError() : std::runtime_error("empty graph after cleaning") {}
};

std::vector<EdgeRecord> parse_edge_list(std::istream& in);

struct CleaningReport {
    std::size_t dropped_sibling = 0;
    std::size_t dropped_self_loop = 0;
    std::size_t collapsed_duplicate = 0;
    std::size_t conflicting_duplicate = 0;
    std::size_t lcc_nodes = 0;
    std::size_t lcc_edges = 0;
};

void to_json(nlohmann::json& j, const CleaningReport& r);
void from_json(const nlohmann::json& j, CleaningReport& r);

/// Drops siblings and self-loops, collapses repeated pairs (first wins),
/// and returns the largest connected component. Throws EmptyGraphError when
/// nothing survives.
AnnotatedGraph clean_and_build(const std::vector<EdgeRecord>& records,
                               CleaningReport* report = nullptr);

/// Same cleaning but keeps every component.
AnnotatedGraph clean_and_build_all(const std::vector<EdgeRecord>& records,
                                   CleaningReport* report = nullptr);

/// Canonical edge list: c2p as "provider|customer|-1", p2p as "a|b|0" with
/// a < b, lines sorted by label (numerically when both labels are integers).
/// Returns the number of bytes written.
std::size_t write_edge_list(const AnnotatedGraph& graph, std::ostream& out);

/// Label ordering used for canonical output.
bool label_less(const std::string& a, const std::string& b);

AnnotatedGraph read_graph_file(const std::string& path, CleaningReport* report = nullptr);
/// Reads without extracting the largest component.
AnnotatedGraph read_graph_file_all(const std::string& path, CleaningReport* report = nullptr);
void write_graph_file(const AnnotatedGraph& graph, const std::string& path);

}  // namespace astopo
