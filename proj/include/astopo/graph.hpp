#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace astopo {

using node_t = std::uint32_t;

/// Color of an edge-end. The numeric values are the customer/provider/peer
/// indices 1, 2, 3 used throughout the degree-vector notation.
enum class StubColor : std::uint8_t { Customer = 1, Provider = 2, Peer = 3 };

enum class EdgeKind : std::uint8_t { C2P, P2P };

/// How a neighbor relates to the node whose adjacency is being walked.
enum class LinkDir : std::uint8_t {
    ToProvider,  // traversing customer -> provider (upstream)
    ToCustomer,  // traversing provider -> customer (downstream)
    ToPeer
};

/// Per-node stub counts. k1 counts customer stubs (= number of providers),
/// k2 provider stubs (= number of customers), k3 peer stubs.
struct DegreeVector {
    std::int64_t k1 = 0;
    std::int64_t k2 = 0;
    std::int64_t k3 = 0;

    std::int64_t total() const { return k1 + k2 + k3; }
    std::int64_t operator[](StubColor c) const;
    std::int64_t& operator[](StubColor c);

    friend bool operator==(const DegreeVector&, const DegreeVector&) = default;
    friend auto operator<=>(const DegreeVector&, const DegreeVector&) = default;
};

/// A c2p edge is stored as (customer u, provider v); p2p edges are unordered.
struct Edge {
    node_t u = 0;
    node_t v = 0;
    EdgeKind kind = EdgeKind::C2P;

    friend bool operator==(const Edge&, const Edge&) = default;
};

struct Neighbor {
    node_t node;
    LinkDir dir;
};

struct StubTotals {
    std::int64_t customer = 0;
    std::int64_t provider = 0;
    std::int64_t peer = 0;

    friend bool operator==(const StubTotals&, const StubTotals&) = default;
};

class NodeNotFound : public std::out_of_range {
public:
    explicit NodeNotFound(node_t id)
        : std::out_of_range("node not found: " + std::to_string(id)) {}
};

/// Immutable simple annotated graph with CSR adjacency.
///
/// Construction rejects self-loops and duplicate node pairs; the constructor
/// phases that need multigraph state work on raw edge vectors and call
/// `simplify_edges` before building an AnnotatedGraph.
class AnnotatedGraph {
public:
    AnnotatedGraph() = default;

    /// Labels default to the decimal node id when empty.
    AnnotatedGraph(std::size_t node_count, std::vector<Edge> edges,
                   std::vector<std::string> labels = {});

    std::size_t node_count() const { return degrees_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    std::size_t c2p_count() const { return c2p_count_; }
    std::size_t p2p_count() const { return edges_.size() - c2p_count_; }

    std::span<const Edge> edges() const { return edges_; }
    std::span<const Neighbor> neighbors(node_t node) const;
    std::size_t degree(node_t node) const { return neighbors(node).size(); }

    const DegreeVector& degree_vector(node_t node) const;
    std::span<const DegreeVector> degree_vectors() const { return degrees_; }

    const std::string& label(node_t node) const;
    std::span<const std::string> labels() const { return labels_; }

    /// Ids of this graph's nodes in the graph it was extracted from (identity
    /// for graphs that were not produced by `largest_connected_component`).
    std::span<const node_t> original_ids() const { return original_ids_; }

    /// Direction of the edge from `a` to `b`; empty when not adjacent.
    std::optional<LinkDir> find_link(node_t a, node_t b) const;

    StubTotals stub_totals() const;

    std::size_t max_degree() const;

private:
    friend AnnotatedGraph largest_connected_component(const AnnotatedGraph&);

    std::vector<Edge> edges_;
    std::vector<DegreeVector> degrees_;
    std::vector<std::size_t> offsets_;
    std::vector<Neighbor> adjacency_;
    std::vector<std::string> labels_;
    std::vector<node_t> original_ids_;
    std::size_t c2p_count_ = 0;
};

DegreeVector degree_vector(const AnnotatedGraph& graph, node_t node);

StubTotals stub_totals(const AnnotatedGraph& graph);
StubTotals stub_totals(std::span<const DegreeVector> vectors);

/// Induced subgraph on the largest connected component of the undirected
/// skeleton. Ties between equal-size components go to the one holding the
/// smallest node id. Node ids are re-densified in original order.
AnnotatedGraph largest_connected_component(const AnnotatedGraph& graph);

/// Connected-component id per node (undirected skeleton), numbered in order
/// of each component's smallest node id.
std::vector<std::uint32_t> component_ids(const AnnotatedGraph& graph);

bool is_connected(const AnnotatedGraph& graph);

struct SimplifyReport {
    std::size_t self_loops = 0;
    std::size_t duplicates = 0;
    std::size_t conflicting_duplicates = 0;
};

/// Drops self-loops and collapses repeated node pairs to their first
/// occurrence. A repeat counts as conflicting when its kind or c2p
/// orientation differs from the kept edge.
std::vector<Edge> simplify_edges(std::span<const Edge> edges, SimplifyReport* report = nullptr);

inline std::uint64_t pair_key(node_t a, node_t b) {
    if (a > b)
        std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

}  // namespace astopo
