#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "astopo/copula.hpp"
#include "astopo/graph.hpp"
#include "astopo/profile.hpp"
#include "astopo/random.hpp"

namespace astopo {

/// Result of stub matching before cleanup. May contain self-loops and
/// repeated node pairs; for C2P edges `u` is the customer.
struct StubMultigraph {
    std::size_t node_count = 0;
    std::vector<Edge> edges;
};

struct EdgeTargets {
    std::size_t c2p = 0;
    std::size_t p2p = 0;
    bool operator==(const EdgeTargets&) const = default;
};

/// n_c2p = min(sum q1, sum q2), n_p2p = floor(sum q3 / 2).
EdgeTargets target_edge_counts(std::span<const DegreeVector> add);

/// Matched stubs of each color per node.
std::vector<DegreeVector> matched_stub_counts(const StubMultigraph& graph);

struct RewireReport {
    std::size_t rewired = 0;
    std::size_t dropped = 0;
};

struct ConstructionReport {
    std::size_t c2p_formed = 0;
    std::size_t p2p_formed = 0;
    std::size_t unmatched_customer = 0;
    std::size_t unmatched_provider = 0;
    std::size_t unmatched_peer = 0;
    RewireReport rewire;
    SimplifyReport simplify;
    std::size_t lcc_nodes = 0;
    std::size_t lcc_edges = 0;
};

/// Uniform matching of customer with provider stubs and of peer stubs with
/// each other, until one side of each pool runs out.
StubMultigraph match_stubs_1k(std::span<const DegreeVector> add, Rng& rng,
                              ConstructionReport* report = nullptr);

/// Copula-driven matching: the rescaled JDD copulas pick stubs by quantile
/// in per-color stub lists ordered by host total degree. All C2P edges are
/// formed before any P2P edge.
StubMultigraph match_stubs_2k(std::span<const DegreeVector> add, const SummaryProfile& profile,
                              Rng& rng, ConstructionReport* report = nullptr);

/// Walks the edges in formation order. Each self-loop, or repeat of a pair
/// already kept, is moved onto a random non-adjacent pair of distinct nodes
/// with the same target total degrees as its endpoints (customer side kept
/// on the first endpoint's degree class). After 100 failed draws the edge is
/// removed. The result has neither loops nor repeated pairs.
RewireReport rewire_loops(StubMultigraph& graph, std::span<const std::int64_t> target_degree,
                          Rng& rng);

/// Drops loops, collapses repeats (first formed wins) and keeps the largest
/// component. Throws EmptyGraphError when no edge survives.
AnnotatedGraph finalize_graph(const StubMultigraph& graph, ConstructionReport* report = nullptr);

AnnotatedGraph construct_1k(std::span<const DegreeVector> add, Rng& rng,
                            ConstructionReport* report = nullptr);
AnnotatedGraph construct_2k(std::span<const DegreeVector> add, const SummaryProfile& profile,
                            Rng& rng, ConstructionReport* report = nullptr);

void to_json(nlohmann::json& j, const ConstructionReport& r);

}  // namespace astopo
