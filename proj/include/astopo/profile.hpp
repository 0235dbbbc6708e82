#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "astopo/graph.hpp"

namespace astopo {

/// Total-degree pair of one edge. For c2p edges `first` is the customer-side
/// node's total degree and `second` the provider side's; p2p pairs are
/// unordered and stored as they were encountered.
using DegreePair = std::array<std::int64_t, 2>;

/// The 2K summary statistics of an annotated topology: the per-node degree
/// vectors (ADD samples, whose projections are the DD and the three ADs) and
/// the per-edge total-degree pairs of each edge kind (the two JDDs).
struct SummaryProfile {
    std::size_t n = 0;
    std::size_t m = 0;
    std::vector<DegreeVector> add_samples;
    std::vector<DegreePair> jdd_c2p_pairs;
    std::vector<DegreePair> jdd_p2p_pairs;

    /// Multiset of total degrees.
    std::vector<std::int64_t> degree_samples() const;
};

SummaryProfile extract_profile(const AnnotatedGraph& graph);

/// Color-c component of every ADD sample, in node order.
std::vector<std::int64_t> marginal_ad(const SummaryProfile& profile, StubColor color);

struct ConsistencyReport {
    bool consistent = true;
    std::size_t classes_checked = 0;
    /// Degree vectors whose direct count disagrees with the 2K-derived count.
    std::vector<DegreeVector> violations;
};

/// Recomputes n(k) from the full sparse 2K-annotated distribution
/// n(c,k; c',k') and compares it with the direct node count for every
/// degree vector with k >= 1. Integer arithmetic throughout.
ConsistencyReport check_2k_to_1k_consistency(const AnnotatedGraph& graph);

void to_json(nlohmann::json& j, const SummaryProfile& p);
void from_json(const nlohmann::json& j, SummaryProfile& p);

SummaryProfile read_profile_file(const std::string& path);
void write_profile_file(const SummaryProfile& profile, const std::string& path);

}  // namespace astopo
