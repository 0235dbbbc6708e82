#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "astopo/graph.hpp"
#include "astopo/random.hpp"

namespace astopo {

/// Phase of a valley-free path: climbing customer-to-provider links, after
/// the single allowed peer link, or descending provider-to-customer links.
enum class PathPhase : std::uint8_t { Up = 0, Peer = 1, Down = 2 };

/// Next phase after traversing a link, or nullopt if the pattern forbids it.
std::optional<PathPhase> advance(PathPhase phase, LinkDir link);

/// Throws std::invalid_argument when consecutive nodes are not adjacent.
bool is_valid_path(const AnnotatedGraph& graph, std::span<const node_t> path);

enum class DistanceMode { Shortest, Valid };

/// Hop-count histogram over ordered (source, destination) pairs with
/// source != destination.
struct DistanceDistribution {
    std::vector<std::uint64_t> histogram;  // index = hops
    std::uint64_t reachable_pairs = 0;
    std::uint64_t unreachable_pairs = 0;

    double average() const;
    double reachable_fraction() const;
};

/// `s` distinct sources chosen uniformly; throws if s > n.
std::vector<node_t> sample_sources(std::size_t node_count, std::size_t s, Rng& rng);

/// BFS from every listed source. Valid mode runs on the node x phase product
/// graph and keeps the minimum over phases. Throws if the graph is not
/// connected. `threads` = 0 uses the hardware concurrency.
DistanceDistribution distance_distribution(const AnnotatedGraph& graph, DistanceMode mode,
                                           std::span<const node_t> sources, unsigned threads = 0);
DistanceDistribution distance_distribution(const AnnotatedGraph& graph, DistanceMode mode,
                                           unsigned threads = 0);

/// Valid-path hop distances from one source; -1 where no valid path exists.
std::vector<std::int32_t> valid_distances_from(const AnnotatedGraph& graph, node_t source);

class DegenerateDegreeStructure : public std::domain_error {
public:
    DegenerateDegreeStructure()
        : std::domain_error("degenerate (regular or star-like) degree structure") {}
};

/// Pearson correlation of total degrees at the two ends of each edge, with
/// every edge counted in both orientations.
double assortativity(const AnnotatedGraph& graph);

struct LaplacianExtremes {
    double largest = 0.0;
    double smallest_nonzero = 0.0;
};

/// Extremal eigenvalues of the normalized Laplacian by Lanczos iteration
/// with full reorthogonalization. The smallest nonzero one is the top of
/// 2I - L after the kernel vector (sqrt of degrees) is projected out.
LaplacianExtremes laplacian_extremes(const AnnotatedGraph& graph, double tolerance = 1e-9);

/// Full normalized Laplacian spectrum, ascending. Dense; n <= 2000 only.
std::vector<double> laplacian_spectrum_dense(const AnnotatedGraph& graph);

struct ReportOptions {
    bool distances = true;
    bool valid_paths = true;
    bool spectrum = true;
    /// 0 runs BFS from every node.
    std::size_t sources = 0;
    std::uint64_t seed = 0;
    unsigned threads = 0;
};

struct GraphMetricsReport {
    std::size_t nodes = 0;
    std::size_t edges = 0;
    std::size_t c2p_edges = 0;
    std::size_t p2p_edges = 0;
    std::size_t max_degree = 0;
    double avg_degree = 0.0;
    std::optional<double> assortativity;
    std::optional<double> laplacian_max;
    std::optional<double> laplacian_min_nonzero;
    std::optional<double> avg_distance;
    std::optional<double> avg_valid_distance;
    std::optional<double> valid_reachable_fraction;
    std::map<std::uint32_t, std::uint64_t> distance_histogram;
    std::map<std::uint32_t, std::uint64_t> valid_distance_histogram;
};

GraphMetricsReport scalar_report(const AnnotatedGraph& graph, const ReportOptions& options = {});

void to_json(nlohmann::json& j, const GraphMetricsReport& r);
void from_json(const nlohmann::json& j, GraphMetricsReport& r);

/// n^(1/(gamma-1)).
double expected_max_degree(double n, double gamma);

/// Index of the report whose max degree is closest to the expected maximum
/// for its node count; ties go to the lowest index.
std::size_t select_representative(std::span<const GraphMetricsReport> reports, double gamma = 2.1);

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;
};

struct EnsembleStats {
    MeanStd c2p_edges;
    MeanStd p2p_edges;
    MeanStd max_degree;
    MeanStd avg_degree;
    std::optional<MeanStd> avg_distance;
};

/// Sample mean and standard deviation (n - 1 denominator). Needs >= 2 reports.
EnsembleStats ensemble_stats(std::span<const GraphMetricsReport> reports);
MeanStd mean_std(std::span<const double> values);

void to_json(nlohmann::json& j, const EnsembleStats& s);

/// One row per node: label, total degree, k1, k2, k3.
void write_degree_scatter_csv(const AnnotatedGraph& graph, std::ostream& out);

}  // namespace astopo
