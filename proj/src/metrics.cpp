#include "astopo/metrics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <string>
#include <thread>

namespace astopo {

std::optional<PathPhase> advance(PathPhase phase, LinkDir link) {
    switch (phase) {
    case PathPhase::Up:
        switch (link) {
        case LinkDir::ToProvider: return PathPhase::Up;
        case LinkDir::ToPeer: return PathPhase::Peer;
        case LinkDir::ToCustomer: return PathPhase::Down;
        }
        break;
    case PathPhase::Peer:
    case PathPhase::Down:
        if (link == LinkDir::ToCustomer)
            return PathPhase::Down;
        break;
    }
    return std::nullopt;
}

bool is_valid_path(const AnnotatedGraph& graph, std::span<const node_t> path) {
    PathPhase phase = PathPhase::Up;
    bool valid = true;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        const auto link = graph.find_link(path[i], path[i + 1]);
        if (!link)
            throw std::invalid_argument("nodes " + std::to_string(path[i]) + " and " +
                                        std::to_string(path[i + 1]) + " are not adjacent");
        if (valid) {
            const auto next = advance(phase, *link);
            if (next)
                phase = *next;
            else
                valid = false;
        }
    }
    return valid;
}

double DistanceDistribution::average() const {
    if (reachable_pairs == 0)
        return 0.0;
    long double sum = 0;
    for (std::size_t h = 0; h < histogram.size(); ++h)
        sum += static_cast<long double>(h) * histogram[h];
    return static_cast<double>(sum / reachable_pairs);
}

double DistanceDistribution::reachable_fraction() const {
    const std::uint64_t total = reachable_pairs + unreachable_pairs;
    return total == 0 ? 1.0 : static_cast<double>(reachable_pairs) / static_cast<double>(total);
}

std::vector<node_t> sample_sources(std::size_t node_count, std::size_t s, Rng& rng) {
    if (s > node_count)
        throw std::invalid_argument("sample size " + std::to_string(s) + " exceeds node count " +
                                    std::to_string(node_count));
    std::vector<node_t> ids(node_count);
    std::iota(ids.begin(), ids.end(), node_t{0});
    for (std::size_t i = 0; i < s; ++i)
        std::swap(ids[i], ids[i + rng.below(node_count - i)]);
    ids.resize(s);
    std::sort(ids.begin(), ids.end());
    return ids;
}

namespace {

struct BfsScratch {
    std::vector<std::int32_t> dist;
    std::vector<std::uint32_t> queue;
};

void bfs_shortest(const AnnotatedGraph& g, node_t source, BfsScratch& s) {
    s.dist.assign(g.node_count(), -1);
    s.queue.clear();
    s.dist[source] = 0;
    s.queue.push_back(source);
    for (std::size_t head = 0; head < s.queue.size(); ++head) {
        const node_t x = s.queue[head];
        const std::int32_t d = s.dist[x] + 1;
        for (const Neighbor& nb : g.neighbors(x)) {
            if (s.dist[nb.node] < 0) {
                s.dist[nb.node] = d;
                s.queue.push_back(nb.node);
            }
        }
    }
}

// States are node * 3 + phase. Fills `s.dist` with per-state distances.
void bfs_valid(const AnnotatedGraph& g, node_t source, BfsScratch& s) {
    s.dist.assign(g.node_count() * 3, -1);
    s.queue.clear();
    const std::uint32_t start = source * 3 + static_cast<std::uint32_t>(PathPhase::Up);
    s.dist[start] = 0;
    s.queue.push_back(start);
    for (std::size_t head = 0; head < s.queue.size(); ++head) {
        const std::uint32_t state = s.queue[head];
        const node_t x = state / 3;
        const auto phase = static_cast<PathPhase>(state % 3);
        const std::int32_t d = s.dist[state] + 1;
        for (const Neighbor& nb : g.neighbors(x)) {
            const auto next = advance(phase, nb.dir);
            if (!next)
                continue;
            const std::uint32_t t = nb.node * 3 + static_cast<std::uint32_t>(*next);
            if (s.dist[t] < 0) {
                s.dist[t] = d;
                s.queue.push_back(t);
            }
        }
    }
}

std::int32_t min_over_phases(const std::vector<std::int32_t>& dist, node_t v) {
    std::int32_t best = -1;
    for (int p = 0; p < 3; ++p) {
        const std::int32_t d = dist[v * 3 + p];
        if (d >= 0 && (best < 0 || d < best))
            best = d;
    }
    return best;
}

void accumulate(DistanceDistribution& into, const DistanceDistribution& from) {
    if (into.histogram.size() < from.histogram.size())
        into.histogram.resize(from.histogram.size(), 0);
    for (std::size_t h = 0; h < from.histogram.size(); ++h)
        into.histogram[h] += from.histogram[h];
    into.reachable_pairs += from.reachable_pairs;
    into.unreachable_pairs += from.unreachable_pairs;
}

}  // namespace

std::vector<std::int32_t> valid_distances_from(const AnnotatedGraph& graph, node_t source) {
    if (source >= graph.node_count())
        throw NodeNotFound(source);
    BfsScratch s;
    bfs_valid(graph, source, s);
    std::vector<std::int32_t> out(graph.node_count());
    for (node_t v = 0; v < graph.node_count(); ++v)
        out[v] = min_over_phases(s.dist, v);
    return out;
}

DistanceDistribution distance_distribution(const AnnotatedGraph& graph, DistanceMode mode,
                                           std::span<const node_t> sources, unsigned threads) {
    if (!is_connected(graph))
        throw std::invalid_argument("distance distribution needs a connected graph");
    for (node_t s : sources)
        if (s >= graph.node_count())
            throw NodeNotFound(s);

    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, sources.size())));

    std::vector<DistanceDistribution> partial(threads);
    std::atomic<std::size_t> next{0};
    auto worker = [&](unsigned t) {
        BfsScratch s;
        DistanceDistribution& out = partial[t];
        const std::size_t n = graph.node_count();
        for (std::size_t i = next.fetch_add(1); i < sources.size(); i = next.fetch_add(1)) {
            const node_t src = sources[i];
            if (mode == DistanceMode::Shortest)
                bfs_shortest(graph, src, s);
            else
                bfs_valid(graph, src, s);
            for (node_t v = 0; v < n; ++v) {
                if (v == src)
                    continue;
                const std::int32_t d =
                    mode == DistanceMode::Shortest ? s.dist[v] : min_over_phases(s.dist, v);
                if (d < 0) {
                    ++out.unreachable_pairs;
                    continue;
                }
                if (out.histogram.size() <= static_cast<std::size_t>(d))
                    out.histogram.resize(d + 1, 0);
                ++out.histogram[d];
                ++out.reachable_pairs;
            }
        }
    };

    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back(worker, t);
        for (auto& th : pool)
            th.join();
    }
    DistanceDistribution total;
    for (const auto& p : partial)
        accumulate(total, p);
    return total;
}

DistanceDistribution distance_distribution(const AnnotatedGraph& graph, DistanceMode mode,
                                           unsigned threads) {
    std::vector<node_t> all(graph.node_count());
    std::iota(all.begin(), all.end(), node_t{0});
    return distance_distribution(graph, mode, all, threads);
}

double assortativity(const AnnotatedGraph& graph) {
    if (graph.edge_count() == 0)
        throw DegenerateDegreeStructure();
    long double s1 = 0, s2 = 0, sxy = 0;
    for (const Edge& e : graph.edges()) {
        const long double a = static_cast<long double>(graph.degree(e.u));
        const long double b = static_cast<long double>(graph.degree(e.v));
        s1 += a + b;
        s2 += a * a + b * b;
        sxy += 2 * a * b;
    }
    const long double count = 2.0L * graph.edge_count();
    const long double mean = s1 / count;
    const long double var = s2 / count - mean * mean;
    if (var <= 1e-12L * std::max<long double>(1, mean * mean))
        throw DegenerateDegreeStructure();
    const long double cov = sxy / count - mean * mean;
    return std::clamp(static_cast<double>(cov / var), -1.0, 1.0);
}

double expected_max_degree(double n, double gamma) {
    if (!(gamma > 1.0))
        throw std::invalid_argument("gamma must exceed 1");
    return std::pow(n, 1.0 / (gamma - 1.0));
}

std::size_t select_representative(std::span<const GraphMetricsReport> reports, double gamma) {
    if (reports.empty())
        throw std::invalid_argument("select_representative: empty ensemble");
    std::size_t best = 0;
    double best_gap = 0;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const double target = expected_max_degree(static_cast<double>(reports[i].nodes), gamma);
        const double gap = std::abs(static_cast<double>(reports[i].max_degree) - target);
        if (i == 0 || gap < best_gap) {
            best = i;
            best_gap = gap;
        }
    }
    return best;
}

MeanStd mean_std(std::span<const double> values) {
    if (values.size() < 2)
        throw std::invalid_argument("need at least two values for a sample deviation");
    long double sum = 0;
    for (double v : values)
        sum += v;
    const long double mean = sum / values.size();
    long double ss = 0;
    for (double v : values)
        ss += (v - mean) * (v - mean);
    return {static_cast<double>(mean), static_cast<double>(std::sqrt(ss / (values.size() - 1)))};
}

EnsembleStats ensemble_stats(std::span<const GraphMetricsReport> reports) {
    if (reports.size() < 2)
        throw std::invalid_argument("ensemble_stats needs at least two reports");
    auto column = [&](auto get) {
        std::vector<double> v;
        for (const auto& r : reports)
            v.push_back(get(r));
        return mean_std(v);
    };
    EnsembleStats s;
    s.c2p_edges = column([](const GraphMetricsReport& r) { return double(r.c2p_edges); });
    s.p2p_edges = column([](const GraphMetricsReport& r) { return double(r.p2p_edges); });
    s.max_degree = column([](const GraphMetricsReport& r) { return double(r.max_degree); });
    s.avg_degree = column([](const GraphMetricsReport& r) { return r.avg_degree; });
    const bool have_distance = std::all_of(reports.begin(), reports.end(),
                                           [](const auto& r) { return r.avg_distance.has_value(); });
    if (have_distance)
        s.avg_distance = column([](const GraphMetricsReport& r) { return *r.avg_distance; });
    return s;
}

namespace {

std::map<std::uint32_t, std::uint64_t> as_map(const DistanceDistribution& d) {
    std::map<std::uint32_t, std::uint64_t> out;
    for (std::size_t h = 0; h < d.histogram.size(); ++h)
        if (d.histogram[h] > 0)
            out[static_cast<std::uint32_t>(h)] = d.histogram[h];
    return out;
}

}  // namespace

GraphMetricsReport scalar_report(const AnnotatedGraph& graph, const ReportOptions& options) {
    GraphMetricsReport r;
    r.nodes = graph.node_count();
    r.edges = graph.edge_count();
    r.c2p_edges = graph.c2p_count();
    r.p2p_edges = graph.p2p_count();
    r.max_degree = graph.max_degree();
    r.avg_degree = r.nodes == 0 ? 0.0 : 2.0 * static_cast<double>(r.edges) / static_cast<double>(r.nodes);
    try {
        r.assortativity = assortativity(graph);
    } catch (const DegenerateDegreeStructure&) {
        r.assortativity.reset();
    }
    if (options.spectrum) {
        const LaplacianExtremes ext = laplacian_extremes(graph);
        r.laplacian_max = ext.largest;
        r.laplacian_min_nonzero = ext.smallest_nonzero;
    }
    if (options.distances || options.valid_paths) {
        std::vector<node_t> sources;
        if (options.sources == 0 || options.sources >= graph.node_count()) {
            sources.resize(graph.node_count());
            std::iota(sources.begin(), sources.end(), node_t{0});
        } else {
            Rng rng = Rng(options.seed).stream("sources");
            sources = sample_sources(graph.node_count(), options.sources, rng);
        }
        if (options.distances) {
            const auto d = distance_distribution(graph, DistanceMode::Shortest, sources, options.threads);
            r.avg_distance = d.average();
            r.distance_histogram = as_map(d);
        }
        if (options.valid_paths) {
            const auto d = distance_distribution(graph, DistanceMode::Valid, sources, options.threads);
            r.avg_valid_distance = d.average();
            r.valid_reachable_fraction = d.reachable_fraction();
            r.valid_distance_histogram = as_map(d);
        }
    }
    return r;
}

namespace {

nlohmann::json optional_json(const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::optional<double> optional_from(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null())
        return std::nullopt;
    return j.at(key).get<double>();
}

nlohmann::json histogram_json(const std::map<std::uint32_t, std::uint64_t>& h) {
    nlohmann::json out = nlohmann::json::object();
    for (const auto& [hops, count] : h)
        out[std::to_string(hops)] = count;
    return out;
}

std::map<std::uint32_t, std::uint64_t> histogram_from(const nlohmann::json& j, const char* key) {
    std::map<std::uint32_t, std::uint64_t> out;
    if (!j.contains(key))
        return out;
    for (const auto& [hops, count] : j.at(key).items())
        out[static_cast<std::uint32_t>(std::stoul(hops))] = count.get<std::uint64_t>();
    return out;
}

}  // namespace

void to_json(nlohmann::json& j, const GraphMetricsReport& r) {
    j = nlohmann::json{{"nodes", r.nodes},
                       {"edges", r.edges},
                       {"c2p_edges", r.c2p_edges},
                       {"p2p_edges", r.p2p_edges},
                       {"max_degree", r.max_degree},
                       {"avg_degree", r.avg_degree},
                       {"assortativity", optional_json(r.assortativity)},
                       {"laplacian_max", optional_json(r.laplacian_max)},
                       {"laplacian_min_nonzero", optional_json(r.laplacian_min_nonzero)},
                       {"avg_distance", optional_json(r.avg_distance)},
                       {"avg_valid_distance", optional_json(r.avg_valid_distance)},
                       {"valid_reachable_fraction", optional_json(r.valid_reachable_fraction)},
                       {"distance_histogram", histogram_json(r.distance_histogram)},
                       {"valid_distance_histogram", histogram_json(r.valid_distance_histogram)}};
}

void from_json(const nlohmann::json& j, GraphMetricsReport& r) {
    r.nodes = j.at("nodes").get<std::size_t>();
    r.edges = j.at("edges").get<std::size_t>();
    r.c2p_edges = j.at("c2p_edges").get<std::size_t>();
    r.p2p_edges = j.at("p2p_edges").get<std::size_t>();
    r.max_degree = j.at("max_degree").get<std::size_t>();
    r.avg_degree = j.at("avg_degree").get<double>();
    r.assortativity = optional_from(j, "assortativity");
    r.laplacian_max = optional_from(j, "laplacian_max");
    r.laplacian_min_nonzero = optional_from(j, "laplacian_min_nonzero");
    r.avg_distance = optional_from(j, "avg_distance");
    r.avg_valid_distance = optional_from(j, "avg_valid_distance");
    r.valid_reachable_fraction = optional_from(j, "valid_reachable_fraction");
    r.distance_histogram = histogram_from(j, "distance_histogram");
    r.valid_distance_histogram = histogram_from(j, "valid_distance_histogram");
}

void to_json(nlohmann::json& j, const EnsembleStats& s) {
    auto ms = [](const MeanStd& m) { return nlohmann::json{{"mean", m.mean}, {"std", m.std}}; };
    j = nlohmann::json{{"c2p_edges", ms(s.c2p_edges)},
                       {"p2p_edges", ms(s.p2p_edges)},
                       {"max_degree", ms(s.max_degree)},
                       {"avg_degree", ms(s.avg_degree)}};
    if (s.avg_distance)
        j["avg_distance"] = ms(*s.avg_distance);
}

void write_degree_scatter_csv(const AnnotatedGraph& graph, std::ostream& out) {
    out << "label,total,k1,k2,k3\n";
    for (node_t v = 0; v < graph.node_count(); ++v) {
        const DegreeVector& d = graph.degree_vector(v);
        out << graph.label(v) << ',' << d.total() << ',' << d.k1 << ',' << d.k2 << ',' << d.k3
            << '\n';
    }
}

}  // namespace astopo
