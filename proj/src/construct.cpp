#include "astopo/construct.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "astopo/ingest.hpp"

namespace astopo {
namespace {

void check_add(std::span<const DegreeVector> add) {
    if (add.empty())
        throw std::invalid_argument("empty degree vector list");
    bool any = false;
    for (const DegreeVector& d : add) {
        if (d.k1 < 0 || d.k2 < 0 || d.k3 < 0)
            throw std::invalid_argument("negative stub count");
        any = any || d.total() > 0;
    }
    if (!any)
        throw std::invalid_argument("no stubs");
}

std::vector<node_t> stub_list(std::span<const DegreeVector> add, StubColor c) {
    std::vector<node_t> out;
    for (std::size_t j = 0; j < add.size(); ++j)
        out.insert(out.end(), static_cast<std::size_t>(add[j][c]), static_cast<node_t>(j));
    return out;
}

// Remaining stubs of one color, ordered by (host total degree, host id).
// A Fenwick tree over occupied slots finds the k-th remaining stub.
class QuantilePool {
public:
    QuantilePool(std::span<const DegreeVector> add, StubColor c) {
        slots_ = stub_list(add, c);
        std::stable_sort(slots_.begin(), slots_.end(), [&](node_t a, node_t b) {
            return add[a].total() < add[b].total();
        });
        tree_.assign(slots_.size() + 1, 0);
        for (std::size_t i = 1; i <= slots_.size(); ++i) {
            tree_[i] += 1;
            const std::size_t parent = i + (i & (~i + 1));
            if (parent <= slots_.size())
                tree_[parent] += tree_[i];
        }
        remaining_ = slots_.size();
        top_bit_ = 1;
        while (top_bit_ * 2 <= slots_.size())
            top_bit_ *= 2;
    }

    std::size_t remaining() const { return remaining_; }

    /// Removes and returns the host of the ceil(rank * R / total)-th
    /// remaining stub, where R is the current remaining count.
    node_t take(std::uint64_t rank, std::uint64_t total) {
        const std::uint64_t r = remaining_;
        std::uint64_t k = (rank * r + total - 1) / total;
        k = std::clamp<std::uint64_t>(k, 1, r);
        std::size_t pos = 0;
        for (std::size_t step = top_bit_; step > 0; step >>= 1) {
            const std::size_t next = pos + step;
            if (next < tree_.size() && static_cast<std::uint64_t>(tree_[next]) < k) {
                pos = next;
                k -= static_cast<std::uint64_t>(tree_[next]);
            }
        }
        for (std::size_t i = pos + 1; i < tree_.size(); i += i & (~i + 1))
            tree_[i] -= 1;
        --remaining_;
        return slots_[pos];
    }

private:
    std::vector<node_t> slots_;
    std::vector<std::int32_t> tree_;
    std::size_t remaining_ = 0;
    std::size_t top_bit_ = 1;
};

// Ranks of a copula resampled from the measured pairs to `count` rows.
CopulaSample rescaled_jdd_copula(std::span<const DegreePair> pairs, std::size_t count, Rng& rng,
                                 bool orient_randomly) {
    std::vector<IntRow<2>> rows(pairs.begin(), pairs.end());
    if (orient_randomly) {
        Rng flip = rng.stream("orient");
        for (auto& r : rows)
            if (flip.next() >> 63)
                std::swap(r[0], r[1]);
    }
    Rng resample = rng.stream("resample");
    auto drawn = resample_rows<2>(rows, count, resample);
    Rng ranks = rng.stream("ranks");
    return rank_transform<2>(drawn, ranks);
}

// Independent uniform ranks when the profile carries no pairs of a kind.
CopulaSample uniform_copula(std::size_t count, Rng& rng) {
    std::vector<IntRow<2>> rows(count, IntRow<2>{0, 0});
    return rank_transform<2>(rows, rng);
}

}  // namespace

EdgeTargets target_edge_counts(std::span<const DegreeVector> add) {
    const StubTotals t = stub_totals(add);
    return {static_cast<std::size_t>(std::min(t.customer, t.provider)),
            static_cast<std::size_t>(t.peer / 2)};
}

std::vector<DegreeVector> matched_stub_counts(const StubMultigraph& graph) {
    std::vector<DegreeVector> out(graph.node_count);
    for (const Edge& e : graph.edges) {
        if (e.kind == EdgeKind::C2P) {
            ++out[e.u].k1;
            ++out[e.v].k2;
        } else {
            ++out[e.u].k3;
            ++out[e.v].k3;
        }
    }
    return out;
}

StubMultigraph match_stubs_1k(std::span<const DegreeVector> add, Rng& rng,
                              ConstructionReport* report) {
    check_add(add);
    StubMultigraph g{add.size(), {}};
    auto customers = stub_list(add, StubColor::Customer);
    auto providers = stub_list(add, StubColor::Provider);
    auto peers = stub_list(add, StubColor::Peer);
    Rng c_rng = rng.stream("customer");
    Rng p_rng = rng.stream("provider");
    Rng r_rng = rng.stream("peer");
    c_rng.shuffle(customers);
    p_rng.shuffle(providers);
    r_rng.shuffle(peers);

    const std::size_t n_c2p = std::min(customers.size(), providers.size());
    for (std::size_t i = 0; i < n_c2p; ++i)
        g.edges.push_back({customers[i], providers[i], EdgeKind::C2P});
    const std::size_t n_p2p = peers.size() / 2;
    for (std::size_t i = 0; i < n_p2p; ++i)
        g.edges.push_back({peers[2 * i], peers[2 * i + 1], EdgeKind::P2P});

    if (report) {
        report->c2p_formed = n_c2p;
        report->p2p_formed = n_p2p;
        report->unmatched_customer = customers.size() - n_c2p;
        report->unmatched_provider = providers.size() - n_c2p;
        report->unmatched_peer = peers.size() - 2 * n_p2p;
    }
    return g;
}

StubMultigraph match_stubs_2k(std::span<const DegreeVector> add, const SummaryProfile& profile,
                              Rng& rng, ConstructionReport* report) {
    check_add(add);
    const EdgeTargets targets = target_edge_counts(add);
    StubMultigraph g{add.size(), {}};
    g.edges.reserve(targets.c2p + targets.p2p);

    QuantilePool customers(add, StubColor::Customer);
    QuantilePool providers(add, StubColor::Provider);
    QuantilePool peers(add, StubColor::Peer);

    if (targets.c2p > 0) {
        Rng c2p_rng = rng.stream("jdd_c2p");
        CopulaSample cop = profile.jdd_c2p_pairs.empty()
                               ? uniform_copula(targets.c2p, c2p_rng)
                               : rescaled_jdd_copula(profile.jdd_c2p_pairs, targets.c2p, c2p_rng, false);
        for (std::size_t j = 0; j < targets.c2p; ++j) {
            const node_t c = customers.take(cop.rank(j, 0), targets.c2p);
            const node_t p = providers.take(cop.rank(j, 1), targets.c2p);
            g.edges.push_back({c, p, EdgeKind::C2P});
        }
    }
    if (targets.p2p > 0) {
        Rng p2p_rng = rng.stream("jdd_p2p");
        CopulaSample cop = profile.jdd_p2p_pairs.empty()
                               ? uniform_copula(targets.p2p, p2p_rng)
                               : rescaled_jdd_copula(profile.jdd_p2p_pairs, targets.p2p, p2p_rng, true);
        for (std::size_t j = 0; j < targets.p2p; ++j) {
            const node_t a = peers.take(cop.rank(j, 0), targets.p2p);
            const node_t b = peers.take(cop.rank(j, 1), targets.p2p);
            g.edges.push_back({a, b, EdgeKind::P2P});
        }
    }

    if (report) {
        report->c2p_formed = targets.c2p;
        report->p2p_formed = targets.p2p;
        report->unmatched_customer = customers.remaining();
        report->unmatched_provider = providers.remaining();
        report->unmatched_peer = peers.remaining();
    }
    return g;
}

RewireReport rewire_loops(StubMultigraph& graph, std::span<const std::int64_t> target_degree,
                          Rng& rng) {
    if (target_degree.size() != graph.node_count)
        throw std::invalid_argument("rewire_loops: degree list does not match node count");
    constexpr int max_attempts = 100;

    std::unordered_map<std::int64_t, std::vector<node_t>> by_degree;
    for (std::size_t v = 0; v < graph.node_count; ++v)
        by_degree[target_degree[v]].push_back(static_cast<node_t>(v));

    RewireReport report;
    std::unordered_set<std::uint64_t> present;
    present.reserve(graph.edges.size() * 2);
    std::vector<Edge> kept;
    kept.reserve(graph.edges.size());

    for (const Edge& e : graph.edges) {
        if (e.u != e.v && present.insert(pair_key(e.u, e.v)).second) {
            kept.push_back(e);
            continue;
        }
        const auto& first = by_degree[target_degree[e.u]];
        const auto& second = by_degree[target_degree[e.v]];
        bool moved = false;
        for (int attempt = 0; attempt < max_attempts; ++attempt) {
            const node_t a = first[rng.below(first.size())];
            const node_t b = second[rng.below(second.size())];
            if (a == b || present.count(pair_key(a, b)))
                continue;
            present.insert(pair_key(a, b));
            kept.push_back({a, b, e.kind});
            moved = true;
            break;
        }
        if (moved)
            ++report.rewired;
        else
            ++report.dropped;
    }
    graph.edges = std::move(kept);
    return report;
}

AnnotatedGraph finalize_graph(const StubMultigraph& graph, ConstructionReport* report) {
    SimplifyReport simplify;
    auto edges = simplify_edges(graph.edges, &simplify);
    if (edges.empty())
        throw EmptyGraphError();
    AnnotatedGraph full(graph.node_count, std::move(edges));
    AnnotatedGraph lcc = largest_connected_component(full);
    if (report) {
        report->simplify = simplify;
        report->lcc_nodes = lcc.node_count();
        report->lcc_edges = lcc.edge_count();
    }
    return lcc;
}

AnnotatedGraph construct_1k(std::span<const DegreeVector> add, Rng& rng,
                            ConstructionReport* report) {
    Rng match = rng.stream("match_1k");
    StubMultigraph g = match_stubs_1k(add, match, report);
    return finalize_graph(g, report);
}

AnnotatedGraph construct_2k(std::span<const DegreeVector> add, const SummaryProfile& profile,
                            Rng& rng, ConstructionReport* report) {
    Rng match = rng.stream("match_2k");
    StubMultigraph g = match_stubs_2k(add, profile, match, report);
    std::vector<std::int64_t> q(add.size());
    for (std::size_t j = 0; j < add.size(); ++j)
        q[j] = add[j].total();
    Rng rewire = rng.stream("rewire");
    RewireReport rw = rewire_loops(g, q, rewire);
    if (report)
        report->rewire = rw;
    return finalize_graph(g, report);
}

void to_json(nlohmann::json& j, const ConstructionReport& r) {
    j = nlohmann::json{{"c2p_formed", r.c2p_formed},
                       {"p2p_formed", r.p2p_formed},
                       {"unmatched_customer", r.unmatched_customer},
                       {"unmatched_provider", r.unmatched_provider},
                       {"unmatched_peer", r.unmatched_peer},
                       {"rewired", r.rewire.rewired},
                       {"rewire_dropped", r.rewire.dropped},
                       {"self_loops_removed", r.simplify.self_loops},
                       {"duplicates_collapsed", r.simplify.duplicates},
                       {"lcc_nodes", r.lcc_nodes},
                       {"lcc_edges", r.lcc_edges}};
}

}  // namespace astopo
