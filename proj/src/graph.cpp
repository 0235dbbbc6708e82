#include "astopo/graph.hpp"

#include <algorithm>
#include <unordered_map>

namespace astopo {

std::int64_t DegreeVector::operator[](StubColor c) const {
    switch (c) {
    case StubColor::Customer: return k1;
    case StubColor::Provider: return k2;
    case StubColor::Peer: return k3;
    }
    return 0;
}

std::int64_t& DegreeVector::operator[](StubColor c) {
    switch (c) {
    case StubColor::Customer: return k1;
    case StubColor::Provider: return k2;
    default: return k3;
    }
}

AnnotatedGraph::AnnotatedGraph(std::size_t node_count, std::vector<Edge> edges,
                               std::vector<std::string> labels)
    : edges_(std::move(edges)), degrees_(node_count), labels_(std::move(labels)) {
    if (labels_.empty()) {
        labels_.reserve(node_count);
        for (std::size_t i = 0; i < node_count; ++i)
            labels_.push_back(std::to_string(i));
    } else if (labels_.size() != node_count) {
        throw std::invalid_argument("label count does not match node count");
    }
    original_ids_.resize(node_count);
    for (std::size_t i = 0; i < node_count; ++i)
        original_ids_[i] = static_cast<node_t>(i);

    std::vector<std::size_t> counts(node_count + 1, 0);
    std::unordered_map<std::uint64_t, std::size_t> seen;
    seen.reserve(edges_.size() * 2);
    for (const Edge& e : edges_) {
        if (e.u >= node_count)
            throw NodeNotFound(e.u);
        if (e.v >= node_count)
            throw NodeNotFound(e.v);
        if (e.u == e.v)
            throw std::invalid_argument("self-loop at node " + std::to_string(e.u));
        if (!seen.emplace(pair_key(e.u, e.v), 0).second)
            throw std::invalid_argument("duplicate edge " + std::to_string(e.u) + "-" +
                                        std::to_string(e.v));
        if (e.kind == EdgeKind::C2P) {
            ++degrees_[e.u].k1;
            ++degrees_[e.v].k2;
            ++c2p_count_;
        } else {
            ++degrees_[e.u].k3;
            ++degrees_[e.v].k3;
        }
        ++counts[e.u + 1];
        ++counts[e.v + 1];
    }
    for (std::size_t i = 1; i <= node_count; ++i)
        counts[i] += counts[i - 1];
    offsets_ = counts;
    adjacency_.resize(edges_.size() * 2);
    std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (const Edge& e : edges_) {
        if (e.kind == EdgeKind::C2P) {
            adjacency_[cursor[e.u]++] = {e.v, LinkDir::ToProvider};
            adjacency_[cursor[e.v]++] = {e.u, LinkDir::ToCustomer};
        } else {
            adjacency_[cursor[e.u]++] = {e.v, LinkDir::ToPeer};
            adjacency_[cursor[e.v]++] = {e.u, LinkDir::ToPeer};
        }
    }
    for (std::size_t i = 0; i < node_count; ++i)
        std::sort(adjacency_.begin() + offsets_[i], adjacency_.begin() + offsets_[i + 1],
                  [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
}

std::span<const Neighbor> AnnotatedGraph::neighbors(node_t node) const {
    if (node >= node_count())
        throw NodeNotFound(node);
    return {adjacency_.data() + offsets_[node], offsets_[node + 1] - offsets_[node]};
}

const DegreeVector& AnnotatedGraph::degree_vector(node_t node) const {
    if (node >= node_count())
        throw NodeNotFound(node);
    return degrees_[node];
}

const std::string& AnnotatedGraph::label(node_t node) const {
    if (node >= node_count())
        throw NodeNotFound(node);
    return labels_[node];
}

std::optional<LinkDir> AnnotatedGraph::find_link(node_t a, node_t b) const {
    auto nbrs = neighbors(a);
    auto it = std::lower_bound(nbrs.begin(), nbrs.end(), b,
                               [](const Neighbor& n, node_t x) { return n.node < x; });
    if (it == nbrs.end() || it->node != b)
        return std::nullopt;
    return it->dir;
}

StubTotals AnnotatedGraph::stub_totals() const {
    StubTotals t;
    for (const DegreeVector& d : degrees_) {
        t.customer += d.k1;
        t.provider += d.k2;
        t.peer += d.k3;
    }
    return t;
}

std::size_t AnnotatedGraph::max_degree() const {
    std::size_t best = 0;
    for (std::size_t i = 0; i + 1 < offsets_.size(); ++i)
        best = std::max(best, offsets_[i + 1] - offsets_[i]);
    return best;
}

DegreeVector degree_vector(const AnnotatedGraph& graph, node_t node) {
    return graph.degree_vector(node);
}

StubTotals stub_totals(const AnnotatedGraph& graph) { return graph.stub_totals(); }

StubTotals stub_totals(std::span<const DegreeVector> vectors) {
    StubTotals t;
    for (const DegreeVector& d : vectors) {
        t.customer += d.k1;
        t.provider += d.k2;
        t.peer += d.k3;
    }
    return t;
}

std::vector<std::uint32_t> component_ids(const AnnotatedGraph& graph) {
    constexpr auto unset = static_cast<std::uint32_t>(-1);
    const std::size_t n = graph.node_count();
    std::vector<std::uint32_t> comp(n, unset);
    std::vector<node_t> stack;
    std::uint32_t next = 0;
    for (node_t s = 0; s < n; ++s) {
        if (comp[s] != unset)
            continue;
        comp[s] = next;
        stack.push_back(s);
        while (!stack.empty()) {
            node_t x = stack.back();
            stack.pop_back();
            for (const Neighbor& nb : graph.neighbors(x)) {
                if (comp[nb.node] == unset) {
                    comp[nb.node] = next;
                    stack.push_back(nb.node);
                }
            }
        }
        ++next;
    }
    return comp;
}

bool is_connected(const AnnotatedGraph& graph) {
    auto comp = component_ids(graph);
    return std::all_of(comp.begin(), comp.end(), [](std::uint32_t c) { return c == 0; });
}

AnnotatedGraph largest_connected_component(const AnnotatedGraph& graph) {
    const std::size_t n = graph.node_count();
    if (n == 0)
        return {};
    auto comp = component_ids(graph);
    std::vector<std::size_t> sizes;
    for (std::uint32_t c : comp) {
        if (c >= sizes.size())
            sizes.resize(c + 1, 0);
        ++sizes[c];
    }
    // components are numbered by smallest member, so the first maximum wins ties
    const auto best = static_cast<std::uint32_t>(
        std::max_element(sizes.begin(), sizes.end()) - sizes.begin());

    constexpr auto dropped = static_cast<node_t>(-1);
    std::vector<node_t> remap(n, dropped);
    std::vector<node_t> originals;
    std::vector<std::string> labels;
    originals.reserve(sizes[best]);
    labels.reserve(sizes[best]);
    for (node_t i = 0; i < n; ++i) {
        if (comp[i] == best) {
            remap[i] = static_cast<node_t>(originals.size());
            originals.push_back(i);
            labels.push_back(graph.label(i));
        }
    }
    std::vector<Edge> edges;
    for (const Edge& e : graph.edges())
        if (remap[e.u] != dropped)
            edges.push_back({remap[e.u], remap[e.v], e.kind});

    AnnotatedGraph out(originals.size(), std::move(edges), std::move(labels));
    out.original_ids_ = std::move(originals);
    return out;
}

std::vector<Edge> simplify_edges(std::span<const Edge> edges, SimplifyReport* report) {
    SimplifyReport local;
    std::unordered_map<std::uint64_t, std::size_t> kept_at;
    kept_at.reserve(edges.size() * 2);
    std::vector<Edge> out;
    out.reserve(edges.size());
    for (const Edge& e : edges) {
        if (e.u == e.v) {
            ++local.self_loops;
            continue;
        }
        auto [it, inserted] = kept_at.emplace(pair_key(e.u, e.v), out.size());
        if (!inserted) {
            ++local.duplicates;
            const Edge& first = out[it->second];
            bool same = first.kind == e.kind &&
                        (e.kind == EdgeKind::P2P || (first.u == e.u && first.v == e.v));
            if (!same)
                ++local.conflicting_duplicates;
            continue;
        }
        out.push_back(e);
    }
    if (report)
        *report = local;
    return out;
}

}  // namespace astopo
