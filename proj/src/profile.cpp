#include "astopo/profile.hpp"

#include <fstream>
#include <map>
#include <tuple>

#include "astopo/ingest.hpp"

namespace astopo {

std::vector<std::int64_t> SummaryProfile::degree_samples() const {
    std::vector<std::int64_t> out;
    out.reserve(add_samples.size());
    for (const DegreeVector& d : add_samples)
        out.push_back(d.total());
    return out;
}

SummaryProfile extract_profile(const AnnotatedGraph& graph) {
    SummaryProfile p;
    p.n = graph.node_count();
    p.m = graph.edge_count();
    auto dv = graph.degree_vectors();
    p.add_samples.assign(dv.begin(), dv.end());
    p.jdd_c2p_pairs.reserve(graph.c2p_count());
    p.jdd_p2p_pairs.reserve(graph.p2p_count());
    for (const Edge& e : graph.edges()) {
        DegreePair pair{dv[e.u].total(), dv[e.v].total()};
        if (e.kind == EdgeKind::C2P)
            p.jdd_c2p_pairs.push_back(pair);
        else
            p.jdd_p2p_pairs.push_back(pair);
    }
    return p;
}

std::vector<std::int64_t> marginal_ad(const SummaryProfile& profile, StubColor color) {
    std::vector<std::int64_t> out;
    out.reserve(profile.add_samples.size());
    for (const DegreeVector& d : profile.add_samples)
        out.push_back(d[color]);
    return out;
}

namespace {

// (c, k) with k the full degree vector
using ColoredDegree = std::tuple<int, DegreeVector>;

template <typename T>
std::pair<T, T> ordered(const T& a, const T& b) {
    return b < a ? std::pair{b, a} : std::pair{a, b};
}

}  // namespace

ConsistencyReport check_2k_to_1k_consistency(const AnnotatedGraph& graph) {
    auto dv = graph.degree_vectors();

    // Full 2K-annotated distribution n(k~, k~'), symmetric, keyed by the
    // unordered pair of colored degrees.
    std::map<std::pair<ColoredDegree, ColoredDegree>, std::int64_t> full;
    for (const Edge& e : graph.edges()) {
        const int cu = e.kind == EdgeKind::C2P ? 1 : 3;
        const int cv = e.kind == EdgeKind::C2P ? 2 : 3;
        ++full[ordered(ColoredDegree{cu, dv[e.u]}, ColoredDegree{cv, dv[e.v]})];
    }
    auto n_full = [&](const ColoredDegree& a, const ColoredDegree& b) -> std::int64_t {
        auto it = full.find(ordered(a, b));
        return it == full.end() ? 0 : it->second;
    };

    // n(k,k') mu(k,k') = sum over ordered color pairs of n(k~,k~') mu(k~,k~')
    std::map<std::pair<DegreeVector, DegreeVector>, std::int64_t> weighted;
    for (const auto& [key, count] : full) {
        (void)count;
        weighted.emplace(ordered(std::get<1>(key.first), std::get<1>(key.second)), 0);
    }
    for (auto& [vecs, value] : weighted) {
        for (int c = 1; c <= 3; ++c) {
            for (int c2 = 1; c2 <= 3; ++c2) {
                ColoredDegree a{c, vecs.first};
                ColoredDegree b{c2, vecs.second};
                const std::int64_t mu = a == b ? 2 : 1;
                value += n_full(a, b) * mu;
            }
        }
    }

    // n(k) = sum_k' n(k,k') mu(k,k') / k, where the sum runs over every k'
    std::map<DegreeVector, std::int64_t> from_2k;
    for (const auto& [vecs, value] : weighted) {
        const std::int64_t mu_vec = vecs.first == vecs.second ? 2 : 1;
        // value already carries mu(k,k') because it sums n*mu over colors;
        // n(k,k') itself is value / mu_vec.
        if (value % mu_vec != 0)
            return {false, 0, {vecs.first}};
        const std::int64_t n_kk = value / mu_vec;
        from_2k[vecs.first] += n_kk * mu_vec;
        if (vecs.first != vecs.second)
            from_2k[vecs.second] += n_kk * mu_vec;
    }

    std::map<DegreeVector, std::int64_t> direct;
    for (const DegreeVector& d : dv)
        if (d.total() >= 1)
            ++direct[d];

    ConsistencyReport rep;
    for (const auto& [vec, count] : direct) {
        ++rep.classes_checked;
        auto it = from_2k.find(vec);
        const std::int64_t stubs = it == from_2k.end() ? 0 : it->second;
        if (stubs % vec.total() != 0 || stubs / vec.total() != count)
            rep.violations.push_back(vec);
    }
    for (const auto& [vec, stubs] : from_2k) {
        (void)stubs;
        if (!direct.contains(vec))
            rep.violations.push_back(vec);
    }
    rep.consistent = rep.violations.empty();
    return rep;
}

void to_json(nlohmann::json& j, const SummaryProfile& p) {
    auto add = nlohmann::json::array();
    for (const DegreeVector& d : p.add_samples)
        add.push_back({d.k1, d.k2, d.k3});
    j = nlohmann::json{{"n", p.n},
                       {"m", p.m},
                       {"add", std::move(add)},
                       {"jdd_c2p", p.jdd_c2p_pairs},
                       {"jdd_p2p", p.jdd_p2p_pairs}};
}

void from_json(const nlohmann::json& j, SummaryProfile& p) {
    j.at("n").get_to(p.n);
    j.at("m").get_to(p.m);
    p.add_samples.clear();
    for (const auto& row : j.at("add")) {
        if (row.size() != 3)
            throw std::invalid_argument("profile: ADD rows must have 3 entries");
        p.add_samples.push_back({row[0].get<std::int64_t>(), row[1].get<std::int64_t>(),
                                 row[2].get<std::int64_t>()});
    }
    j.at("jdd_c2p").get_to(p.jdd_c2p_pairs);
    j.at("jdd_p2p").get_to(p.jdd_p2p_pairs);
    if (p.add_samples.size() != p.n)
        throw std::invalid_argument("profile: |add| != n");
    if (p.jdd_c2p_pairs.size() + p.jdd_p2p_pairs.size() != p.m)
        throw std::invalid_argument("profile: |jdd_c2p| + |jdd_p2p| != m");
}

SummaryProfile read_profile_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw IoError(path + ": " + e.what());
    }
    return j.get<SummaryProfile>();
}

void write_profile_file(const SummaryProfile& profile, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw IoError("cannot open " + path + " for writing");
    out << nlohmann::json(profile).dump() << '\n';
}

}  // namespace astopo
