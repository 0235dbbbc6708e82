#include <doctest.h>

#include <numeric>

#include "astopo/construct.hpp"
#include "astopo/ingest.hpp"
#include "astopo/profile.hpp"
#include "oracles.hpp"

using namespace astopo;

namespace {

// Triangle: A -> B c2p, B -> C c2p, A -- C p2p.
AnnotatedGraph triangle() {
    return AnnotatedGraph(3, {{0, 1, EdgeKind::C2P}, {1, 2, EdgeKind::C2P}, {0, 2, EdgeKind::P2P}});
}

}  // namespace

TEST_CASE("profile of a single c2p edge") {
    const SummaryProfile p = extract_profile(AnnotatedGraph(2, {{0, 1, EdgeKind::C2P}}));
    CHECK(p.n == 2);
    CHECK(p.m == 1);
    CHECK(p.add_samples == std::vector<DegreeVector>{{1, 0, 0}, {0, 1, 0}});
    CHECK(p.jdd_c2p_pairs == std::vector<DegreePair>{{1, 1}});
    CHECK(p.jdd_p2p_pairs.empty());
    CHECK(marginal_ad(p, StubColor::Customer) == std::vector<std::int64_t>{1, 0});
    CHECK(marginal_ad(p, StubColor::Peer) == std::vector<std::int64_t>{0, 0});
}

TEST_CASE("profile of the annotated triangle") {
    const SummaryProfile p = extract_profile(triangle());
    CHECK(p.jdd_c2p_pairs == std::vector<DegreePair>{{2, 2}, {2, 2}});
    CHECK(p.jdd_p2p_pairs == std::vector<DegreePair>{{2, 2}});
    CHECK(check_2k_to_1k_consistency(triangle()).consistent);
}

TEST_CASE("c2p pairs are ordered customer first") {
    // star: node 0 provides for 1, 2, 3
    const AnnotatedGraph g(4, {{1, 0, EdgeKind::C2P}, {2, 0, EdgeKind::C2P}, {3, 0, EdgeKind::C2P}});
    const SummaryProfile p = extract_profile(g);
    for (const auto& pair : p.jdd_c2p_pairs)
        CHECK(pair == DegreePair{1, 3});
}

TEST_CASE("marginal projection") {
    SummaryProfile p;
    p.n = 2;
    p.add_samples = {{1, 2, 3}, {0, 0, 4}};
    CHECK(marginal_ad(p, StubColor::Peer) == std::vector<std::int64_t>{3, 4});
    CHECK(marginal_ad(p, StubColor::Provider) == std::vector<std::int64_t>{2, 0});
}

TEST_CASE("consistency holds on single edges") {
    CHECK(check_2k_to_1k_consistency(AnnotatedGraph(2, {{0, 1, EdgeKind::C2P}})).consistent);
    CHECK(check_2k_to_1k_consistency(AnnotatedGraph(2, {{0, 1, EdgeKind::P2P}})).consistent);
}

TEST_CASE("profile identities on random constructor outputs") {
    Rng rng(123);
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = 5 + rng.below(60);
        std::vector<DegreeVector> add(n);
        for (auto& d : add)
            d = {static_cast<std::int64_t>(rng.below(3)), static_cast<std::int64_t>(rng.below(3)),
                 static_cast<std::int64_t>(rng.below(3))};
        add[0].k1 += 1;
        add[1].k2 += 1;
        AnnotatedGraph g;
        try {
            g = construct_1k(add, rng);
        } catch (const EmptyGraphError&) {
            continue;
        }
        const ConsistencyReport rep = check_2k_to_1k_consistency(g);
        CHECK(rep.consistent);
        CHECK(rep.violations.empty());

        const SummaryProfile p = extract_profile(g);
        CHECK(p.add_samples.size() == p.n);
        CHECK(p.jdd_c2p_pairs.size() == g.c2p_count());
        CHECK(p.jdd_p2p_pairs.size() == g.p2p_count());
        const auto dd = p.degree_samples();
        CHECK(std::accumulate(dd.begin(), dd.end(), std::int64_t{0}) == 2 * static_cast<std::int64_t>(p.m));
        const StubTotals s = stub_totals(g);
        auto sum = [&](StubColor c) {
            const auto v = marginal_ad(p, c);
            return std::accumulate(v.begin(), v.end(), std::int64_t{0});
        };
        CHECK(sum(StubColor::Customer) == s.customer);
        CHECK(sum(StubColor::Provider) == s.provider);
        CHECK(sum(StubColor::Peer) == s.peer);
    }
}

TEST_CASE("profile JSON layout and round trip") {
    const SummaryProfile p = extract_profile(triangle());
    const nlohmann::json j = p;
    CHECK(j.at("n") == 3);
    CHECK(j.at("m") == 3);
    CHECK(j.at("add").size() == 3);
    CHECK(j.at("jdd_c2p") == nlohmann::json::parse("[[2,2],[2,2]]"));
    CHECK(j.at("jdd_p2p") == nlohmann::json::parse("[[2,2]]"));
    const SummaryProfile back = j.get<SummaryProfile>();
    CHECK(back.add_samples == p.add_samples);
    CHECK(back.jdd_c2p_pairs == p.jdd_c2p_pairs);
    CHECK_THROWS(nlohmann::json::parse(R"({"n":2,"m":0,"add":[[1,0,0]],"jdd_c2p":[],"jdd_p2p":[]})")
                     .get<SummaryProfile>());
}

TEST_CASE("fixture profile") {
    const AnnotatedGraph g = read_graph_file(ASTOPO_FIXTURE);
    CHECK(g.node_count() == 19036);
    CHECK(g.edge_count() == 40115);
    CHECK(stub_totals(g) == StubTotals{36188, 36188, 7854});
    CHECK(check_2k_to_1k_consistency(g).consistent);
    const SummaryProfile p = extract_profile(g);
    CHECK(marginal_ad(p, StubColor::Peer).size() == 19036);
}
