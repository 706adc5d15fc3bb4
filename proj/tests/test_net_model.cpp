#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include <json.hpp>

#include "aoi/net_model.hpp"

using namespace aoi;

namespace {

int out_degree(const Topology& t, int node) {
    int d = 0;
    for (const Edge& e : t.edges)
        if (e.from == node) ++d;
    return d;
}

double edge_rate(const Topology& t, int from, int to) {
    for (const Edge& e : t.edges)
        if (e.from == from && e.to == to) return e.rate;
    return -1.0;
}

}  // namespace

TEST_CASE("disconnected topology has no gossip edges") {
    const Topology t = build_topology(TopologyKind::disconnected, 4, 2.0, 1.0);
    CHECK(t.edges.empty());
    REQUIRE(t.source_rates.size() == 4);
    for (double r : t.source_rates) CHECK(r == doctest::Approx(0.5));
    CHECK(t.total_source_rate() == doctest::Approx(2.0));
}

TEST_CASE("uni ring sends the full gossip rate to the successor") {
    const Topology t = build_topology(TopologyKind::uni_ring, 4, 1.0, 3.0);
    CHECK(t.edges.size() == 4);
    for (int i = 0; i < 4; ++i) CHECK(edge_rate(t, i, (i + 1) % 4) == doctest::Approx(3.0));
}

TEST_CASE("bi ring splits the gossip rate between both neighbors") {
    const Topology t = build_topology(TopologyKind::bi_ring, 6, 1.0, 2.0);
    CHECK(t.edges.size() == 12);
    for (int i = 0; i < 6; ++i) {
        CHECK(edge_rate(t, i, (i + 1) % 6) == doctest::Approx(1.0));
        CHECK(edge_rate(t, i, (i + 5) % 6) == doctest::Approx(1.0));
    }
}

TEST_CASE("two-node bi ring collapses to a single neighbor per node") {
    const Topology t = build_topology(TopologyKind::bi_ring, 2, 1.0, 2.0);
    CHECK(t.edges.size() == 2);
    CHECK(edge_rate(t, 0, 1) == doctest::Approx(2.0));
    CHECK(edge_rate(t, 1, 0) == doctest::Approx(2.0));
}

TEST_CASE("fully connected splits the rate over n-1 neighbors") {
    const Topology t = build_topology(TopologyKind::fully_connected, 4, 1.0, 3.0);
    CHECK(t.edges.size() == 12);
    for (const Edge& e : t.edges) CHECK(e.rate == doctest::Approx(1.0));
    CHECK(t.total_user_rate() == doctest::Approx(12.0));
}

TEST_CASE("line endpoints keep the full rate, interior nodes split it") {
    const Topology t = build_topology(TopologyKind::line, 3, 1.0, 1.0);
    CHECK(edge_rate(t, 0, 1) == doctest::Approx(1.0));
    CHECK(edge_rate(t, 2, 1) == doctest::Approx(1.0));
    CHECK(edge_rate(t, 1, 0) == doctest::Approx(0.5));
    CHECK(edge_rate(t, 1, 2) == doctest::Approx(0.5));
}

TEST_CASE("build_topology rejects bad arguments") {
    CHECK_THROWS_AS(build_topology(TopologyKind::bi_ring, 0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(build_topology(TopologyKind::bi_ring, 4, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(build_topology(TopologyKind::bi_ring, 4, 1.0, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(build_topology(TopologyKind::custom, 4, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("topology json round trip") {
    const Topology t = build_topology(TopologyKind::bi_ring, 5, 2.0, 3.0);
    const Topology u = Topology::from_json(t.to_json());
    CHECK(u.n == t.n);
    CHECK(u.kind == t.kind);
    CHECK(u.gossip_rate == t.gossip_rate);
    REQUIRE(u.edges.size() == t.edges.size());
    for (std::size_t i = 0; i < t.edges.size(); ++i) {
        CHECK(u.edges[i].from == t.edges[i].from);
        CHECK(u.edges[i].to == t.edges[i].to);
        CHECK(u.edges[i].rate == t.edges[i].rate);
    }
    CHECK(u.source_rates == t.source_rates);
}

TEST_CASE("severing a link removes both directions and renormalizes") {
    const Topology base = build_topology(TopologyKind::bi_ring, 6, 1.0, 2.0);
    const Topology cut = apply_jammers(base, explicit_placement(base, {{0, 1}}));
    CHECK(edge_rate(cut, 0, 1) == -1.0);
    CHECK(edge_rate(cut, 1, 0) == -1.0);
    // surviving nodes re-split their full gossip rate
    CHECK(edge_rate(cut, 0, 5) == doctest::Approx(2.0));
    CHECK(edge_rate(cut, 1, 2) == doctest::Approx(2.0));
    CHECK(edge_rate(cut, 2, 1) == doctest::Approx(1.0));
}

TEST_CASE("severing without renormalization just loses the rate") {
    const Topology base = build_topology(TopologyKind::bi_ring, 6, 1.0, 2.0);
    const Topology cut = apply_jammers(base, explicit_placement(base, {{0, 1}}), false);
    CHECK(edge_rate(cut, 0, 5) == doctest::Approx(1.0));
    CHECK(cut.total_user_rate() == doctest::Approx(base.total_user_rate() - 2.0));
}

TEST_CASE("apply_jammers validates the placement") {
    const Topology ring = build_topology(TopologyKind::bi_ring, 6, 1.0, 1.0);
    JammerPlacement p;
    p.budget = 1;
    p.severed = {{0, 3}};  // not a ring link
    CHECK_THROWS_AS(apply_jammers(ring, p), std::invalid_argument);
    JammerPlacement over;
    over.budget = 0;
    over.severed = {{0, 1}};
    CHECK_THROWS_AS(apply_jammers(ring, over), std::invalid_argument);
}

TEST_CASE("equidistant placement spreads cuts evenly around the ring") {
    const Topology ring = build_topology(TopologyKind::bi_ring, 8, 1.0, 1.0);
    const JammerPlacement p = make_placement(PlacementStrategy::equidistant, ring, 4);
    const std::vector<std::pair<int, int>> want = {{0, 1}, {2, 3}, {4, 5}, {6, 7}};
    CHECK(p.severed == want);
}

TEST_CASE("consolidated placement cuts consecutive ring links and isolates the interior") {
    const Topology ring = build_topology(TopologyKind::bi_ring, 8, 1.0, 1.0);
    const JammerPlacement p = make_placement(PlacementStrategy::consolidated, ring, 3);
    const std::vector<std::pair<int, int>> want = {{0, 1}, {1, 2}, {2, 3}};
    CHECK(p.severed == want);
    const Topology cut = apply_jammers(ring, p);
    CHECK(out_degree(cut, 1) == 0);
    CHECK(out_degree(cut, 2) == 0);
    CHECK(out_degree(cut, 0) == 1);
    CHECK(out_degree(cut, 3) == 1);
}

TEST_CASE("greedy placement on the complete graph isolates nodes one at a time") {
    const Topology fc = build_topology(TopologyKind::fully_connected, 5, 1.0, 1.0);

    // isolating k of n nodes costs k*n - k*(k+1)/2 links
    const JammerPlacement two = make_placement(PlacementStrategy::greedy_fc, fc, 7);
    CHECK(two.severed.size() == 7);
    const Topology cut2 = apply_jammers(fc, two);
    CHECK(out_degree(cut2, 0) == 0);
    CHECK(out_degree(cut2, 1) == 0);
    CHECK(out_degree(cut2, 2) == 2);

    // leftover budget starts on the next victim
    const JammerPlacement partial = make_placement(PlacementStrategy::greedy_fc, fc, 5);
    const Topology cut1 = apply_jammers(fc, partial);
    CHECK(out_degree(cut1, 0) == 0);
    CHECK(out_degree(cut1, 1) == 2);
    CHECK(edge_rate(cut1, 2, 1) == -1.0);
}

TEST_CASE("random placement is seed-deterministic and stays within the link set") {
    const Topology fc = build_topology(TopologyKind::fully_connected, 6, 1.0, 1.0);
    const JammerPlacement a = make_placement(PlacementStrategy::random_links, fc, 5, 7);
    const JammerPlacement b = make_placement(PlacementStrategy::random_links, fc, 5, 7);
    const JammerPlacement c = make_placement(PlacementStrategy::random_links, fc, 5, 8);
    CHECK(a.severed == b.severed);
    CHECK(a.severed != c.severed);
    const std::set<std::pair<int, int>> unique(a.severed.begin(), a.severed.end());
    CHECK(unique.size() == 5);
    for (const auto& [u, v] : a.severed) CHECK(fc.has_undirected_link(u, v));
}

TEST_CASE("make_placement rejects invalid requests") {
    const Topology fc = build_topology(TopologyKind::fully_connected, 4, 1.0, 1.0);
    const Topology ring = build_topology(TopologyKind::bi_ring, 4, 1.0, 1.0);
    CHECK_THROWS_AS(make_placement(PlacementStrategy::equidistant, fc, 1), std::invalid_argument);
    CHECK_THROWS_AS(make_placement(PlacementStrategy::greedy_fc, ring, 1), std::invalid_argument);
    CHECK_THROWS_AS(make_placement(PlacementStrategy::random_links, ring, 5),
                    std::invalid_argument);
    CHECK_THROWS_AS(make_placement(PlacementStrategy::explicit_links, ring, 1),
                    std::invalid_argument);
}

TEST_CASE("jammer placement json round trip") {
    const Topology ring = build_topology(TopologyKind::bi_ring, 8, 1.0, 1.0);
    const JammerPlacement p = make_placement(PlacementStrategy::equidistant, ring, 3);
    const JammerPlacement q = JammerPlacement::from_json(p.to_json());
    CHECK(q.strategy == p.strategy);
    CHECK(q.budget == p.budget);
    CHECK(q.severed == p.severed);
}
