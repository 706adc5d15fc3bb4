#include "aoi/net_model.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include <json.hpp>

namespace aoi {

std::string to_string(TopologyKind kind) {
    switch (kind) {
        case TopologyKind::disconnected: return "disconnected";
        case TopologyKind::uni_ring: return "uni_ring";
        case TopologyKind::bi_ring: return "bi_ring";
        case TopologyKind::fully_connected: return "fully_connected";
        case TopologyKind::line: return "line";
        case TopologyKind::custom: return "custom";
    }
    throw std::logic_error("unreachable topology kind");
}

TopologyKind topology_kind_from_string(const std::string& s) {
    if (s == "disconnected") return TopologyKind::disconnected;
    if (s == "uni_ring") return TopologyKind::uni_ring;
    if (s == "bi_ring") return TopologyKind::bi_ring;
    if (s == "fully_connected") return TopologyKind::fully_connected;
    if (s == "line") return TopologyKind::line;
    if (s == "custom") return TopologyKind::custom;
    throw std::invalid_argument("unknown topology kind: " + s);
}

std::string to_string(PlacementStrategy s) {
    switch (s) {
        case PlacementStrategy::equidistant: return "equidistant";
        case PlacementStrategy::consolidated: return "consolidated";
        case PlacementStrategy::random_links: return "random";
        case PlacementStrategy::greedy_fc: return "greedy_fc";
        case PlacementStrategy::explicit_links: return "explicit";
    }
    throw std::logic_error("unreachable placement strategy");
}

PlacementStrategy placement_strategy_from_string(const std::string& s) {
    if (s == "equidistant") return PlacementStrategy::equidistant;
    if (s == "consolidated") return PlacementStrategy::consolidated;
    if (s == "random") return PlacementStrategy::random_links;
    if (s == "greedy_fc") return PlacementStrategy::greedy_fc;
    if (s == "explicit") return PlacementStrategy::explicit_links;
    throw std::invalid_argument("unknown placement strategy: " + s);
}

double Topology::total_source_rate() const {
    return std::accumulate(source_rates.begin(), source_rates.end(), 0.0);
}

double Topology::total_user_rate() const {
    double r = 0.0;
    for (const Edge& e : edges) r += e.rate;
    return r;
}

std::vector<std::vector<int>> Topology::out_neighbors() const {
    std::vector<std::vector<int>> nb(static_cast<std::size_t>(n));
    for (const Edge& e : edges) nb[static_cast<std::size_t>(e.from)].push_back(e.to);
    return nb;
}

bool Topology::has_undirected_link(int u, int v) const {
    bool uv = false, vu = false;
    for (const Edge& e : edges) {
        if (e.from == u && e.to == v) uv = true;
        if (e.from == v && e.to == u) vu = true;
    }
    return uv || vu;
}

nlohmann::json Topology::to_json() const {
    nlohmann::json j;
    j["n"] = n;
    j["kind"] = to_string(kind);
    j["gossip_rate"] = gossip_rate;
    j["edges"] = nlohmann::json::array();
    for (const Edge& e : edges) j["edges"].push_back({e.from, e.to, e.rate});
    j["source_rates"] = source_rates;
    return j;
}

Topology Topology::from_json(const nlohmann::json& j) {
    Topology t;
    t.n = j.at("n").get<int>();
    t.kind = topology_kind_from_string(j.at("kind").get<std::string>());
    t.gossip_rate = j.at("gossip_rate").get<double>();
    for (const auto& e : j.at("edges")) {
        t.edges.push_back(Edge{e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<double>()});
    }
    t.source_rates = j.at("source_rates").get<std::vector<double>>();
    if (static_cast<int>(t.source_rates.size()) != t.n)
        throw std::invalid_argument("source_rates size mismatch");
    return t;
}

nlohmann::json JammerPlacement::to_json() const {
    nlohmann::json j;
    j["strategy"] = to_string(strategy);
    j["budget"] = budget;
    j["severed"] = nlohmann::json::array();
    for (const auto& [u, v] : severed) j["severed"].push_back({u, v});
    return j;
}

JammerPlacement JammerPlacement::from_json(const nlohmann::json& j) {
    JammerPlacement p;
    p.strategy = placement_strategy_from_string(j.at("strategy").get<std::string>());
    p.budget = j.at("budget").get<int>();
    for (const auto& l : j.at("severed"))
        p.severed.emplace_back(l.at(0).get<int>(), l.at(1).get<int>());
    return p;
}

namespace {

void add_uniform_out_edges(Topology& t, int from, const std::vector<int>& neighbors) {
    if (neighbors.empty()) return;
    const double rate = t.gossip_rate / static_cast<double>(neighbors.size());
    for (int to : neighbors) t.edges.push_back(Edge{from, to, rate});
}

std::pair<int, int> norm_link(int u, int v) { return {std::min(u, v), std::max(u, v)}; }

}  // namespace

Topology build_topology(TopologyKind kind, int n, double lambda_s, double lambda) {
    if (n < 1) throw std::invalid_argument("build_topology: n must be >= 1");
    if (lambda_s <= 0.0) throw std::invalid_argument("build_topology: lambda_s must be > 0");
    if (lambda < 0.0) throw std::invalid_argument("build_topology: lambda must be >= 0");
    if (kind == TopologyKind::custom)
        throw std::invalid_argument("build_topology: custom topologies are built explicitly");

    Topology t;
    t.n = n;
    t.kind = kind;
    t.gossip_rate = lambda;
    t.source_rates.assign(static_cast<std::size_t>(n), lambda_s / static_cast<double>(n));

    for (int i = 0; i < n; ++i) {
        std::vector<int> nb;
        switch (kind) {
            case TopologyKind::disconnected:
                break;
            case TopologyKind::uni_ring:
                if (n > 1) nb.push_back((i + 1) % n);
                break;
            case TopologyKind::bi_ring:
                if (n == 2) {
                    nb.push_back(1 - i);
                } else if (n > 2) {
                    nb.push_back((i + 1) % n);
                    nb.push_back((i + n - 1) % n);
                }
                break;
            case TopologyKind::line:
                if (i + 1 < n) nb.push_back(i + 1);
                if (i - 1 >= 0) nb.push_back(i - 1);
                break;
            case TopologyKind::fully_connected:
                for (int j = 0; j < n; ++j)
                    if (j != i) nb.push_back(j);
                break;
            case TopologyKind::custom:
                break;
        }
        add_uniform_out_edges(t, i, nb);
    }
    return t;
}

Topology apply_jammers(const Topology& topology, const JammerPlacement& placement,
                       bool renormalize) {
    std::set<std::pair<int, int>> cut;
    for (const auto& [u, v] : placement.severed) {
        auto link = norm_link(u, v);
        if (!topology.has_undirected_link(link.first, link.second))
            throw std::invalid_argument("apply_jammers: severed link absent from topology");
        cut.insert(link);
    }
    if (static_cast<int>(cut.size()) > placement.budget)
        throw std::invalid_argument("apply_jammers: placement exceeds budget");

    Topology out = topology;
    out.edges.clear();
    for (const Edge& e : topology.edges) {
        if (!cut.count(norm_link(e.from, e.to))) out.edges.push_back(e);
    }
    if (renormalize) {
        std::vector<int> deg(static_cast<std::size_t>(out.n), 0);
        for (const Edge& e : out.edges) ++deg[static_cast<std::size_t>(e.from)];
        for (Edge& e : out.edges)
            e.rate = out.gossip_rate / static_cast<double>(deg[static_cast<std::size_t>(e.from)]);
    }
    return out;
}

namespace {

bool is_ring(const Topology& t) {
    return t.kind == TopologyKind::uni_ring || t.kind == TopologyKind::bi_ring;
}

// Ring link i is the undirected link between node i and node (i+1) mod n.
std::pair<int, int> ring_link(const Topology& t, int i) {
    return norm_link(i, (i + 1) % t.n);
}

std::vector<std::pair<int, int>> undirected_links(const Topology& t) {
    std::set<std::pair<int, int>> links;
    for (const Edge& e : t.edges) links.insert(norm_link(e.from, e.to));
    return {links.begin(), links.end()};
}

}  // namespace

JammerPlacement explicit_placement(const Topology& base,
                                   std::vector<std::pair<int, int>> links) {
    JammerPlacement p;
    p.strategy = PlacementStrategy::explicit_links;
    p.budget = static_cast<int>(links.size());
    for (auto& [u, v] : links) p.severed.push_back(norm_link(u, v));
    for (const auto& [u, v] : p.severed)
        if (!base.has_undirected_link(u, v))
            throw std::invalid_argument("explicit_placement: link absent from topology");
    return p;
}

JammerPlacement make_placement(PlacementStrategy strategy, const Topology& base, int n_jammers,
                               std::uint64_t seed) {
    const auto links = undirected_links(base);
    if (n_jammers < 0 || n_jammers > static_cast<int>(links.size()))
        throw std::invalid_argument("make_placement: budget exceeds link count");

    JammerPlacement p;
    p.strategy = strategy;
    p.budget = n_jammers;

    switch (strategy) {
        case PlacementStrategy::equidistant: {
            if (!is_ring(base))
                throw std::invalid_argument("make_placement: equidistant requires a ring");
            // n_jammers cut positions spread as evenly as possible around the ring.
            for (int k = 0; k < n_jammers; ++k) {
                int pos = static_cast<int>(
                    (static_cast<long long>(k) * base.n) / n_jammers);
                p.severed.push_back(ring_link(base, pos));
            }
            break;
        }
        case PlacementStrategy::consolidated: {
            if (!is_ring(base))
                throw std::invalid_argument("make_placement: consolidated requires a ring");
            for (int k = 0; k < n_jammers; ++k) p.severed.push_back(ring_link(base, k));
            break;
        }
        case PlacementStrategy::random_links: {
            std::vector<std::size_t> idx(links.size());
            std::iota(idx.begin(), idx.end(), std::size_t{0});
            std::mt19937_64 rng(seed);
            std::shuffle(idx.begin(), idx.end(), rng);
            for (int k = 0; k < n_jammers; ++k) p.severed.push_back(links[idx[static_cast<std::size_t>(k)]]);
            break;
        }
        case PlacementStrategy::greedy_fc: {
            if (base.kind != TopologyKind::fully_connected)
                throw std::invalid_argument("make_placement: greedy_fc requires fully_connected");
            // Isolate victims 0, 1, ... one at a time; each victim costs its
            // remaining incident links. Leftover budget goes to links between
            // the next victim and the surviving ball.
            int remaining = n_jammers;
            int victim = 0;
            while (victim < base.n - 1 && remaining >= base.n - 1 - victim) {
                for (int j = victim + 1; j < base.n; ++j) p.severed.push_back(norm_link(victim, j));
                remaining -= base.n - 1 - victim;
                ++victim;
            }
            for (int j = victim + 1; j < base.n && remaining > 0; ++j, --remaining)
                p.severed.push_back(norm_link(victim, j));
            break;
        }
        case PlacementStrategy::explicit_links:
            throw std::invalid_argument("make_placement: explicit placements carry their own links");
    }

    std::sort(p.severed.begin(), p.severed.end());
    return p;
}

}  // namespace aoi
