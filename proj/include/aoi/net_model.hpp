#ifndef AOI_NET_MODEL_HPP
#define AOI_NET_MODEL_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace aoi {

// A unit of information held by a node. Only the marked timestamp may be
// altered by a timestomping adversary; true_gen_time records when the content
// was actually generated at the source.
struct Packet {
    double true_gen_time = 0.0;
    double marked_ts = 0.0;
    std::uint64_t version = 0;
    bool accurate = true;
};

enum class TopologyKind { disconnected, uni_ring, bi_ring, fully_connected, line, custom };

std::string to_string(TopologyKind kind);
TopologyKind topology_kind_from_string(const std::string& s);

struct Edge {
    int from = 0;
    int to = 0;
    double rate = 0.0;
};

// Node set {0..n-1} plus a distinguished source outside the user index space.
// source_rates[i] is the Poisson rate of source -> i updates; edges carry
// user-to-user gossip rates.
struct Topology {
    int n = 0;
    TopologyKind kind = TopologyKind::custom;
    double gossip_rate = 0.0;  // per-node total gossip rate lambda
    std::vector<Edge> edges;
    std::vector<double> source_rates;

    double total_source_rate() const;
    double total_user_rate() const;
    std::vector<std::vector<int>> out_neighbors() const;
    bool has_undirected_link(int u, int v) const;

    nlohmann::json to_json() const;
    static Topology from_json(const nlohmann::json& j);
};

enum class PlacementStrategy { equidistant, consolidated, random_links, greedy_fc, explicit_links };

std::string to_string(PlacementStrategy s);
PlacementStrategy placement_strategy_from_string(const std::string& s);

// A jammer severs an undirected user-to-user link: both directed edges die.
struct JammerPlacement {
    PlacementStrategy strategy = PlacementStrategy::explicit_links;
    int budget = 0;
    std::vector<std::pair<int, int>> severed;  // stored with first < second

    nlohmann::json to_json() const;
    static JammerPlacement from_json(const nlohmann::json& j);
};

// Generator for the canonical topologies. lambda_s is the total source update
// capacity (split lambda_s/n per user); lambda is the per-node gossip rate,
// split uniformly over out-neighbors.
Topology build_topology(TopologyKind kind, int n, double lambda_s, double lambda);

// Removes both directions of every severed link. When renormalize is set
// (the default) each surviving node re-splits its full gossip rate over its
// remaining out-neighbors; otherwise the original per-edge rates are kept and
// the severed rate is simply lost.
Topology apply_jammers(const Topology& topology, const JammerPlacement& placement,
                       bool renormalize = true);

JammerPlacement make_placement(PlacementStrategy strategy, const Topology& base, int n_jammers,
                               std::uint64_t seed = 0);

JammerPlacement explicit_placement(const Topology& base,
                                   std::vector<std::pair<int, int>> links);

}  // namespace aoi

#endif  // AOI_NET_MODEL_HPP
